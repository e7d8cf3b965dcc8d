#ifndef OHMWELL_RNG_HPP
#define OHMWELL_RNG_HPP

#include <cstdint>
#include <random>

namespace ohmwell {

/// Deterministic uniform sampler.  std::mt19937_64 has a portable bit
/// stream, and the [0,1) mapping below avoids the implementation-defined
/// behaviour of std::uniform_real_distribution, so recorded seeds reproduce
/// the exact same samples on every platform.
class UniformSampler {
public:
    explicit UniformSampler(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double next01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double next(double lo, double hi) { return lo + (hi - lo) * next01(); }

private:
    std::mt19937_64 gen_;
};

} // namespace ohmwell

#endif
