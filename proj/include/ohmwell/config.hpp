#ifndef OHMWELL_CONFIG_HPP
#define OHMWELL_CONFIG_HPP

/// @file config.hpp
/// @brief Declarative description of one simulation: domain, material, Ohm
///        law, initial data, time grid, quadrature, and output requests.
///        JSON parsing is strict (unknown keys are errors) and every
///        validation failure names the offending key path.

#include "ohmwell/cara_ode.hpp"
#include "ohmwell/materials.hpp"
#include "ohmwell/ohm.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ohmwell {

/// Initial field profile: identically zero, a combination of the raw
/// trigonometric modes, or a piecewise-linear table.
struct InitialSpec {
    enum class Kind { zero, modes, table };
    Kind kind = Kind::zero;

    /// modes: coefficient i multiplies raw mode i (electric: sin((i+1) pi x / L),
    /// magnetic: 1 for i = 0 and cos(i pi x / L) beyond).
    std::vector<double> mode_coeffs;

    std::vector<double> x;  ///< table: strictly increasing, covering [0, L]
    std::vector<double> v;
};

struct TimeSpec {
    double horizon = 1.0;
    double dt = 1e-3;
    OdeScheme scheme = OdeScheme::rk4;
    int output_stride = 10;  ///< keep every n-th integration instant
};

struct QuadratureSpec {
    int points = 8;  ///< Gauss-Legendre points per panel
    int panels = 0;  ///< 0 picks the default max(8, 2 * modes)
};

struct OutputSpec {
    std::string directory;              ///< empty: nothing is written
    std::vector<double> snapshot_times; ///< field snapshots at the nearest instants
};

struct SimulationConfig {
    double L = 1.0;
    int modes = 4;
    MaterialSpec material;
    OhmLaw ohm;
    InitialSpec e0;
    InitialSpec h0;
    TimeSpec time;
    QuadratureSpec quadrature;
    OutputSpec output;
};

/// Check all cross-field constraints (positive extents, table coverage,
/// stride bounds, source time range covering the horizon, ...).  Throws
/// config_error whose message names the key path, e.g. "time.dt".
void validate(const SimulationConfig& config);

/// Parse a strict-JSON config file.  Unknown keys, wrong types, and failed
/// validation all throw config_error with the key path (and the line for
/// syntax errors).
SimulationConfig parse_config(const std::filesystem::path& file);

/// Parse from an in-memory JSON document (same strictness).
SimulationConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical JSON serialisation; parse_config_text(serialize_config(c))
/// reproduces c exactly.
std::string serialize_config(const SimulationConfig& config);

/// FNV-1a (64-bit) hash of the canonical serialisation with the output
/// section cleared (the destination does not affect the physics), as 16 hex
/// digits.  Stable under key reordering in the source file.
std::string config_hash(const SimulationConfig& config);

} // namespace ohmwell

#endif
