#include "ohmwell/materials.hpp"
#include "ohmwell/errors.hpp"
#include "ohmwell/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ohmwell {
namespace {

double eval_coefficient(const CoefficientSpec& spec, double x, const char* name) {
    switch (spec.kind) {
        case CoefficientSpec::Kind::constant:
            return spec.value;
        case CoefficientSpec::Kind::piecewise: {
            if (spec.breaks.size() != spec.pieces.size() + 1)
                throw model_error(std::string(name) + ": piecewise profile needs one more breakpoint than pieces");
            if (x < spec.breaks.front() || x > spec.breaks.back()) {
                std::ostringstream os;
                os << name << ": sample point " << x << " outside profile range ["
                   << spec.breaks.front() << ", " << spec.breaks.back() << "]";
                throw model_error(os.str());
            }
            // Value on [breaks[i], breaks[i+1]); the last piece owns x = L.
            auto it = std::upper_bound(spec.breaks.begin(), spec.breaks.end(), x);
            std::size_t i = static_cast<std::size_t>(it - spec.breaks.begin());
            if (i == 0) i = 1;
            if (i > spec.pieces.size()) i = spec.pieces.size();
            return spec.pieces[i - 1];
        }
        case CoefficientSpec::Kind::table: {
            if (spec.x.size() != spec.v.size() || spec.x.size() < 2)
                throw model_error(std::string(name) + ": table needs matching x/v arrays of length >= 2");
            if (x < spec.x.front() || x > spec.x.back()) {
                std::ostringstream os;
                os << name << ": sample point " << x << " outside table range ["
                   << spec.x.front() << ", " << spec.x.back() << "]";
                throw model_error(os.str());
            }
            auto it = std::upper_bound(spec.x.begin(), spec.x.end(), x);
            std::size_t i = static_cast<std::size_t>(it - spec.x.begin());
            if (i == 0) i = 1;
            if (i >= spec.x.size()) i = spec.x.size() - 1;
            const double t = (x - spec.x[i - 1]) / (spec.x[i] - spec.x[i - 1]);
            return spec.v[i - 1] + t * (spec.v[i] - spec.v[i - 1]);
        }
    }
    throw model_error(std::string(name) + ": unknown coefficient kind");
}

void sample_profile(const CoefficientSpec& spec, std::span<const double> nodes,
                    const char* name, std::vector<double>& out,
                    double& lo, double& hi) {
    out.resize(nodes.size());
    lo = std::numeric_limits<double>::infinity();
    hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double val = eval_coefficient(spec, nodes[i], name);
        if (!(val > 0.0)) {
            std::ostringstream os;
            os << name << ": coercivity violated at node " << i << " (x = " << nodes[i]
               << "): sampled value " << val << " is not strictly positive";
            throw model_error(os.str());
        }
        out[i] = val;
        lo = std::min(lo, val);
        hi = std::max(hi, val);
    }
}

} // namespace

MaterialField build_material_field(const MaterialSpec& spec, std::span<const double> nodes) {
    if (nodes.empty())
        throw model_error("build_material_field: empty node list");
    MaterialField field;
    sample_profile(spec.eps, nodes, "epsilon", field.eps, field.eps_star, field.eps_max);
    sample_profile(spec.mu, nodes, "mu", field.mu, field.mu_star, field.mu_max);
    return field;
}

HypothesisReport check_hypotheses_pointwise(const Matrix3Coefficient& m, double sym_tol) {
    HypothesisReport report;

    double defect = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            defect = std::max(defect, std::abs(m.entries[i][j] - m.entries[j][i]));
    report.symmetry_defect = defect;
    report.symmetry_pass = !m.claim_symmetric || defect <= sym_tol;

    // Smallest eigenvalue of the symmetric part 0.5 (A + A^T).
    std::array<double, 9> sym{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            sym[static_cast<std::size_t>(i) * 3 + j] =
                0.5 * (m.entries[i][j] + m.entries[j][i]);
    report.smallest_eigenvalue = sym_eigenvalues(sym, 3).front();
    report.coercivity_pass = !m.claim_coercive || report.smallest_eigenvalue >= m.coercivity;

    return report;
}

} // namespace ohmwell

