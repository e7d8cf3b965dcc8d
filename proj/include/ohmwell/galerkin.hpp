#ifndef OHMWELL_GALERKIN_HPP
#define OHMWELL_GALERKIN_HPP

/// @file galerkin.hpp
/// @brief The spectral Galerkin semi-discretisation of the 1-D transverse
///        Maxwell system with a nonlinear Ohm law,
///            eps de/dt = -dh/dx - j(x, t, e),   mu dh/dt = -de/dx,
///        perfectly conducting walls (e = 0 at both ends), reduced to the
///        coefficient ODE  a' = C b - P j(e),  b' = -C^T a,  plus the energy
///        ledger E(t) + D(t) = E(0) and the derived certificates: a-priori
///        bound, difference contraction, and boundary Poynting flux.

#include "ohmwell/basis.hpp"
#include "ohmwell/cara_ode.hpp"
#include "ohmwell/config.hpp"
#include "ohmwell/materials.hpp"
#include "ohmwell/ohm.hpp"

#include <cstddef>
#include <vector>

namespace ohmwell {

/// Assemble the coefficient ODE for the given discretisation.  The state is
/// y = (a_1..a_m, b_1..b_m) and the right-hand side carries a certified
/// growth envelope: |f(t,y)| <= A(t) + C0 |y| with
///   C0   = |C|_2 + c1 sqrt(g / eps*),
///   A(t) = sqrt(g) |j0(., t)|_L2,
/// where g is the largest eigenvalue of the unweighted Gram of the electric
/// modes.  Declared discontinuities of j0 become ODE breakpoints.
OdeProblem assemble(const BasisSet& basis, const MaterialField& mat, const OhmLaw& law,
                    std::vector<double> a0, std::vector<double> b0, double horizon);

struct EnergyLedger {
    std::vector<double> times;
    std::vector<double> energy;       ///< E = (|a|^2 + |b|^2) / 2
    std::vector<double> dissipation;  ///< D(t) = integral of (j(e), e) up to t
    std::vector<double> residual;     ///< E(t) + D(t) - E(0)
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> x;  ///< grid nodes
    std::vector<double> e;
    std::vector<double> h;
};

struct SimulationResult {
    SimulationConfig config;  ///< exactly as supplied (and hashed in manifests)

    std::vector<double> times;              ///< retained output instants
    std::vector<std::vector<double>> a;     ///< [instant][mode]
    std::vector<std::vector<double>> b;
    EnergyLedger ledger;                    ///< on the same instants
    std::vector<double> poynting_left;      ///< e h at x = 0 per instant
    std::vector<double> poynting_right;     ///< e h at x = L per instant
    std::vector<Snapshot> snapshots;

    double eps_star = 0.0;
    double j0_l2 = 0.0;    ///< space-time L2 norm of the transverse source
    double coeff_field_energy_gap = 0.0;  ///< |coefficient E - quadrature field E| at t = T
    std::size_t steps = 0;
    double growth_radius = 0.0;
    bool clamp_activated = false;
    double wall_seconds = 0.0;
};

/// Run one simulation end to end: grid, material, basis, projection,
/// integration, ledger, boundary traces, snapshots.  Does not write files.
SimulationResult run(const SimulationConfig& config);

/// Worst absolute energy-balance defect max_t |E(t) + D(t) - E(0)|.
double energy_residual(const SimulationResult& result);

struct AprioriReport {
    double c2 = 0.0;        ///< (1 + 2 c1) / eps*
    double constant = 0.0;  ///< c = 1 + c2 T exp(c2 T)
    double bound = 0.0;     ///< c (2 E(0) + |j0|^2)
    double sup = 0.0;       ///< max_t 2 E(t)
    double margin = 0.0;    ///< bound / sup - 1 (0 when both vanish)
    bool pass = false;      ///< sup <= bound (tiny slack for rounding)
};

/// Certify the a-priori estimate 2 E(t) <= c (2 E(0) + |j0|^2_{L2(Q_T)}).
AprioriReport apriori_check(const SimulationResult& result, double j0_norm);

struct ContractionReport {
    double d0 = 0.0;          ///< initial half squared distance
    double max_d = 0.0;
    double max_excess = 0.0;  ///< max_t (d(t) - d(0))
    double at_time = 0.0;     ///< instant attaining the excess
    bool pass(double tol) const { return max_excess <= tol; }
};

/// Distance ledger d(t) = |yA(t) - yB(t)|^2 / 2 between two runs that share
/// everything except initial data.  For a monotone law d(t) <= d(0); the
/// report records the worst excess.  Throws model_error when the runs are
/// not comparable (different discretisation or time grids).
ContractionReport contraction_check(const SimulationResult& run_a,
                                    const SimulationResult& run_b);

struct PoyntingReport {
    double max_abs = 0.0;  ///< worst |e h| over both walls and all instants
    double at_time = 0.0;
    bool at_right_wall = false;
};

/// Boundary Poynting flux certificate: under perfect-conductor walls the
/// trace e h vanishes identically at x = 0 and x = L.
PoyntingReport poynting_boundary(const SimulationResult& result);

} // namespace ohmwell

#endif
