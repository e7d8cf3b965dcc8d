#include "ohmwell/galerkin.hpp"
#include "ohmwell/errors.hpp"
#include "ohmwell/linalg.hpp"
#include "ohmwell/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace ohmwell {
namespace {

// Shared discretisation state captured by the right-hand side closure and
// the ledger evaluators.
struct System {
    BasisSet basis;
    MaterialField mat;
    OhmLaw law;
    // scratch buffers; the closure is only ever driven sequentially
    std::vector<double> e, j;
};

// Transverse electric field samples from the coefficient block a.
void synth_e(const System& s, std::span<const double> a, std::vector<double>& e) {
    const auto& grid = s.basis.grid;
    e.assign(grid.size(), 0.0);
    for (int k = 0; k < s.basis.m; ++k) {
        const double ak = a[k];
        if (ak == 0.0) continue;
        const auto& row = s.basis.phi[k];
        for (std::size_t q = 0; q < e.size(); ++q) e[q] += ak * row[q];
    }
}

// Transverse current j(x_q, t, e_q) on the nodes.
void current(System& s, double t, TimeSide side, const std::vector<double>& e,
             std::vector<double>& j) {
    const auto& grid = s.basis.grid;
    j.resize(grid.size());
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const Vec3 xi{0.0, e[q], 0.0};
        j[q] = eval_j(s.law, grid.nodes[q], t, xi, side)[1];
    }
}

void rhs_eval(System& s, double t, TimeSide side, std::span<const double> y,
              std::span<double> dy) {
    const int m = s.basis.m;
    const auto& grid = s.basis.grid;
    synth_e(s, y.first(static_cast<std::size_t>(m)), s.e);
    current(s, t, side, s.e, s.j);
    for (int k = 0; k < m; ++k) {
        double v = 0.0;
        for (int l = 0; l < m; ++l) v += s.basis.coupling[k][l] * y[m + l];
        double proj = 0.0;
        const auto& row = s.basis.phi[k];
        for (std::size_t q = 0; q < grid.size(); ++q)
            proj += grid.weights[q] * s.j[q] * row[q];
        dy[k] = v - proj;
    }
    for (int l = 0; l < m; ++l) {
        double v = 0.0;
        for (int k = 0; k < m; ++k) v += s.basis.coupling[k][l] * y[k];
        dy[m + l] = -v;
    }
}

// Piecewise-constant time segmentation of the source with the quadrature
// L2 norm of its transverse component on each segment.
struct SourceProfile {
    std::vector<double> breaks;  ///< 0 = b_0 < ... < b_n = horizon
    std::vector<double> norms;   ///< |j0(., t)|_L2 on each segment
    double l2_qt = 0.0;          ///< space-time L2 norm over [0, horizon]
};

SourceProfile profile_source(const System& s, double horizon) {
    const auto& j0 = s.law.j0;
    SourceProfile p;
    p.breaks.push_back(0.0);
    if (j0.kind == SourceCurrent::Kind::product) {
        if (j0.time_breaks.empty() || j0.time_breaks.front() > 0.0 ||
            j0.time_breaks.back() < horizon)
            throw model_error("source current: declared time range must cover [0, horizon]");
        for (double b : j0.time_breaks)
            if (b > 0.0 && b < horizon) p.breaks.push_back(b);
    }
    p.breaks.push_back(horizon);

    const auto& grid = s.basis.grid;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < p.breaks.size(); ++i) {
        const double tmid = 0.5 * (p.breaks[i] + p.breaks[i + 1]);
        double n2 = 0.0;
        for (std::size_t q = 0; q < grid.size(); ++q) {
            const double jy = eval_j0(s.law, grid.nodes[q], tmid)[1];
            n2 += grid.weights[q] * jy * jy;
        }
        p.norms.push_back(std::sqrt(n2));
        total += (p.breaks[i + 1] - p.breaks[i]) * n2;
    }
    p.l2_qt = std::sqrt(total);
    return p;
}

} // namespace

OdeProblem assemble(const BasisSet& basis, const MaterialField& mat, const OhmLaw& law,
                    std::vector<double> a0, std::vector<double> b0, double horizon) {
    if (a0.size() != static_cast<std::size_t>(basis.m) || b0.size() != a0.size())
        throw model_error("assemble: initial coefficients do not match the basis");
    if (!(horizon > 0.0))
        throw model_error("assemble: horizon must be positive");
    if (!(law.c1 >= 0.0))
        throw model_error("assemble: declared growth constant must be non-negative");

    auto sys = std::make_shared<System>();
    sys->basis = basis;
    sys->mat = mat;
    sys->law = law;

    const SourceProfile src = profile_source(*sys, horizon);
    const double g = basis.e_gram_norm;

    OdeProblem p;
    p.dim = 2 * static_cast<std::size_t>(basis.m);
    p.horizon = horizon;
    p.y0 = std::move(a0);
    p.y0.insert(p.y0.end(), b0.begin(), b0.end());
    p.rhs = [sys](double t, TimeSide side, std::span<const double> y,
                  std::span<double> dy) { rhs_eval(*sys, t, side, y, dy); };
    p.growth.breaks = src.breaks;
    p.growth.values.resize(src.norms.size());
    for (std::size_t i = 0; i < src.norms.size(); ++i)
        p.growth.values[i] = std::sqrt(g) * src.norms[i];
    p.growth.c0 = basis.coupling_norm + law.c1 * std::sqrt(g / mat.eps_star);
    for (std::size_t i = 1; i + 1 < src.breaks.size(); ++i)
        p.breakpoints.push_back(src.breaks[i]);
    return p;
}

namespace {

std::vector<double> sample_initial(const InitialSpec& spec, const QuadratureGrid& grid,
                                   FieldKind which, const char* name) {
    std::vector<double> out(grid.size(), 0.0);
    switch (spec.kind) {
        case InitialSpec::Kind::zero:
            return out;
        case InitialSpec::Kind::modes:
            for (std::size_t k = 0; k < spec.mode_coeffs.size(); ++k) {
                const double c = spec.mode_coeffs[k];
                if (c == 0.0) continue;
                for (std::size_t q = 0; q < grid.size(); ++q)
                    out[q] += c * (which == FieldKind::electric
                                       ? raw_electric_mode(static_cast<int>(k), grid.L, grid.nodes[q])
                                       : raw_magnetic_mode(static_cast<int>(k), grid.L, grid.nodes[q]));
            }
            return out;
        case InitialSpec::Kind::table: {
            if (spec.x.size() != spec.v.size() || spec.x.size() < 2)
                throw config_error(std::string(name) + ": table needs matching x/v arrays of length >= 2");
            if (spec.x.front() > grid.nodes.front() || spec.x.back() < grid.nodes.back())
                throw config_error(std::string(name) + ": table must cover the domain");
            for (std::size_t q = 0; q < grid.size(); ++q) {
                const double x = grid.nodes[q];
                auto it = std::upper_bound(spec.x.begin(), spec.x.end(), x);
                std::size_t i = static_cast<std::size_t>(it - spec.x.begin());
                if (i == 0) i = 1;
                if (i >= spec.x.size()) i = spec.x.size() - 1;
                const double t = (x - spec.x[i - 1]) / (spec.x[i] - spec.x[i - 1]);
                out[q] = spec.v[i - 1] + t * (spec.v[i] - spec.v[i - 1]);
            }
            return out;
        }
    }
    throw config_error(std::string(name) + ": unknown initial-data kind");
}

double energy_of(std::span<const double> y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return 0.5 * s;
}

} // namespace

SimulationResult run(const SimulationConfig& config_in) {
    const auto t_start = std::chrono::steady_clock::now();
    const SimulationConfig& config = config_in;
    validate(config);
    // panels = 0 means "derive from the mode count".  The derivation stays
    // local so the config echoed into results (and hashed for the manifest)
    // is exactly what the caller supplied.
    const int panels =
        config.quadrature.panels == 0 ? std::max(8, 2 * config.modes) : config.quadrature.panels;

    const QuadratureGrid grid = build_grid(config.L, config.quadrature.points, panels);
    const MaterialField mat = build_material_field(config.material, grid.nodes);
    const BasisSet basis = build_basis(config.modes, grid, mat);

    const auto e0s = sample_initial(config.e0, grid, FieldKind::electric, "e0");
    const auto h0s = sample_initial(config.h0, grid, FieldKind::magnetic, "h0");
    auto [a0, b0] = project_initial(basis, mat, e0s, h0s);

    OdeProblem problem = assemble(basis, mat, config.ohm, std::move(a0), std::move(b0),
                                  config.time.horizon);
    // Aligning the step count with the output stride keeps the retained time
    // axis uniform through the horizon, so the written ledgers feed straight
    // into the Steklov tooling.
    const std::size_t stride = static_cast<std::size_t>(config.time.output_stride);
    const Trajectory traj = integrate(problem, config.time.scheme, config.time.dt, stride);

    // Work state for the ledger evaluations.
    System sys;
    sys.basis = basis;
    sys.mat = mat;
    sys.law = config.ohm;

    const std::size_t m = static_cast<std::size_t>(config.modes);
    const std::size_t n_inst = traj.times.size();

    auto dissipation_at = [&](double t, TimeSide side, std::span<const double> y) {
        synth_e(sys, y.first(m), sys.e);
        current(sys, t, side, sys.e, sys.j);
        double s = 0.0;
        for (std::size_t q = 0; q < grid.size(); ++q)
            s += grid.weights[q] * sys.j[q] * sys.e[q];
        return s;
    };

    // Cumulative dissipation D on every integration instant: per-interval
    // Simpson with a Hermite-reconstructed midpoint state, fourth order in
    // the step like the integrator itself.
    std::vector<double> D(n_inst, 0.0);
    {
        std::vector<double> fi(problem.dim), fj(problem.dim), ymid(problem.dim);
        for (std::size_t i = 0; i + 1 < n_inst; ++i) {
            const double t0 = traj.times[i], t1 = traj.times[i + 1];
            const double h = t1 - t0;
            problem.rhs(t0, TimeSide::right, traj.states[i], fi);
            problem.rhs(t1, TimeSide::left, traj.states[i + 1], fj);
            for (std::size_t c = 0; c < problem.dim; ++c)
                ymid[c] = 0.5 * (traj.states[i][c] + traj.states[i + 1][c]) +
                          (h / 8.0) * (fi[c] - fj[c]);
            const double g0 = dissipation_at(t0, TimeSide::right, traj.states[i]);
            const double g1 = dissipation_at(t1, TimeSide::left, traj.states[i + 1]);
            const double gm = dissipation_at(0.5 * (t0 + t1), TimeSide::right, ymid);
            D[i + 1] = D[i] + (h / 6.0) * (g0 + 4.0 * gm + g1);
        }
    }

    // Retained instants: every output_stride-th step.  Step alignment puts
    // the final instant on this grid except when a segment is shorter than
    // one stride; the fallback append then yields a two-point (and therefore
    // still uniform) axis for single-segment runs.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n_inst; i += stride) keep.push_back(i);
    if (keep.back() != n_inst - 1) keep.push_back(n_inst - 1);

    SimulationResult result;
    result.config = config;
    result.eps_star = mat.eps_star;
    result.steps = traj.steps;
    result.growth_radius = traj.radius;
    result.clamp_activated = traj.clamp_activated;
    result.j0_l2 = profile_source(sys, config.time.horizon).l2_qt;

    // Boundary values of every mode, for the Poynting traces.
    std::vector<double> eL(m), eR(m), hL(m), hR(m);
    for (std::size_t k = 0; k < m; ++k) {
        eL[k] = basis.eval_e(static_cast<int>(k), 0.0);
        eR[k] = basis.eval_e(static_cast<int>(k), config.L);
        hL[k] = basis.eval_h(static_cast<int>(k), 0.0);
        hR[k] = basis.eval_h(static_cast<int>(k), config.L);
    }

    const double E0 = energy_of(traj.states.front());
    for (std::size_t idx : keep) {
        const auto& y = traj.states[idx];
        result.times.push_back(traj.times[idx]);
        result.a.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m));
        result.b.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(m), y.end());
        const double E = energy_of(y);
        result.ledger.times.push_back(traj.times[idx]);
        result.ledger.energy.push_back(E);
        result.ledger.dissipation.push_back(D[idx]);
        result.ledger.residual.push_back(E + D[idx] - E0);
        double ve0 = 0.0, veL = 0.0, vh0 = 0.0, vhL = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            ve0 += y[k] * eL[k];
            veL += y[k] * eR[k];
            vh0 += y[m + k] * hL[k];
            vhL += y[m + k] * hR[k];
        }
        result.poynting_left.push_back(ve0 * vh0);
        result.poynting_right.push_back(veL * vhL);
    }

    // Snapshots at the nearest integration instants.
    for (double ts : config.output.snapshot_times) {
        auto it = std::lower_bound(traj.times.begin(), traj.times.end(), ts);
        std::size_t i = static_cast<std::size_t>(it - traj.times.begin());
        if (i > 0 && (i == n_inst || std::abs(traj.times[i - 1] - ts) <= std::abs(traj.times[i] - ts)))
            --i;
        Snapshot snap;
        snap.t = traj.times[i];
        snap.x = grid.nodes;
        snap.e = synthesize(basis, std::span<const double>(traj.states[i]).first(m),
                            FieldKind::electric);
        snap.h = synthesize(basis, std::span<const double>(traj.states[i]).subspan(m),
                            FieldKind::magnetic);
        result.snapshots.push_back(std::move(snap));
    }

    // Coefficient energy versus quadrature field energy at the final instant;
    // discrete orthonormality makes these agree to rounding.
    {
        const auto& y = traj.states.back();
        const auto ef = synthesize(basis, std::span<const double>(y).first(m), FieldKind::electric);
        const auto hf = synthesize(basis, std::span<const double>(y).subspan(m), FieldKind::magnetic);
        double Ef = 0.0;
        for (std::size_t q = 0; q < grid.size(); ++q)
            Ef += grid.weights[q] * (mat.eps[q] * ef[q] * ef[q] + mat.mu[q] * hf[q] * hf[q]);
        result.coeff_field_energy_gap = std::abs(0.5 * Ef - energy_of(y));
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

double energy_residual(const SimulationResult& result) {
    double worst = 0.0;
    for (double r : result.ledger.residual) worst = std::max(worst, std::abs(r));
    return worst;
}

AprioriReport apriori_check(const SimulationResult& result, double j0_norm) {
    if (!(j0_norm >= 0.0))
        throw model_error("apriori_check: source norm must be non-negative");
    AprioriReport rep;
    const double c1 = result.config.ohm.c1;
    const double T = result.config.time.horizon;
    rep.c2 = (1.0 + 2.0 * c1) / result.eps_star;
    rep.constant = 1.0 + rep.c2 * T * std::exp(rep.c2 * T);
    const double e0 = result.ledger.energy.empty() ? 0.0 : result.ledger.energy.front();
    rep.bound = rep.constant * (2.0 * e0 + j0_norm * j0_norm);
    for (double e : result.ledger.energy) rep.sup = std::max(rep.sup, 2.0 * e);
    if (rep.bound == 0.0) {
        rep.pass = rep.sup <= 1e-14;
        rep.margin = rep.pass ? 0.0 : -1.0;
    } else {
        rep.margin = rep.bound / std::max(rep.sup, std::numeric_limits<double>::min()) - 1.0;
        rep.pass = rep.sup <= rep.bound * (1.0 + 1e-12);
    }
    return rep;
}

ContractionReport contraction_check(const SimulationResult& run_a,
                                    const SimulationResult& run_b) {
    if (run_a.a.empty() || run_b.a.empty() ||
        run_a.a.front().size() != run_b.a.front().size() ||
        run_a.times.size() != run_b.times.size())
        throw model_error("contraction_check: runs are not comparable (different discretisation)");
    for (std::size_t i = 0; i < run_a.times.size(); ++i)
        if (std::abs(run_a.times[i] - run_b.times[i]) > 1e-12 * std::max(1.0, run_a.times[i]))
            throw model_error("contraction_check: runs do not share the time grid");

    ContractionReport rep;
    for (std::size_t i = 0; i < run_a.times.size(); ++i) {
        double d = 0.0;
        for (std::size_t k = 0; k < run_a.a[i].size(); ++k) {
            const double da = run_a.a[i][k] - run_b.a[i][k];
            const double db = run_a.b[i][k] - run_b.b[i][k];
            d += da * da + db * db;
        }
        d *= 0.5;
        if (i == 0) rep.d0 = d;
        if (d > rep.max_d) rep.max_d = d;
        const double excess = d - rep.d0;
        if (i == 0 || excess > rep.max_excess) {
            rep.max_excess = excess;
            rep.at_time = run_a.times[i];
        }
    }
    return rep;
}

PoyntingReport poynting_boundary(const SimulationResult& result) {
    PoyntingReport rep;
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        if (std::abs(result.poynting_left[i]) > rep.max_abs) {
            rep.max_abs = std::abs(result.poynting_left[i]);
            rep.at_time = result.times[i];
            rep.at_right_wall = false;
        }
        if (std::abs(result.poynting_right[i]) > rep.max_abs) {
            rep.max_abs = std::abs(result.poynting_right[i]);
            rep.at_time = result.times[i];
            rep.at_right_wall = true;
        }
    }
    return rep;
}

} // namespace ohmwell

