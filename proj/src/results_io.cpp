#include "ohmwell/results_io.hpp"
#include "ohmwell/errors.hpp"
#include "ohmwell/version.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ohmwell {
namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);  // LF line endings everywhere
    if (!out)
        throw config_error("cannot open output file '" + file.string() + "'");
    return out;
}

double json_safe(double v) { return std::isfinite(v) ? v : 1e308; }

} // namespace

std::vector<std::string> write_results(const SimulationResult& result,
                                       const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw config_error("cannot create output directory '" + dir.string() + "': " +
                           ec.message());

    std::vector<std::string> files;

    {
        auto out = open_out(dir / "energy.csv");
        out << "t,energy,dissipation,residual,poynting_left,poynting_right\n";
        for (std::size_t i = 0; i < result.ledger.times.size(); ++i)
            out << fmt(result.ledger.times[i]) << ',' << fmt(result.ledger.energy[i]) << ','
                << fmt(result.ledger.dissipation[i]) << ',' << fmt(result.ledger.residual[i])
                << ',' << fmt(result.poynting_left[i]) << ','
                << fmt(result.poynting_right[i]) << '\n';
        files.push_back("energy.csv");
    }

    {
        auto out = open_out(dir / "coeffs.csv");
        out << "t";
        const std::size_t m = result.a.empty() ? 0 : result.a.front().size();
        for (std::size_t k = 1; k <= m; ++k) out << ",a" << k;
        for (std::size_t k = 1; k <= m; ++k) out << ",b" << k;
        out << '\n';
        for (std::size_t i = 0; i < result.times.size(); ++i) {
            out << fmt(result.times[i]);
            for (double v : result.a[i]) out << ',' << fmt(v);
            for (double v : result.b[i]) out << ',' << fmt(v);
            out << '\n';
        }
        files.push_back("coeffs.csv");
    }

    for (std::size_t s = 0; s < result.snapshots.size(); ++s) {
        char name[32];
        std::snprintf(name, sizeof name, "fields_%03zu.csv", s);
        auto out = open_out(dir / name);
        out << "t,x,e,h\n";
        const Snapshot& snap = result.snapshots[s];
        for (std::size_t q = 0; q < snap.x.size(); ++q)
            out << fmt(snap.t) << ',' << fmt(snap.x[q]) << ',' << fmt(snap.e[q]) << ','
                << fmt(snap.h[q]) << '\n';
        files.push_back(name);
    }

    {
        nlohmann::json manifest;
        manifest["tool"] = "ohmwell";
        manifest["version"] = version_string;
        manifest["config_hash"] = config_hash(result.config);
        manifest["steps"] = result.steps;
        // No timings here: repeated runs of one config must be byte-identical,
        // manifest included.  The CLI reports wall time on stdout instead.
        manifest["growth_radius"] = json_safe(result.growth_radius);
        manifest["clamp_activated"] = result.clamp_activated;
        manifest["energy_residual"] = json_safe(energy_residual(result));
        const AprioriReport apriori = apriori_check(result, result.j0_l2);
        manifest["apriori_margin"] = json_safe(apriori.margin);
        manifest["apriori_pass"] = apriori.pass;
        const PoyntingReport poynting = poynting_boundary(result);
        manifest["poynting_max"] = json_safe(poynting.max_abs);
        manifest["coeff_field_energy_gap"] = json_safe(result.coeff_field_energy_gap);
        manifest["files"] = files;
        auto out = open_out(dir / "manifest.json");
        out << manifest.dump(2) << '\n';
        files.push_back("manifest.json");
    }

    return files;
}

TimeSeries read_time_series(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw config_error("cannot open series file '" + file.string() + "'");

    TimeSeries series;
    std::vector<double> times;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) { numeric = false; break; }
                row.push_back(v);
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (times.empty()) continue;  // header line
            throw config_error(file.string() + ":" + std::to_string(lineno) +
                               ": non-numeric cell in data row");
        }
        if (row.size() < 2)
            throw config_error(file.string() + ":" + std::to_string(lineno) +
                               ": need a time column plus at least one component");
        if (!times.empty() && row.size() - 1 != series.values.front().size())
            throw config_error(file.string() + ":" + std::to_string(lineno) +
                               ": ragged row");
        times.push_back(row.front());
        series.values.emplace_back(row.begin() + 1, row.end());
    }
    if (times.size() < 2)
        throw config_error(file.string() + ": need at least two samples");
    if (std::abs(times.front()) > 1e-12)
        throw config_error(file.string() + ": time axis must start at 0");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0))
        throw config_error(file.string() + ": time axis must be increasing");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - static_cast<double>(i) * dt) > 1e-9 * std::max(1.0, times.back()))
            throw config_error(file.string() + ": time axis must be uniform");
    series.dt = dt;
    return series;
}

} // namespace ohmwell

