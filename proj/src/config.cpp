#include "ohmwell/config.hpp"
#include "ohmwell/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ohmwell {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw config_error(path + ": " + what);
}

const json& expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    return j;
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            fail(path + "." + key, "unknown key");
    }
}

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double req_number(const json& j, const std::string& path, const char* key) {
    const json* v = find(j, key);
    if (!v) fail(path + "." + key, "missing required key");
    return get_number(*v, path + "." + key);
}

std::string req_string(const json& j, const std::string& path, const char* key) {
    const json* v = find(j, key);
    if (!v) fail(path + "." + key, "missing required key");
    if (!v->is_string()) fail(path + "." + key, "expected a string");
    return v->get<std::string>();
}

std::vector<double> number_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<double> req_array(const json& j, const std::string& path, const char* key) {
    const json* v = find(j, key);
    if (!v) fail(path + "." + key, "missing required key");
    return number_array(*v, path + "." + key);
}

CoefficientSpec parse_coefficient(const json& j, const std::string& path) {
    expect_object(j, path);
    CoefficientSpec spec;
    const std::string kind = req_string(j, path, "kind");
    if (kind == "constant") {
        reject_unknown(j, path, {"kind", "value"});
        spec.kind = CoefficientSpec::Kind::constant;
        spec.value = req_number(j, path, "value");
    } else if (kind == "piecewise") {
        reject_unknown(j, path, {"kind", "breaks", "values"});
        spec.kind = CoefficientSpec::Kind::piecewise;
        spec.breaks = req_array(j, path, "breaks");
        spec.pieces = req_array(j, path, "values");
    } else if (kind == "table") {
        reject_unknown(j, path, {"kind", "x", "values"});
        spec.kind = CoefficientSpec::Kind::table;
        spec.x = req_array(j, path, "x");
        spec.v = req_array(j, path, "values");
    } else {
        fail(path + ".kind", "unknown coefficient kind '" + kind + "'");
    }
    return spec;
}

InitialSpec parse_initial(const json& j, const std::string& path) {
    expect_object(j, path);
    InitialSpec spec;
    const std::string kind = req_string(j, path, "kind");
    if (kind == "zero") {
        reject_unknown(j, path, {"kind"});
        spec.kind = InitialSpec::Kind::zero;
    } else if (kind == "modes") {
        reject_unknown(j, path, {"kind", "coefficients"});
        spec.kind = InitialSpec::Kind::modes;
        spec.mode_coeffs = req_array(j, path, "coefficients");
    } else if (kind == "table") {
        reject_unknown(j, path, {"kind", "x", "values"});
        spec.kind = InitialSpec::Kind::table;
        spec.x = req_array(j, path, "x");
        spec.v = req_array(j, path, "values");
    } else {
        fail(path + ".kind", "unknown initial-data kind '" + kind + "'");
    }
    return spec;
}

SourceCurrent parse_source(const json& j, const std::string& path) {
    expect_object(j, path);
    SourceCurrent src;
    const std::string kind = req_string(j, path, "kind");
    if (kind == "zero") {
        reject_unknown(j, path, {"kind"});
        src.kind = SourceCurrent::Kind::zero;
    } else if (kind == "constant") {
        reject_unknown(j, path, {"kind", "amplitude"});
        src.kind = SourceCurrent::Kind::constant;
        const auto amp = req_array(j, path, "amplitude");
        if (amp.size() != 3) fail(path + ".amplitude", "expected 3 components");
        std::copy(amp.begin(), amp.end(), src.amplitude.begin());
    } else if (kind == "product") {
        reject_unknown(j, path, {"kind", "direction", "profile", "time"});
        src.kind = SourceCurrent::Kind::product;
        const auto dir = req_array(j, path, "direction");
        if (dir.size() != 3) fail(path + ".direction", "expected 3 components");
        std::copy(dir.begin(), dir.end(), src.direction.begin());
        const json* prof = find(j, "profile");
        if (!prof) fail(path + ".profile", "missing required key");
        expect_object(*prof, path + ".profile");
        reject_unknown(*prof, path + ".profile", {"x", "values"});
        src.profile_x = req_array(*prof, path + ".profile", "x");
        src.profile_v = req_array(*prof, path + ".profile", "values");
        const json* time = find(j, "time");
        if (!time) fail(path + ".time", "missing required key");
        expect_object(*time, path + ".time");
        reject_unknown(*time, path + ".time", {"breaks", "values"});
        src.time_breaks = req_array(*time, path + ".time", "breaks");
        src.time_values = req_array(*time, path + ".time", "values");
    } else {
        fail(path + ".kind", "unknown source kind '" + kind + "'");
    }
    return src;
}

bool table_nondecreasing(const std::vector<double>& m) {
    for (std::size_t i = 1; i < m.size(); ++i)
        if (m[i] < m[i - 1]) return false;
    return true;
}

OhmLaw parse_ohm(const json& j, const std::string& path) {
    expect_object(j, path);
    OhmLaw law;
    const std::string kind = req_string(j, path, "kind");
    if (kind == "zero") {
        law.kind = OhmLaw::Kind::zero;
    } else if (kind == "linear") {
        law.kind = OhmLaw::Kind::linear;
    } else if (kind == "saturating") {
        law.kind = OhmLaw::Kind::saturating;
    } else if (kind == "tabulated") {
        law.kind = OhmLaw::Kind::tabulated;
    } else {
        fail(path + ".kind", "unknown Ohm-law kind '" + kind + "'");
    }
    reject_unknown(j, path, {"kind", "sigma0", "c1", "monotone", "table", "source"});

    if (const json* v = find(j, "sigma0")) {
        if (law.kind == OhmLaw::Kind::zero || law.kind == OhmLaw::Kind::tabulated)
            fail(path + ".sigma0", "not applicable to this law kind");
        law.sigma0 = get_number(*v, path + ".sigma0");
    } else if (law.kind == OhmLaw::Kind::linear || law.kind == OhmLaw::Kind::saturating) {
        fail(path + ".sigma0", "missing required key");
    }

    if (law.kind == OhmLaw::Kind::tabulated) {
        const json* table = find(j, "table");
        if (!table) fail(path + ".table", "missing required key");
        expect_object(*table, path + ".table");
        reject_unknown(*table, path + ".table", {"r", "m"});
        law.tab_r = req_array(*table, path + ".table", "r");
        law.tab_m = req_array(*table, path + ".table", "m");
    } else if (find(j, "table")) {
        fail(path + ".table", "only tabulated laws take a table");
    }

    // Declared growth constant; the built-in laws default to sigma0, a
    // tabulated law to the largest nodal |m| / r ratio (attained at a node
    // because m/r is monotone on each linear segment).
    if (const json* v = find(j, "c1")) {
        law.c1 = get_number(*v, path + ".c1");
    } else {
        switch (law.kind) {
            case OhmLaw::Kind::zero: law.c1 = 0.0; break;
            case OhmLaw::Kind::linear:
            case OhmLaw::Kind::saturating: law.c1 = law.sigma0; break;
            case OhmLaw::Kind::tabulated: {
                double worst = 0.0;
                for (std::size_t i = 1; i < law.tab_r.size(); ++i)
                    if (law.tab_r[i] > 0.0)
                        worst = std::max(worst, std::abs(law.tab_m[i]) / law.tab_r[i]);
                law.c1 = worst;
                break;
            }
        }
    }

    if (const json* v = find(j, "monotone")) {
        if (!v->is_boolean()) fail(path + ".monotone", "expected a boolean");
        law.monotone = v->get<bool>();
    } else {
        law.monotone = law.kind != OhmLaw::Kind::tabulated || table_nondecreasing(law.tab_m);
    }

    if (const json* v = find(j, "source"))
        law.j0 = parse_source(*v, path + ".source");
    return law;
}

OdeScheme parse_scheme(const std::string& s, const std::string& path) {
    if (s == "rk4") return OdeScheme::rk4;
    if (s == "midpoint-implicit") return OdeScheme::midpoint_implicit;
    fail(path, "unknown scheme '" + s + "' (expected rk4 or midpoint-implicit)");
}

json coefficient_json(const CoefficientSpec& spec) {
    json j;
    switch (spec.kind) {
        case CoefficientSpec::Kind::constant:
            j["kind"] = "constant";
            j["value"] = spec.value;
            break;
        case CoefficientSpec::Kind::piecewise:
            j["kind"] = "piecewise";
            j["breaks"] = spec.breaks;
            j["values"] = spec.pieces;
            break;
        case CoefficientSpec::Kind::table:
            j["kind"] = "table";
            j["x"] = spec.x;
            j["values"] = spec.v;
            break;
    }
    return j;
}

json initial_json(const InitialSpec& spec) {
    json j;
    switch (spec.kind) {
        case InitialSpec::Kind::zero:
            j["kind"] = "zero";
            break;
        case InitialSpec::Kind::modes:
            j["kind"] = "modes";
            j["coefficients"] = spec.mode_coeffs;
            break;
        case InitialSpec::Kind::table:
            j["kind"] = "table";
            j["x"] = spec.x;
            j["values"] = spec.v;
            break;
    }
    return j;
}

json source_json(const SourceCurrent& src) {
    json j;
    switch (src.kind) {
        case SourceCurrent::Kind::zero:
            j["kind"] = "zero";
            break;
        case SourceCurrent::Kind::constant:
            j["kind"] = "constant";
            j["amplitude"] = src.amplitude;
            break;
        case SourceCurrent::Kind::product:
            j["kind"] = "product";
            j["direction"] = src.direction;
            j["profile"] = {{"x", src.profile_x}, {"values", src.profile_v}};
            j["time"] = {{"breaks", src.time_breaks}, {"values", src.time_values}};
            break;
    }
    return j;
}

json ohm_json(const OhmLaw& law) {
    json j;
    switch (law.kind) {
        case OhmLaw::Kind::zero: j["kind"] = "zero"; break;
        case OhmLaw::Kind::linear: j["kind"] = "linear"; break;
        case OhmLaw::Kind::saturating: j["kind"] = "saturating"; break;
        case OhmLaw::Kind::tabulated: j["kind"] = "tabulated"; break;
    }
    if (law.kind == OhmLaw::Kind::linear || law.kind == OhmLaw::Kind::saturating)
        j["sigma0"] = law.sigma0;
    if (law.kind == OhmLaw::Kind::tabulated)
        j["table"] = {{"r", law.tab_r}, {"m", law.tab_m}};
    j["c1"] = law.c1;
    j["monotone"] = law.monotone;
    j["source"] = source_json(law.j0);
    return j;
}

} // namespace

void validate(const SimulationConfig& config) {
    if (!(config.L > 0.0)) fail("domain.length", "must be positive");
    if (config.modes < 1) fail("modes", "must be at least 1");

    const auto check_coefficient = [&](const CoefficientSpec& spec, const std::string& path) {
        switch (spec.kind) {
            case CoefficientSpec::Kind::constant:
                if (!(spec.value > 0.0)) fail(path + ".value", "must be strictly positive");
                break;
            case CoefficientSpec::Kind::piecewise: {
                if (spec.breaks.size() < 2 || spec.pieces.size() + 1 != spec.breaks.size())
                    fail(path + ".breaks", "need one more breakpoint than values");
                for (std::size_t i = 1; i < spec.breaks.size(); ++i)
                    if (!(spec.breaks[i] > spec.breaks[i - 1]))
                        fail(path + ".breaks", "must be strictly increasing");
                if (spec.breaks.front() > 0.0 || spec.breaks.back() < config.L)
                    fail(path + ".breaks", "must cover [0, domain.length]");
                for (std::size_t i = 0; i < spec.pieces.size(); ++i)
                    if (!(spec.pieces[i] > 0.0))
                        fail(path + ".values[" + std::to_string(i) + "]",
                             "must be strictly positive");
                break;
            }
            case CoefficientSpec::Kind::table: {
                if (spec.x.size() < 2 || spec.x.size() != spec.v.size())
                    fail(path + ".x", "need matching x/values arrays of length >= 2");
                for (std::size_t i = 1; i < spec.x.size(); ++i)
                    if (!(spec.x[i] > spec.x[i - 1]))
                        fail(path + ".x", "must be strictly increasing");
                if (spec.x.front() > 0.0 || spec.x.back() < config.L)
                    fail(path + ".x", "must cover [0, domain.length]");
                for (std::size_t i = 0; i < spec.v.size(); ++i)
                    if (!(spec.v[i] > 0.0))
                        fail(path + ".values[" + std::to_string(i) + "]",
                             "must be strictly positive");
                break;
            }
        }
    };
    check_coefficient(config.material.eps, "material.epsilon");
    check_coefficient(config.material.mu, "material.mu");

    if (!(config.ohm.sigma0 >= 0.0)) fail("ohm.sigma0", "must be non-negative");
    if (!(config.ohm.c1 >= 0.0)) fail("ohm.c1", "must be non-negative");
    if (config.ohm.kind == OhmLaw::Kind::tabulated) {
        const auto& r = config.ohm.tab_r;
        const auto& m = config.ohm.tab_m;
        if (r.size() < 2 || r.size() != m.size())
            fail("ohm.table.r", "need matching r/m arrays of length >= 2");
        if (r.front() != 0.0) fail("ohm.table.r", "must start at 0");
        if (m.front() != 0.0) fail("ohm.table.m", "must vanish at r = 0");
        for (std::size_t i = 1; i < r.size(); ++i)
            if (!(r[i] > r[i - 1])) fail("ohm.table.r", "must be strictly increasing");
    }

    const auto& src = config.ohm.j0;
    if (src.kind == SourceCurrent::Kind::product) {
        if (src.profile_x.size() < 2 || src.profile_x.size() != src.profile_v.size())
            fail("ohm.source.profile.x", "need matching x/values arrays of length >= 2");
        for (std::size_t i = 1; i < src.profile_x.size(); ++i)
            if (!(src.profile_x[i] > src.profile_x[i - 1]))
                fail("ohm.source.profile.x", "must be strictly increasing");
        if (src.profile_x.front() > 0.0 || src.profile_x.back() < config.L)
            fail("ohm.source.profile.x", "must cover [0, domain.length]");
        if (src.time_breaks.size() < 2 ||
            src.time_values.size() + 1 != src.time_breaks.size())
            fail("ohm.source.time.breaks", "need one more breakpoint than values");
        for (std::size_t i = 1; i < src.time_breaks.size(); ++i)
            if (!(src.time_breaks[i] > src.time_breaks[i - 1]))
                fail("ohm.source.time.breaks", "must be strictly increasing");
        if (src.time_breaks.front() > 0.0 || src.time_breaks.back() < config.time.horizon)
            fail("ohm.source.time.breaks", "must cover [0, time.horizon]");
    }

    const auto check_initial = [&](const InitialSpec& spec, const std::string& path) {
        if (spec.kind == InitialSpec::Kind::modes && spec.mode_coeffs.empty())
            fail(path + ".coefficients", "must not be empty");
        if (spec.kind == InitialSpec::Kind::table) {
            if (spec.x.size() < 2 || spec.x.size() != spec.v.size())
                fail(path + ".x", "need matching x/values arrays of length >= 2");
            for (std::size_t i = 1; i < spec.x.size(); ++i)
                if (!(spec.x[i] > spec.x[i - 1])) fail(path + ".x", "must be strictly increasing");
            if (spec.x.front() > 0.0 || spec.x.back() < config.L)
                fail(path + ".x", "must cover [0, domain.length]");
        }
    };
    check_initial(config.e0, "initial.e");
    check_initial(config.h0, "initial.h");

    if (!(config.time.horizon > 0.0)) fail("time.horizon", "must be positive");
    if (!(config.time.dt > 0.0)) fail("time.dt", "must be positive");
    if (config.time.dt > config.time.horizon)
        fail("time.dt", "must not exceed time.horizon");
    if (config.time.output_stride < 1) fail("time.output_stride", "must be at least 1");

    if (config.quadrature.points < 2 || config.quadrature.points > 16)
        fail("quadrature.points", "must lie in [2, 16]");
    if (config.quadrature.panels < 0) fail("quadrature.panels", "must be non-negative");

    for (std::size_t i = 0; i < config.output.snapshot_times.size(); ++i) {
        const double t = config.output.snapshot_times[i];
        if (t < 0.0 || t > config.time.horizon)
            fail("output.snapshots[" + std::to_string(i) + "]",
                 "must lie in [0, time.horizon]");
    }
}

SimulationConfig parse_config_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw config_error(origin + ":" + std::to_string(line) +
                           ": JSON syntax error: " + e.what());
    }
    expect_object(root, origin);
    reject_unknown(root, origin,
                   {"domain", "modes", "material", "ohm", "initial", "time",
                    "quadrature", "output"});

    SimulationConfig config;

    const json* domain = find(root, "domain");
    if (!domain) fail("domain", "missing required key");
    expect_object(*domain, "domain");
    reject_unknown(*domain, "domain", {"length"});
    config.L = req_number(*domain, "domain", "length");

    {
        const json* v = find(root, "modes");
        if (!v) fail("modes", "missing required key");
        if (!v->is_number_integer()) fail("modes", "expected an integer");
        config.modes = v->get<int>();
    }

    const json* material = find(root, "material");
    if (!material) fail("material", "missing required key");
    expect_object(*material, "material");
    reject_unknown(*material, "material", {"epsilon", "mu"});
    const json* eps = find(*material, "epsilon");
    if (!eps) fail("material.epsilon", "missing required key");
    config.material.eps = parse_coefficient(*eps, "material.epsilon");
    const json* mu = find(*material, "mu");
    if (!mu) fail("material.mu", "missing required key");
    config.material.mu = parse_coefficient(*mu, "material.mu");

    const json* ohm = find(root, "ohm");
    if (!ohm) fail("ohm", "missing required key");
    config.ohm = parse_ohm(*ohm, "ohm");

    const json* initial = find(root, "initial");
    if (!initial) fail("initial", "missing required key");
    expect_object(*initial, "initial");
    reject_unknown(*initial, "initial", {"e", "h"});
    const json* e0 = find(*initial, "e");
    if (!e0) fail("initial.e", "missing required key");
    config.e0 = parse_initial(*e0, "initial.e");
    const json* h0 = find(*initial, "h");
    if (!h0) fail("initial.h", "missing required key");
    config.h0 = parse_initial(*h0, "initial.h");

    const json* time = find(root, "time");
    if (!time) fail("time", "missing required key");
    expect_object(*time, "time");
    reject_unknown(*time, "time", {"horizon", "dt", "scheme", "output_stride"});
    config.time.horizon = req_number(*time, "time", "horizon");
    config.time.dt = req_number(*time, "time", "dt");
    if (const json* v = find(*time, "scheme")) {
        if (!v->is_string()) fail("time.scheme", "expected a string");
        config.time.scheme = parse_scheme(v->get<std::string>(), "time.scheme");
    }
    if (const json* v = find(*time, "output_stride")) {
        if (!v->is_number_integer()) fail("time.output_stride", "expected an integer");
        config.time.output_stride = v->get<int>();
    }

    if (const json* quad = find(root, "quadrature")) {
        expect_object(*quad, "quadrature");
        reject_unknown(*quad, "quadrature", {"points", "panels"});
        if (const json* v = find(*quad, "points")) {
            if (!v->is_number_integer()) fail("quadrature.points", "expected an integer");
            config.quadrature.points = v->get<int>();
        }
        if (const json* v = find(*quad, "panels")) {
            if (!v->is_number_integer()) fail("quadrature.panels", "expected an integer");
            config.quadrature.panels = v->get<int>();
        }
    }

    if (const json* output = find(root, "output")) {
        expect_object(*output, "output");
        reject_unknown(*output, "output", {"directory", "snapshots"});
        if (const json* v = find(*output, "directory")) {
            if (!v->is_string()) fail("output.directory", "expected a string");
            config.output.directory = v->get<std::string>();
        }
        if (const json* v = find(*output, "snapshots"))
            config.output.snapshot_times = number_array(*v, "output.snapshots");
    }

    validate(config);
    return config;
}

SimulationConfig parse_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw config_error("cannot open config file '" + file.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), file.string());
}

std::string serialize_config(const SimulationConfig& config) {
    json root;
    root["domain"] = {{"length", config.L}};
    root["modes"] = config.modes;
    root["material"] = {{"epsilon", coefficient_json(config.material.eps)},
                        {"mu", coefficient_json(config.material.mu)}};
    root["ohm"] = ohm_json(config.ohm);
    root["initial"] = {{"e", initial_json(config.e0)}, {"h", initial_json(config.h0)}};
    root["time"] = {{"horizon", config.time.horizon},
                    {"dt", config.time.dt},
                    {"scheme", config.time.scheme == OdeScheme::rk4 ? "rk4" : "midpoint-implicit"},
                    {"output_stride", config.time.output_stride}};
    root["quadrature"] = {{"points", config.quadrature.points},
                          {"panels", config.quadrature.panels}};
    json out;
    out["directory"] = config.output.directory;
    out["snapshots"] = config.output.snapshot_times;
    root["output"] = out;
    return root.dump();
}

std::string config_hash(const SimulationConfig& config) {
    // The output destination does not affect the physics, so it must not
    // affect the identity: the same run written to two directories carries
    // the same hash in both manifests.
    SimulationConfig keyed = config;
    keyed.output = OutputSpec{};
    const std::string canon = serialize_config(keyed);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace ohmwell

