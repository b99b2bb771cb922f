#include "anyon/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace anyon::io {

namespace {

using json = nlohmann::json;

} // namespace

double parse_number(const std::string& text, const std::string& what) {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    while (b < e && *b == ' ') ++b;
    while (e > b && e[-1] == ' ') --e;
    // "pi" and "k*pi" style shorthands keep CLI ranges readable.
    const std::string t(b, e);
    if (t == "pi") return kPi;
    if (t.size() > 3 && t.compare(t.size() - 3, 3, "*pi") == 0) return parse_number(t.substr(0, t.size() - 3), what) * kPi;
    if (t.size() > 3 && t.compare(0, 3, "pi/") == 0) return kPi / parse_number(t.substr(3), what);
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || b == e || !std::isfinite(v))
        throw ValidationError("cannot parse " + what + " '" + text + "' as a number");
    return v;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ValidationError("unknown key '" + k + "' in " + where);
}

double get_number(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number()) throw ValidationError(where + "." + key + " must be a number");
    return v.get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ValidationError(where + "." + key + " must be an integer");
    return v.get<int>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_string()) throw ValidationError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

bool get_bool(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_boolean()) throw ValidationError(where + "." + key + " must be a boolean");
    return v.get<bool>();
}

std::vector<double> get_values(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (v.is_string()) return parse_value_list(v.get<std::string>());
    if (!v.is_array()) throw ValidationError(where + "." + key + " must be an array or range string");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ValidationError(where + "." + key + " entries must be numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

const std::set<std::string> kParamNames = {"theta", "omega", "coupling", "gamma", "beta", "xi"};

} // namespace

std::vector<double> AxisSpec::values() const {
    if (count == 1) return {start};
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) v[std::size_t(k)] = start + (stop - start) * double(k) / double(count - 1);
    v.back() = stop;
    return v;
}

AxisSpec parse_axis(const std::string& name, const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ValidationError("axis '" + name + "': expected start:stop:count, got '" + text + "'");
    AxisSpec a;
    a.name = name;
    a.start = parse_number(parts[0], "axis start");
    a.stop = parse_number(parts[1], "axis stop");
    const double c = parse_number(parts[2], "axis count");
    if (c != std::floor(c) || c < 1 || c > 1e9) throw ValidationError("axis '" + name + "': count must be a positive integer");
    a.count = static_cast<int>(c);
    if (a.count < 2 && a.start != a.stop) throw ValidationError("axis '" + name + "': count must be >= 2");
    return a;
}

std::pair<double, double> parse_interval(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw ValidationError("expected lo:hi, got '" + text + "'");
    const double lo = parse_number(parts[0], "range start"), hi = parse_number(parts[1], "range stop");
    if (!(hi > lo)) throw ValidationError("range '" + text + "' must satisfy lo < hi");
    return {lo, hi};
}

std::vector<double> parse_value_list(const std::string& text) {
    if (text.find(':') != std::string::npos) return parse_axis("list", text).values();
    std::vector<double> out;
    for (const auto& s : split(text, ',')) out.push_back(parse_number(s, "list entry"));
    if (out.empty()) throw ValidationError("empty value list");
    return out;
}

bool is_parameter_name(const std::string& name) { return kParamNames.count(name) != 0; }

void set_parameter(AnyonParams& p, const std::string& name, double value) {
    if (name == "theta") p.theta = value;
    else if (name == "omega") p.omega = value;
    else if (name == "coupling") p.coupling_j = value;
    else if (name == "gamma") p.gamma = value;
    else if (name == "beta") p.beta = value;
    else if (name == "xi") p.xi = value;
    else throw ValidationError("unknown parameter '" + name + "'");
}

std::string to_string(RunKind k) {
    switch (k) {
    case RunKind::Fig1: return "fig1";
    case RunKind::Fig2: return "fig2";
    case RunKind::Fig3: return "fig3";
    case RunKind::Dimer: return "dimer";
    case RunKind::Single: return "single";
    }
    return "?";
}

RunKind parse_run_kind(const std::string& s) {
    for (RunKind k : {RunKind::Fig1, RunKind::Fig2, RunKind::Fig3, RunKind::Dimer, RunKind::Single})
        if (to_string(k) == s) return k;
    throw ValidationError("unknown run kind '" + s + "' (expected one of: fig1, fig2, fig3, dimer, single)");
}

void RunConfig::validate() const {
    params.validate();
    std::set<std::string> seen;
    for (const auto& a : axes) {
        if (!is_parameter_name(a.name)) throw ValidationError("axis references unknown parameter '" + a.name + "'");
        if (!seen.insert(a.name).second) throw ValidationError("duplicate axis '" + a.name + "'");
        if (a.count < 2) throw ValidationError("axis '" + a.name + "': count must be >= 2");
    }
    if ((kind == RunKind::Fig1 || kind == RunKind::Fig2) && (axes.size() != 1 || axes[0].name != "theta"))
        throw ValidationError(to_string(kind) + " sweeps exactly one axis, theta");
    if ((kind == RunKind::Dimer || kind == RunKind::Single) && axes.empty())
        throw ValidationError("sweep needs at least one axis");
    if (kind == RunKind::Fig2 && xi_values.empty()) throw ValidationError("fig2 needs at least one xi value");
    if (kind == RunKind::Fig3) {
        if (theta_values.empty() || xi_values.empty()) throw ValidationError("fig3 needs theta and xi lists");
        for (double t : theta_values)
            if (!(t >= 0.0 && t <= kPi)) throw ValidationError("fig3 theta values must lie in [0, pi]");
        if (cutoff < 2) throw ValidationError("fig3 needs cutoff >= 2");
    }
    for (double x : xi_values)
        if (!(x >= -1.0 && x <= 1.0)) throw ValidationError("xi values must lie in [-1, 1]");
    if (cutoff < 1) throw ValidationError("cutoff must be >= 1");
    if (threads < 0) throw ValidationError("threads must be >= 0");
    grid.validate();
    if (output.empty()) throw ValidationError("output path is empty");
}

RunConfig default_config(RunKind kind) {
    RunConfig c;
    c.kind = kind;
    if (kind == RunKind::Fig1 || kind == RunKind::Fig2) c.axes.push_back({"theta", 0.0, kPi, 200});
    if (kind == RunKind::Fig3) {
        c.theta_values = AxisSpec{"theta", 0.0, kPi, 13}.values();
        c.xi_values = {0.0, 1.0};
    }
    return c;
}

RunConfig config_from_json(const json& j) {
    require_keys(j, {"kind", "params", "conventions", "axes", "fig2", "fig3", "spectrum", "compute", "output"}, "config");
    RunConfig c = default_config(j.contains("kind") ? parse_run_kind(get_string(j, "kind", "config")) : RunKind::Dimer);

    if (j.contains("params")) {
        const json& p = j.at("params");
        require_keys(p, kParamNames, "params");
        for (const auto& name : kParamNames)
            if (p.contains(name)) set_parameter(c.params, name, get_number(p, name, "params"));
    }
    if (j.contains("conventions")) {
        const json& v = j.at("conventions");
        require_keys(v, {"frequency", "conjugation", "jump_basis", "stat_dephasing", "absorption", "hamiltonian"}, "conventions");
        if (v.contains("frequency")) c.conventions.frequency = parse_frequency_convention(get_string(v, "frequency", "conventions"));
        if (v.contains("conjugation")) c.conventions.conjugation = parse_conjugation(get_string(v, "conjugation", "conventions"));
        if (v.contains("jump_basis")) c.conventions.jump_basis = parse_jump_basis(get_string(v, "jump_basis", "conventions"));
        if (v.contains("absorption")) c.conventions.absorption = parse_absorption(get_string(v, "absorption", "conventions"));
        if (v.contains("hamiltonian")) c.conventions.hamiltonian = parse_hamiltonian(get_string(v, "hamiltonian", "conventions"));
        if (v.contains("stat_dephasing")) c.conventions.stat_dephasing = get_bool(v, "stat_dephasing", "conventions");
    }
    if (j.contains("axes")) {
        const json& axes = j.at("axes");
        if (!axes.is_array()) throw ValidationError("config.axes must be an array");
        c.axes.clear();
        for (const auto& a : axes) {
            require_keys(a, {"name", "range", "start", "stop", "count"}, "axes[]");
            const std::string name = get_string(a, "name", "axes[]");
            if (a.contains("range")) {
                if (a.contains("start") || a.contains("stop") || a.contains("count"))
                    throw ValidationError("axis '" + name + "': give either range or start/stop/count");
                c.axes.push_back(parse_axis(name, get_string(a, "range", "axes[]")));
            } else {
                AxisSpec s;
                s.name = name;
                s.start = get_number(a, "start", "axes[]");
                s.stop = get_number(a, "stop", "axes[]");
                s.count = get_int(a, "count", "axes[]");
                c.axes.push_back(s);
            }
        }
    }
    if (j.contains("fig2")) {
        const json& f = j.at("fig2");
        require_keys(f, {"regime", "xi"}, "fig2");
        if (f.contains("regime")) {
            const std::string r = get_string(f, "regime", "fig2");
            if (r == "low") c.regime = TemperatureRegime::Low;
            else if (r == "high") c.regime = TemperatureRegime::High;
            else throw ValidationError("fig2.regime must be 'low' or 'high'");
        }
        if (f.contains("xi")) c.xi_values = get_values(f, "xi", "fig2");
    }
    if (j.contains("fig3")) {
        const json& f = j.at("fig3");
        require_keys(f, {"theta", "xi"}, "fig3");
        if (f.contains("theta")) c.theta_values = get_values(f, "theta", "fig3");
        if (f.contains("xi")) c.xi_values = get_values(f, "xi", "fig3");
    }
    if (j.contains("spectrum")) {
        const json& s = j.at("spectrum");
        require_keys(s, {"grid", "range", "t2", "pathway", "equilibrium"}, "spectrum");
        if (s.contains("grid")) c.grid.count = get_int(s, "grid", "spectrum");
        if (s.contains("range")) {
            const json& r = s.at("range");
            if (r.is_string()) {
                std::tie(c.grid.lo, c.grid.hi) = parse_interval(r.get<std::string>());
            } else if (r.is_array() && r.size() == 2 && r[0].is_number() && r[1].is_number()) {
                c.grid.lo = r[0].get<double>();
                c.grid.hi = r[1].get<double>();
            } else {
                throw ValidationError("spectrum.range must be \"lo:hi\" or [lo, hi]");
            }
        }
        if (s.contains("t2")) c.grid.t2 = get_number(s, "t2", "spectrum");
        if (s.contains("pathway")) c.grid.pathway = spectra::parse_pathway(get_string(s, "pathway", "spectrum"));
        if (s.contains("equilibrium")) c.grid.equilibrium = spectra::parse_equilibrium(get_string(s, "equilibrium", "spectrum"));
    }
    if (j.contains("compute")) {
        const json& s = j.at("compute");
        require_keys(s, {"threads", "cutoff"}, "compute");
        if (s.contains("threads")) c.threads = get_int(s, "threads", "compute");
        if (s.contains("cutoff")) c.cutoff = get_int(s, "cutoff", "compute");
    }
    if (j.contains("output")) {
        const json& s = j.at("output");
        require_keys(s, {"path", "svg", "grids"}, "output");
        if (s.contains("path")) c.output = get_string(s, "path", "output");
        if (s.contains("svg")) c.svg = get_bool(s, "svg", "output");
        if (s.contains("grids")) c.grids = get_bool(s, "grids", "output");
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config file '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

nlohmann::ordered_json params_to_json(const AnyonParams& p) {
    nlohmann::ordered_json j;
    j["theta"] = p.theta;
    j["omega"] = p.omega;
    j["coupling"] = p.coupling_j;
    j["gamma"] = p.gamma;
    j["beta"] = p.beta;
    j["xi"] = p.xi;
    return j;
}

nlohmann::ordered_json conventions_to_json(const Conventions& c) {
    nlohmann::ordered_json j;
    j["frequency"] = std::string(to_string(c.frequency));
    j["conjugation"] = std::string(to_string(c.conjugation));
    j["jump_basis"] = std::string(to_string(c.jump_basis));
    j["stat_dephasing"] = c.stat_dephasing;
    j["absorption"] = std::string(to_string(c.absorption));
    j["hamiltonian"] = std::string(to_string(c.hamiltonian));
    return j;
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(c.kind);
    j["params"] = params_to_json(c.params);
    j["conventions"] = conventions_to_json(c.conventions);
    j["axes"] = nlohmann::ordered_json::array();
    for (const auto& a : c.axes) {
        nlohmann::ordered_json x;
        x["name"] = a.name;
        x["start"] = a.start;
        x["stop"] = a.stop;
        x["count"] = a.count;
        j["axes"].push_back(x);
    }
    if (c.kind == RunKind::Fig2) {
        j["fig2"]["regime"] = c.regime == TemperatureRegime::Low ? "low" : "high";
        j["fig2"]["xi"] = c.xi_values;
    }
    if (c.kind == RunKind::Fig3) {
        j["fig3"]["theta"] = c.theta_values;
        j["fig3"]["xi"] = c.xi_values;
    }
    if (c.kind == RunKind::Fig3) {
        j["spectrum"]["grid"] = c.grid.count;
        j["spectrum"]["range"] = {c.grid.lo, c.grid.hi};
        j["spectrum"]["t2"] = c.grid.t2;
        j["spectrum"]["pathway"] = spectra::to_string(c.grid.pathway);
        j["spectrum"]["equilibrium"] = spectra::to_string(c.grid.equilibrium);
        j["compute"]["cutoff"] = c.cutoff;
    }
    j["output"]["path"] = c.output;
    j["output"]["svg"] = c.svg;
    if (c.kind == RunKind::Fig3) j["output"]["grids"] = c.grids;
    return j;
}

} // namespace anyon::io
