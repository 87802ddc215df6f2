#include "fieldroad/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fieldroad {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': '" + t + "' is not a number");
    return v;
}

}  // namespace

Config Config::parse_text(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key");
        c.kv_[key] = value;
    }
    return c;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) {
    kv_[key] = value;
}

std::string Config::get_string(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& dflt) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
}

double Config::get_number(const std::string& key) const {
    return parse_number(key, get_string(key));
}

double Config::get_number(const std::string& key, double dflt) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? dflt : parse_number(key, it->second);
}

int Config::get_int(const std::string& key, int dflt) const {
    const double v = get_number(key, static_cast<double>(dflt));
    if (v != std::floor(v))
        throw ConfigError("config key '" + key + "' must be an integer");
    return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool dflt) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    const std::string v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "' must be a boolean");
}

std::vector<double> Config::get_list(const std::string& key) const {
    const std::string text = get_string(key);
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_number(key, item));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' is an empty list");
    return out;
}

std::string Config::normalized() const {
    std::ostringstream out;
    for (const auto& [k, v] : kv_) out << k << " = " << v << "\n";
    return out.str();
}

namespace {

Kernel make_kernel(const Config& c) {
    const std::string name = c.get_string("kernel.profile", "epanechnikov");
    KernelProfile profile;
    try {
        profile = kernel_profile_from_name(name);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'kernel.profile': ") + e.what());
    }
    const double L = c.get_number("kernel.L", 1.0);
    if (!(L > 0.0)) throw ConfigError("config key 'kernel.L' must be positive");
    return Kernel(profile, L);
}

Nonlinearity make_nonlinearity(const Config& c) {
    const std::string kind = c.get_string("nonlinearity", "kpp");
    try {
        if (kind == "kpp") return Nonlinearity::kpp(c.get_number("kpp.r", 1.0));
        if (kind == "sir")
            return Nonlinearity::sir(c.get_number("sir.S0"),
                                     c.get_number("sir.beta"),
                                     c.get_number("sir.alpha"));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config nonlinearity: ") + e.what());
    }
    throw ConfigError("config key 'nonlinearity' must be kpp or sir");
}

}  // namespace

RunConfig RunConfig::load(const Config& c) {
    const std::string model = c.get_string("model", "invasion");
    ModelKind kind;
    if (model == "invasion")
        kind = ModelKind::Invasion;
    else if (model == "sirt")
        kind = ModelKind::SirtIntegrated;
    else if (model == "sirt_transport")
        kind = ModelKind::SirtTransport;
    else
        throw ConfigError(
            "config key 'model' must be invasion, sirt or sirt_transport");

    ModelParams params{c.get_number("params.d", 1.0),
                       c.get_number("params.D", 0.0),
                       make_kernel(c),
                       c.get_number("params.mu", 1.0),
                       c.get_number("params.nu", 1.0),
                       make_nonlinearity(c),
                       c.get_number("params.q", 0.0)};
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (kind != ModelKind::Invasion && !params.f.is_sir())
        throw ConfigError("config: sirt models require nonlinearity = sir");

    RunConfig rc(params);
    rc.model = kind;

    const std::string analysis = c.get_string("run.analysis", "speed");
    if (analysis == "speed")
        rc.analysis = AnalysisKind::Speed;
    else if (analysis == "steady")
        rc.analysis = AnalysisKind::Steady;
    else
        throw ConfigError("config key 'run.analysis' must be speed or steady");

    rc.t_end = c.get_number("run.t_end", 0.0);
    if (rc.t_end < 0.0) throw ConfigError("config key 'run.t_end' must be >= 0");
    rc.snapshot_every = c.get_number("run.snapshot_every", 1.0);
    rc.fit_window = c.get_number("run.fit_window", 0.4);
    rc.steady_tol = c.get_number("run.steady_tol", 1e-8);

    // Domain defaults: wide enough that fronts stay clear of the x-edges,
    // tall enough to hold ~12 e-foldings of the vertical decay. Near the
    // epidemic threshold the vertical tail thickens, hence the R0 factor
    // (heuristic, see README).
    const double fp0 = params.f.fprime0();
    double default_Y = (fp0 > 0.0) ? 12.0 * std::sqrt(params.d / fp0) : 15.0;
    if (params.f.is_sir() && params.f.r0() < 1.0)
        default_Y = std::min(5.0, std::sqrt(1.0 / (1.0 - params.f.r0()))) * default_Y;
    double default_X = 300.0 * params.kernel.L();
    if (fp0 > 0.0)
        default_X = std::max(default_X,
                             40.0 * 2.0 * std::sqrt(params.d * fp0) * rc.t_end);

    GridSpec g;
    g.X = c.get_number("grid.X", default_X);
    g.Y = c.get_number("grid.Y", default_Y);
    g.dx = c.get_number("grid.dx", params.kernel.L() / 4.0);
    g.dy = c.get_number("grid.dy", g.dx);
    const std::string xb = c.get_string("grid.x_boundary", "neumann");
    if (xb == "neumann")
        g.x_boundary = XBoundary::Neumann;
    else if (xb == "periodic")
        g.x_boundary = XBoundary::Periodic;
    else
        throw ConfigError("config key 'grid.x_boundary' must be neumann or periodic");
    const std::string yt = c.get_string("grid.y_top", "dirichlet0");
    if (yt == "dirichlet0")
        g.y_top = YTop::Dirichlet0;
    else if (yt == "neumann")
        g.y_top = YTop::Neumann;
    else
        throw ConfigError("config key 'grid.y_top' must be dirichlet0 or neumann");
    const std::string dt = c.get_string("grid.dt", "auto");
    g.dt = (dt == "auto") ? g.monotone_dt(params) : parse_number("grid.dt", dt);
    try {
        g.validate(params);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config grid: ") + e.what());
    }
    rc.grid = g;

    BumpSpec init;
    init.height = c.get_number("init.height", 1.0);
    init.radius = c.get_number("init.radius", 2.0 * params.kernel.L());
    init.x0 = c.get_number("init.x0", 0.0);
    init.y0 = c.get_number("init.y0", g.Y / 3.0);
    if (init.height < 0.0) throw ConfigError("config key 'init.height' must be >= 0");
    if (!(init.radius > 0.0)) throw ConfigError("config key 'init.radius' must be > 0");
    rc.initial = init;

    rc.probe_levels = c.has("probes.levels") ? c.get_list("probes.levels")
                                             : std::vector<double>{0.3, 0.5, 0.7};
    for (double lv : rc.probe_levels)
        if (!(lv > 0.0 && lv < 1.0))
            throw ConfigError("config key 'probes.levels': levels must be in (0,1)");
    rc.probe_heights = c.has("probes.heights")
                           ? c.get_list("probes.heights")
                           : std::vector<double>{0.0, g.Y / 8.0, g.Y / 4.0};
    for (double h : rc.probe_heights)
        if (h < 0.0 || h > g.Y)
            throw ConfigError("config key 'probes.heights': heights must be in [0, Y]");

    const std::string ff = c.get_string("output.field", "csv");
    if (ff == "csv")
        rc.field_format = FieldFormat::Csv;
    else if (ff == "binary")
        rc.field_format = FieldFormat::Binary;
    else if (ff == "none")
        rc.field_format = FieldFormat::None;
    else
        throw ConfigError("config key 'output.field' must be csv, binary or none");

    rc.out_dir = c.get_string("output.dir", "");

    for (int axis = 1; axis <= 3; ++axis) {
        const std::string kk = "sweep.key" + std::to_string(axis);
        const std::string kv = "sweep.values" + std::to_string(axis);
        if (!c.has(kk) && !c.has(kv)) continue;
        if (axis > 2) throw ConfigError("config: at most 2 sweep axes are supported");
        SweepAxis a{c.get_string(kk), c.get_list(kv)};
        if (a.key.empty()) throw ConfigError("config key '" + kk + "' is empty");
        rc.axes.push_back(std::move(a));
    }
    const std::string target = c.get_string("sweep.target", "speed");
    if (target == "simulate") {
        if (!c.get_bool("sweep.expensive", false))
            throw ConfigError(
                "config: sweep.target = simulate must be acknowledged with "
                "sweep.expensive = true");
        rc.sweep_simulate = true;
    } else if (target != "speed") {
        throw ConfigError("config key 'sweep.target' must be speed or simulate");
    }

    rc.check_speed_tol = c.get_number("check.speed_tol", 0.10);
    rc.check_decay_tol = c.get_number("check.decay_tol", 0.10);
    rc.check_plateau_tol = c.get_number("check.plateau_tol", 0.05);

    if (c.has("reduced.mu_over_f")) {
        rc.reduced_invasion = std::vector<double>{
            c.get_number("reduced.mu_over_f"), c.get_number("reduced.d", 1.0),
            c.get_number("reduced.fprime0", 1.0), c.get_number("reduced.nu", 1.0)};
    }
    if (c.has("reduced.D_nd")) {
        rc.reduced_sirt = std::vector<double>{
            c.get_number("reduced.D_nd"), c.get_number("reduced.Lambda"),
            c.get_number("reduced.R0"), c.get_number("reduced.mu_bar", 1.0),
            c.get_number("reduced.nu_bar", 1.0)};
    }
    return rc;
}

}  // namespace fieldroad
