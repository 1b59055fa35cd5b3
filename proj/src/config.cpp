#include "leslie1d/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace leslie1d {

namespace {

const std::set<std::string> kKnownKeys = {
    "coefficients.preset", "coefficients.alpha0", "coefficients.alpha1", "coefficients.alpha2",
    "coefficients.alpha3", "coefficients.alpha4", "coefficients.alpha5", "coefficients.alpha6",
    "coefficients.alpha7", "coefficients.alpha8", "coefficients.gamma",  "grid.cells",
    "solver.scheme",       "solver.modes",        "solver.dt",           "solver.t_end",
    "solver.picard_tol",   "solver.picard_max",   "solver.freeze_velocity", "solver.cfl",
    "solver.limiter",      "initial.preset",      "initial.seed",        "initial.profile",
    "initial.mollify_delta", "output.directory",  "output.snapshot_every", "tolerances.energy_tol",
    "sweep.deltas",        "sweep.initial_check_cells",
};

double to_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
    if (pos != value.size()) throw ConfigError("config key '" + key + "': trailing characters in '" + value + "'");
    return out;
}

long to_long(const std::string& key, const std::string& value) {
    const double d = to_double(key, value);
    if (d != static_cast<double>(static_cast<long>(d))) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    }
    return static_cast<long>(d);
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

void flatten(const nlohmann::json& j, const std::string& prefix, ConfigMap& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        std::string joined;
        for (const auto& v : j) {
            if (!joined.empty()) joined += ",";
            joined += v.is_string() ? v.get<std::string>() : v.dump();
        }
        out[prefix] = joined;
    } else if (j.is_string()) {
        out[prefix] = j.get<std::string>();
    } else {
        out[prefix] = j.dump();
    }
}

}  // namespace

void RunConfig::check() const {
    if (cells < 8) throw ConfigError("grid.cells must be at least 8");
    if (modes < 1) throw ConfigError("solver.modes must be at least 1");
    if (modes >= cells) throw ConfigError("solver.modes must be below grid.cells");
    if (!(dt > 0.0)) throw ConfigError("solver.dt must be positive");
    if (!(t_end >= 0.0)) throw ConfigError("solver.t_end must be nonnegative");
    if (!(mollify_delta >= 0.0)) throw ConfigError("initial.mollify_delta must be nonnegative");
    if (!(oracle.cfl > 0.0 && oracle.cfl <= 1.0)) throw ConfigError("solver.cfl must lie in (0, 1]");
    if (snapshot_every < 0) throw ConfigError("output.snapshot_every must be nonnegative");
    if (picard_max < 1 || !(picard_tol > 0.0)) throw ConfigError("invalid Picard settings");
    static const std::set<std::string> presets{"static", "shear", "relaxation", "smooth_random", "rough_density"};
    if (!presets.contains(initial.preset)) throw ConfigError("unknown initial.preset '" + initial.preset + "'");
    if (initial.profile != "vacuum_bumps" && initial.profile != "vacuum_patch") {
        throw ConfigError("unknown initial.profile '" + initial.profile + "'");
    }
    if (initial.preset == "rough_density" && !(mollify_delta > 0.0)) {
        throw ConfigError("rough_density data contains vacuum; set initial.mollify_delta > 0");
    }
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    for (int i = 0; i < 9; ++i) j["coefficients"]["alpha" + std::to_string(i)] = coefficients[i];
    j["coefficients"]["gamma"] = coefficients.gamma_ad;
    j["grid"]["cells"] = cells;
    j["solver"] = {{"scheme", scheme == Scheme::galerkin ? "galerkin" : "fd"},
                   {"modes", modes},
                   {"dt", dt},
                   {"t_end", t_end},
                   {"picard_tol", picard_tol},
                   {"picard_max", picard_max},
                   {"freeze_velocity", freeze_velocity},
                   {"cfl", oracle.cfl},
                   {"limiter", oracle.limiter == Limiter::minmod ? "minmod" : "none"}};
    j["initial"] = {{"preset", initial.preset},
                    {"seed", initial.seed},
                    {"profile", initial.profile},
                    {"mollify_delta", mollify_delta}};
    j["output"] = {{"directory", output_dir.string()}, {"snapshot_every", snapshot_every}};
    j["tolerances"] = {{"energy_tol", energy_tol}};
    j["sweep"] = {{"deltas", sweep_deltas}, {"initial_check_cells", initial_check_cells}};
    return j;
}

ConfigMap parse_ini(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ConfigMap out;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("config key '" + section + "' must live inside a [section]");
        for (const auto& [key, value] : body) out[section + "." + key] = value.get_value<std::string>();
    }
    return out;
}

ConfigMap parse_json_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config parse error: top level must be an object");
    ConfigMap out;
    flatten(j, "", out);
    return out;
}

RunConfig config_from_map(const ConfigMap& map) {
    for (const auto& [k, v] : map) {
        if (!kKnownKeys.contains(k)) throw ConfigError("unknown config key '" + k + "'");
    }
    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = map.find(key);
        return it == map.end() ? nullptr : &it->second;
    };

    RunConfig cfg;
    if (const auto* p = get("coefficients.preset"); p && *p != "reference") {
        throw ConfigError("unknown coefficients.preset '" + *p + "'");
    }
    for (int i = 0; i < 9; ++i) {
        const std::string key = "coefficients.alpha" + std::to_string(i);
        if (const auto* v = get(key)) cfg.coefficients.alpha[static_cast<std::size_t>(i)] = to_double(key, *v);
    }
    if (const auto* v = get("coefficients.gamma")) cfg.coefficients.gamma_ad = to_double("coefficients.gamma", *v);
    if (const auto* v = get("grid.cells")) cfg.cells = static_cast<int>(to_long("grid.cells", *v));
    if (const auto* v = get("solver.scheme")) {
        if (*v == "galerkin") {
            cfg.scheme = Scheme::galerkin;
        } else if (*v == "fd") {
            cfg.scheme = Scheme::fd;
        } else {
            throw ConfigError("solver.scheme must be galerkin or fd");
        }
    }
    if (const auto* v = get("solver.modes")) cfg.modes = static_cast<int>(to_long("solver.modes", *v));
    if (const auto* v = get("solver.dt")) cfg.dt = to_double("solver.dt", *v);
    if (const auto* v = get("solver.t_end")) cfg.t_end = to_double("solver.t_end", *v);
    if (const auto* v = get("solver.picard_tol")) cfg.picard_tol = to_double("solver.picard_tol", *v);
    if (const auto* v = get("solver.picard_max")) cfg.picard_max = static_cast<int>(to_long("solver.picard_max", *v));
    if (const auto* v = get("solver.cfl")) cfg.oracle.cfl = to_double("solver.cfl", *v);
    if (const auto* v = get("solver.limiter")) {
        if (*v == "none") {
            cfg.oracle.limiter = Limiter::none;
        } else if (*v == "minmod") {
            cfg.oracle.limiter = Limiter::minmod;
        } else {
            throw ConfigError("solver.limiter must be none or minmod");
        }
    }
    if (const auto* v = get("initial.preset")) cfg.initial.preset = *v;
    if (const auto* v = get("initial.seed")) cfg.initial.seed = static_cast<std::uint64_t>(to_long("initial.seed", *v));
    if (const auto* v = get("initial.profile")) cfg.initial.profile = *v;
    if (const auto* v = get("initial.mollify_delta")) cfg.mollify_delta = to_double("initial.mollify_delta", *v);
    // The relaxation preset studies the director alone unless told otherwise.
    cfg.freeze_velocity = cfg.initial.preset == "relaxation";
    if (const auto* v = get("solver.freeze_velocity")) cfg.freeze_velocity = to_bool("solver.freeze_velocity", *v);
    if (const auto* v = get("output.directory")) cfg.output_dir = *v;
    if (const auto* v = get("output.snapshot_every")) {
        cfg.snapshot_every = static_cast<int>(to_long("output.snapshot_every", *v));
    }
    if (const auto* v = get("tolerances.energy_tol")) cfg.energy_tol = to_double("tolerances.energy_tol", *v);
    if (const auto* v = get("sweep.deltas")) cfg.sweep_deltas = parse_delta_list(*v);
    if (const auto* v = get("sweep.initial_check_cells")) {
        cfg.initial_check_cells = static_cast<int>(to_long("sweep.initial_check_cells", *v));
    }
    cfg.check();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const ConfigMap map = path.extension() == ".json" ? parse_json_config(buf.str()) : parse_ini(buf.str());
    return config_from_map(map);
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& dir) {
    if (dir.is_absolute()) return dir;
    if (const char* root = std::getenv("LESLIE1D_OUTPUT_ROOT"); root && *root) return std::filesystem::path(root) / dir;
    return dir;
}

std::vector<double> parse_delta_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t[]");
        const auto e = item.find_last_not_of(" \t[]");
        if (b == std::string::npos) continue;
        out.push_back(to_double("deltas", item.substr(b, e - b + 1)));
    }
    if (out.empty()) throw ConfigError("delta list is empty");
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(out[i] > 0.0)) throw ConfigError("deltas must be positive");
        if (i > 0 && !(out[i] < out[i - 1])) throw ConfigError("deltas must be strictly decreasing");
    }
    return out;
}

}  // namespace leslie1d
