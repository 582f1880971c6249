#include "gcn/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gcn/grid.hpp"

namespace gcn {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw ConfigError("unknown key " + where + "." + it.key());
}

void get(const json& j, const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
    out = j[key].get<double>();
}

void get(const json& j, const char* key, int& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
    out = j[key].get<int>();
}

void get(const json& j, const char* key, std::uint64_t& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_unsigned()) throw ConfigError(std::string(key) + " must be a non-negative integer");
    out = j[key].get<std::uint64_t>();
}

void get(const json& j, const char* key, bool& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_boolean()) throw ConfigError(std::string(key) + " must be true or false");
    out = j[key].get<bool>();
}

void get(const json& j, const char* key, std::string& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) throw ConfigError(std::string(key) + " must be a string");
    out = j[key].get<std::string>();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool valid_m(int m) { return m >= 9 && m % 2 == 1; }

}  // namespace

RunConfig RunConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    only_keys(j, "config", {"schema", "scenario", "grid", "sci", "flow", "verify", "seed", "out", "verbosity"});
    if (!j.contains("schema")) throw ConfigError("config.schema is required");
    int schema = 0;
    get(j, "schema", schema);
    if (schema != kSchema) throw ConfigError("unsupported config schema " + std::to_string(schema));

    RunConfig c;
    if (j.contains("scenario")) {
        const json& s = j["scenario"];
        only_keys(s, "scenario", {"name", "param", "recipe", "snapshot", "scale"});
        get(s, "name", c.scenario);
        get(s, "param", c.scenario_param);
        get(s, "recipe", c.recipe_path);
        get(s, "snapshot", c.snapshot_path);
        get(s, "scale", c.scale);
        int sources = s.contains("name") + !c.recipe_path.empty() + !c.snapshot_path.empty();
        if (sources > 1) throw ConfigError("scenario takes exactly one of name, recipe, snapshot");
    }
    if (j.contains("grid")) {
        only_keys(j["grid"], "grid", {"r", "m"});
        get(j["grid"], "r", c.grid_r);
        get(j["grid"], "m", c.grid_m);
    }
    if (j.contains("sci")) {
        const json& s = j["sci"];
        only_keys(s, "sci", {"t0", "k_star", "tol_zeta", "tol_zeta0", "max_iter", "min_radius_frac", "gate_eps",
                             "gate_zeta", "gate_mc", "cert_tol", "diverge_steps", "timing", "t_min"});
        get(s, "t0", c.sci.t0);
        get(s, "k_star", c.sci.k_star);
        get(s, "tol_zeta", c.sci.tol_zeta);
        get(s, "tol_zeta0", c.sci.tol_zeta0);
        get(s, "max_iter", c.sci.max_iter);
        get(s, "min_radius_frac", c.sci.min_radius_frac);
        get(s, "gate_eps", c.sci.gate_eps);
        get(s, "gate_zeta", c.sci.gate_zeta);
        get(s, "gate_mc", c.sci.gate_mc);
        get(s, "cert_tol", c.sci.cert_tol);
        get(s, "diverge_steps", c.sci.diverge_steps);
        get(s, "timing", c.sci.timing);
        get(s, "t_min", c.pipeline_t_min);
    }
    if (j.contains("flow")) {
        only_keys(j["flow"], "flow", {"substeps", "c"});
        get(j["flow"], "substeps", c.sci.flow.substeps);
        get(j["flow"], "c", c.sci.flow.c);
    }
    if (j.contains("verify")) {
        only_keys(j["verify"], "verify", {"m1", "m2"});
        get(j["verify"], "m1", c.verify_m1);
        get(j["verify"], "m2", c.verify_m2);
    }
    get(j, "seed", c.seed);
    get(j, "out", c.out_dir);
    get(j, "verbosity", c.verbosity);
    c.validate();
    return c;
}

std::string RunConfig::to_json() const {
    json j;
    j["schema"] = kSchema;
    j["scenario"] = {{"scale", scale}};
    if (!recipe_path.empty())
        j["scenario"]["recipe"] = recipe_path;
    else if (!snapshot_path.empty())
        j["scenario"]["snapshot"] = snapshot_path;
    else
        j["scenario"]["name"] = scenario, j["scenario"]["param"] = scenario_param;
    j["grid"] = {{"r", grid_r}, {"m", grid_m}};
    j["sci"] = {{"t0", sci.t0},
                {"k_star", sci.k_star},
                {"tol_zeta", sci.tol_zeta},
                {"tol_zeta0", sci.tol_zeta0},
                {"max_iter", sci.max_iter},
                {"min_radius_frac", sci.min_radius_frac},
                {"gate_eps", sci.gate_eps},
                {"gate_zeta", sci.gate_zeta},
                {"gate_mc", sci.gate_mc},
                {"cert_tol", sci.cert_tol},
                {"diverge_steps", sci.diverge_steps},
                {"timing", sci.timing},
                {"t_min", pipeline_t_min}};
    j["flow"] = {{"substeps", sci.flow.substeps}, {"c", sci.flow.c}};
    j["verify"] = {{"m1", verify_m1}, {"m2", verify_m2}};
    j["seed"] = seed;
    j["out"] = out_dir;
    j["verbosity"] = verbosity;
    return j.dump(2);
}

void RunConfig::validate() const {
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    if (recipe_path.empty() && snapshot_path.empty()) {
        bool known = false;
        for (const auto& s : scenario_names()) known = known || s == scenario;
        need(known, "unknown scenario " + scenario);
    }
    need(std::isfinite(scale) && scale != 0, "scenario.scale must be finite and nonzero");
    need(grid_r > 0 && grid_r <= 1, "grid.r must lie in (0, 1]");
    need(valid_m(grid_m), "grid.m must be odd and at least 9");
    need(valid_m(verify_m1) && valid_m(verify_m2), "verify.m1 and verify.m2 must be odd and at least 9");
    need(sci.t0 > 1 && std::isfinite(sci.t0), "sci.t0 must exceed 1");
    need(sci.k_star >= 0 && sci.k_star <= 3, "sci.k_star must lie in 0..3");
    need(sci.tol_zeta >= 0 && sci.tol_zeta0 >= 0, "tolerances must be non-negative");
    need(sci.max_iter >= 1, "sci.max_iter must be positive");
    need(sci.min_radius_frac > 0 && sci.min_radius_frac <= 1, "sci.min_radius_frac must lie in (0, 1]");
    need(sci.gate_eps > 0 && sci.gate_zeta > 0 && sci.gate_mc > 0, "gates must be positive");
    need(sci.cert_tol > 0, "sci.cert_tol must be positive");
    need(sci.diverge_steps >= 1, "sci.diverge_steps must be positive");
    need(pipeline_t_min > 0 && pipeline_t_min <= 1, "sci.t_min must lie in (0, 1]");
    need(sci.flow.substeps >= 1, "flow.substeps must be positive");
    need(sci.flow.c >= 0, "flow.c must be non-negative");
    need(verbosity >= 0 && verbosity <= 2, "verbosity must lie in 0..2");
    need(!out_dir.empty(), "out must be a directory path");
}

Deformation load_input(const RunConfig& c) {
    Deformation e;
    try {
        if (!c.snapshot_path.empty()) {
            e = load_deformation(c.snapshot_path);
        } else {
            Scenario s = c.recipe_path.empty() ? named_scenario(c.scenario, c.scenario_param)
                                               : scenario_from_json(read_file(c.recipe_path));
            e = s.sample(make_grid(s.n, c.grid_r, c.grid_m));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("input: ") + ex.what());
    }
    if (c.scale != 1.0) e *= cd(c.scale);
    return e;
}

void save_deformation(const std::string& path, const Deformation& e) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    save_snapshot(out, e.fields());
}

Deformation load_deformation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::vector<Field> fs;
    try {
        fs = load_snapshot(in);
    } catch (const std::exception& ex) {
        throw ConfigError("snapshot " + path + ": " + ex.what());
    }
    if (fs.empty()) throw ConfigError("snapshot " + path + " has no components");
    Deformation e(fs[0].g);
    auto dst = e.fields_mut();
    if (dst.size() != fs.size())
        throw ConfigError("snapshot " + path + " has " + std::to_string(fs.size()) + " components, a deformation at n=" +
                          std::to_string(fs[0].g.n) + " has " + std::to_string(dst.size()));
    for (std::size_t k = 0; k < fs.size(); ++k) *dst[k] = fs[k];
    return e;
}

std::string plot_columns(const IterationTrace& tr) {
    if (tr.rows.empty()) throw DomainError("empty trace");
    std::string out = "# d log10_zeta_k0 r_d t_d\n";
    char buf[160];
    for (const TraceRow& r : tr.rows) {
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g\n", r.d, std::log10(r.zeta[0]), r.r, r.t);
        out += buf;
    }
    return out;
}

std::vector<PlotRow> parse_plot_columns(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<PlotRow> rows;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string cell[4], extra;
        if (!(ls >> cell[0] >> cell[1] >> cell[2] >> cell[3]) || (ls >> extra))
            throw DomainError("plot row needs 4 columns: " + line);
        double v[4];
        for (int k = 0; k < 4; ++k) {
            std::size_t used = 0;
            try {
                v[k] = std::stod(cell[k], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != cell[k].size() || used == 0) throw DomainError("malformed plot cell: " + cell[k]);
        }
        rows.push_back({static_cast<int>(v[0]), v[1], v[2], v[3]});
    }
    if (rows.empty()) throw DomainError("empty plot data");
    return rows;
}

}  // namespace gcn
