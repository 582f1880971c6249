#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcn/normalizer.hpp"
#include "gcn/scenario.hpp"

namespace gcn {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// JSON run configuration, schema 1. Every key is optional; unknown keys are
// rejected. Input source is exactly one of scenario.name, scenario.recipe
// (a scenario JSON file) or scenario.snapshot (a field snapshot file).
struct RunConfig {
    static constexpr int kSchema = 1;

    std::string scenario = "g2";
    double scenario_param = -1;  // passed to named_scenario; negative keeps its default
    std::string recipe_path;
    std::string snapshot_path;
    double scale = 1.0;  // multiplies the sampled deformation

    double grid_r = 1.0;
    int grid_m = 17;

    SCIParams sci;
    double pipeline_t_min = 1.0 / 64;

    int verify_m1 = 33;
    int verify_m2 = 13;

    std::uint64_t seed = 0;
    std::string out_dir = "out";
    int verbosity = 1;  // 0 silent, 1 summary line, 2 adds the trace

    static RunConfig from_json(const std::string& text);
    std::string to_json() const;
    void validate() const;  // throws ConfigError
};

// Loads the configured input onto its grid. Parse and recipe errors become
// ConfigError.
Deformation load_input(const RunConfig& c);

// Snapshot round trip for deformations.
void save_deformation(const std::string& path, const Deformation& e);
Deformation load_deformation(const std::string& path);

// Plot-ready columns "d log10_zeta_k0 r_d t_d" from a trace; empty traces throw.
struct PlotRow {
    int d = 0;
    double log_zeta = 0, r = 0, t = 0;
};
std::string plot_columns(const IterationTrace& tr);
std::vector<PlotRow> parse_plot_columns(const std::string& text);

}  // namespace gcn
