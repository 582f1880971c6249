// gcnorm: batch front end for the normalization library.
//
// Exit codes:
//   0  success
//   1  internal error
//   2  configuration, input or parse error
//   3  smallness gate failed
//   4  iteration limit reached
//   5  radius exhausted
//   6  iteration diverged
//   7  flow aborted
//   8  singular step
//   9  converged but the normal-form certificate failed
//  10  one or more verify checks failed

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcn/config.hpp"
#include "gcn/normalizer.hpp"
#include "gcn/verify.hpp"

namespace fs = std::filesystem;
using namespace gcn;

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kGate = 3, kMaxIter = 4, kRadius = 5, kDiverged = 6, kFlowAbort = 7,
            kSingular = 8, kCertificate = 9, kVerify = 10 };

int exit_for(const NormalizeResult& r) {
    switch (r.reason) {
        case Termination::converged: return r.certificate.ok ? kOk : kCertificate;
        case Termination::max_iter: return kMaxIter;
        case Termination::radius_exhausted: return kRadius;
        case Termination::diverged: return kDiverged;
        case Termination::flow_abort: return kFlowAbort;
        case Termination::singular: return kSingular;
        case Termination::gate: return kGate;
    }
    return kInternal;
}

struct Overrides {
    std::string config, out;
    int grid_m = 0;
    double t0 = 0, tol = -1;
    long long seed = -1;
    bool timing = false;
};

RunConfig resolve(const Overrides& o) {
    RunConfig c;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw ConfigError("cannot open config " + o.config);
        std::ostringstream ss;
        ss << in.rdbuf();
        c = RunConfig::from_json(ss.str());
    }
    if (!o.out.empty()) c.out_dir = o.out;
    if (o.grid_m) c.grid_m = c.verify_m1 = c.verify_m2 = o.grid_m;
    if (o.t0) c.sci.t0 = o.t0;
    if (o.tol >= 0) c.sci.tol_zeta = o.tol;
    if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
    if (o.timing) c.sci.timing = true;
    c.validate();
    return c;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out || !(out << text)) throw std::runtime_error("cannot write " + p.string());
}

fs::path out_dir(const RunConfig& c) {
    fs::path d(c.out_dir);
    fs::create_directories(d);
    return d;
}

int cmd_verify(const RunConfig& c) {
    verify::Options o{c.verify_m1, c.verify_m2, c.seed};
    auto checks = verify::run_identity_suites(o);
    std::string report = verify::report_json(checks);
    write_file(out_dir(c) / "verify.json", report + "\n");
    int failed = 0;
    for (const auto& k : checks) {
        failed += !k.pass;
        if (c.verbosity >= 1)
            std::printf("%s  %-55s %.3e (tol %.3e)%s%s\n", k.pass ? "PASS" : "FAIL", k.name.c_str(), k.value, k.tol,
                        k.detail.empty() ? "" : "  ", k.detail.c_str());
    }
    return failed ? kVerify : kOk;
}

void report_run(const RunConfig& c, const NormalizeResult& r, nlohmann::json summary) {
    fs::path d = out_dir(c);
    summary["seed"] = c.seed;
    summary["config"] = nlohmann::json::parse(c.to_json());
    write_file(d / "trace.csv", r.trace.csv());
    write_file(d / "summary.json", summary.dump(2) + "\n");
    if (c.verbosity >= 2) std::cerr << r.trace.csv();
    if (c.verbosity >= 1) {
        std::printf("termination %s: %s\n", to_string(r.reason), r.message.c_str());
        if (!r.trace.rows.empty())
            std::printf("final |zeta|_0 %.3e, radius %.4f, certificate %s\n", r.trace.rows.back().zeta[0], r.eps.g.r,
                        r.certificate.ok ? "ok" : "failed");
    }
}

int cmd_normalize(const RunConfig& c) {
    Deformation e = load_input(c);
    NormalizeResult r = normalize(e, c.sci);
    report_run(c, r, nlohmann::json::parse(summary_json(r, c.sci)));
    return exit_for(r);
}

int cmd_pipeline(const RunConfig& c) {
    Deformation e = load_input(c);
    PipelineResult p = full_pipeline(e, c.sci, c.pipeline_t_min);
    auto s = nlohmann::json::parse(summary_json(p.inner, c.sci));
    s["pipeline"] = {{"t", p.t},
                     {"rescale_ratio", p.rescale_ratio},
                     {"equivalence_residual", p.equivalence_residual},
                     {"normal_form_radius", p.normal_form.g.r},
                     {"message", p.message}};
    report_run(c, p.inner, s);
    if (c.verbosity >= 1) std::printf("pipeline scale t = %.6g: %s\n", p.t, p.message.c_str());
    return exit_for(p.inner);
}

int cmd_sample(const RunConfig& c) {
    Deformation e = load_input(c);
    fs::path p = out_dir(c) / "snapshot.txt";
    save_deformation(p.string(), e);
    if (c.verbosity >= 1) std::printf("wrote %s\n", p.string().c_str());
    return kOk;
}

int cmd_plotdata(const std::string& trace_path, const RunConfig& c) {
    std::ifstream in(trace_path);
    if (!in) throw ConfigError("cannot open trace " + trace_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    IterationTrace tr;
    try {
        tr = IterationTrace::parse_csv(ss.str());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("trace: ") + e.what());
    }
    fs::path p = out_dir(c) / "plotdata.dat";
    write_file(p, plot_columns(tr));
    if (c.verbosity >= 1) std::printf("wrote %s (%zu rows)\n", p.string().c_str(), tr.rows.size());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normalization of generalized complex deformations on grids"};
    app.require_subcommand(1, 1);
    Overrides o;
    std::string trace_path;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON run configuration");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--grid-m", o.grid_m, "grid points per axis (odd, >= 9)");
        sub->add_option("--t0", o.t0, "initial smoothing parameter");
        sub->add_option("--tol", o.tol, "zeta tolerance at the derivative order k_star");
        sub->add_option("--seed", o.seed, "corpus seed; 0 keeps the default");
        sub->add_flag("--timing", o.timing, "fill the wall_ms trace column");
    };
    CLI::App* verify = app.add_subcommand("verify", "run the identity suites, write verify.json");
    CLI::App* norm = app.add_subcommand("normalize", "normalize the configured input, write trace.csv and summary.json");
    CLI::App* pipe = app.add_subcommand("pipeline", "rescale, normalize and undo the rescaling");
    CLI::App* sample = app.add_subcommand("sample", "write the configured input as snapshot.txt");
    CLI::App* plot = app.add_subcommand("trace-plotdata", "convert a trace CSV into plotdata.dat columns");
    for (CLI::App* s : {verify, norm, pipe, sample, plot}) common(s);
    plot->add_option("trace", trace_path, "trace CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        RunConfig c = resolve(o);
        if (verify->parsed()) return cmd_verify(c);
        if (norm->parsed()) return cmd_normalize(c);
        if (pipe->parsed()) return cmd_pipeline(c);
        if (sample->parsed()) return cmd_sample(c);
        return cmd_plotdata(trace_path, c);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kInternal;
    }
}
