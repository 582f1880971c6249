#pragma once

#include <string>
#include <vector>

#include "gcn/calculus.hpp"
#include "gcn/flow.hpp"

namespace gcn {

struct SCIParams {
    double t0 = 4.0;
    int k_star = 2;
    double tol_zeta = 0;      // on |zeta|_{k_star}; 0 selects 10x the measured floor
    double tol_zeta0 = 0;     // on |zeta|_0; 0 selects 10x the measured floor
    int max_iter = 12;
    double min_radius_frac = 0.5;
    double gate_eps = 2.0;    // |eps|_3 bound
    double gate_zeta = 0.1;   // |zeta(eps)|_3 bound
    double gate_mc = 1e-3;    // sup of the maurer-cartan blocks
    double cert_tol = 1e-6;   // lower bound on the certificate tolerance
    double origin_tol = 1e-10;
    int bisection_steps = 8;
    double floor = -1;        // measured when negative
    int diverge_steps = 3;
    bool pin_origin = true;
    bool timing = false;      // wall_ms column; off keeps traces reproducible
    FlowParams flow{8, 0};
};

struct TraceRow {
    int d = 0;
    double t = 0, r = 0;
    double zeta[3] = {0, 0, 0};
    double eps_k0 = 0, eps_k2 = 0;
    double phi_dist_k1 = 0;
    double mc_c21 = 0, mc_c12 = 0;
    double wall_ms = 0;
};

struct IterationTrace {
    std::vector<TraceRow> rows;

    static const char* header();
    std::string csv() const;
    static IterationTrace parse_csv(const std::string& text);
};

// P([eps1, P eps3] - eps2 - eps3)
GenVectorField correction_field(const Deformation& e);

enum class Termination { converged, max_iter, radius_exhausted, diverged, flow_abort, singular, gate };
const char* to_string(Termination t);

struct StepResult {
    Deformation eps;
    GenDiffeo phi;
};

// One smoothed correction step at smoothing parameter t.
StepResult iterate_once(const Deformation& e, double t, const SCIParams& p);

struct FloorEstimate {
    double k0 = 0, k_star = 0;
};

// zeta error left by a gauge round trip Phi^{-1} . (Phi . eps) with the first
// correction flow; what the grid can resolve at this resolution.
FloorEstimate discretization_floor(const Deformation& e, const SCIParams& p);

struct NormalizeResult {
    Termination reason = Termination::max_iter;
    std::string message;
    GenDiffeo psi;
    Deformation eps;
    IterationTrace trace;
    FloorEstimate floor;
    double tol_zeta = 0, tol_zeta0 = 0;
    NormalFormReport certificate;
    double cert_tol = 0;
    double contraction_exponent = 0;  // fitted over steps above twice the floor, 0 if too few
    int effective_steps = 0;
};

NormalizeResult normalize(const Deformation& e0, const SCIParams& p);

// Least-squares slope of log z_{d+1} against log z_d over the given values.
double fit_exponent(const std::vector<double>& z);

// Pushforward by x -> t x; the result lives on radius min(t r, 1).
Deformation dilate(const Deformation& e, double t);
// t eps1 + eps2 + t^{-1} eps3
Deformation lambda_transform(const Deformation& e, double t);
// dilate(lambda_transform(e, t^2), 1/t); requires e(0) = 0 within tol
Deformation rescale_R(const Deformation& e, double t, double tol = 1e-10);

struct PipelineResult {
    double t = 1;
    NormalizeResult inner;
    Deformation normal_form;  // t^{-2} times the inner bivector, on the dilated domain
    GenDiffeo equivalence;    // (t^2 B, phi) from the inner composite; acts on dilate(e, 1/t)
    double equivalence_residual = -1;  // relative, from acting with the chain; -1 when not run
    double rescale_ratio = 0;          // |R_t e|_3 / (t |e|_3)
    std::string message;
};

PipelineResult full_pipeline(const Deformation& raw, const SCIParams& p, double t_min = 1.0 / 64);

bool passes_gate(const Deformation& e, const SCIParams& p, std::string* why = nullptr);

std::string summary_json(const NormalizeResult& r, const SCIParams& p);

}  // namespace gcn
