#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcn/section.hpp"

namespace gcn::verify {

struct Check {
    std::string name;
    double value = 0;
    double tol = 0;
    bool pass = false;
    std::string detail;
};

// Grid tolerance schedule for fourth-order quantities: C h^4. With degree-6
// test sections the measured constant is about 215, so the default leaves 2x.
double h4_tolerance(const GridSpec& g, double C = 500.0);

// max |(dbar P + P dbar) s - s|_0 / max(1, |s|_0) over the n = 1 corpus of
// scalar and vector valued one-forms.
double homotopy_residual(int m, int count = 5);

// Grid-vs-oracle errors, relative to max(1, |exact|_0), for
//   dbar [eps1, theta] = [dbar eps1, theta] - [eps1, dbar theta]   (n = 2 only)
//   dbar [a, b] = [dbar a, b] + (-1)^{|a|-1} [a, dbar b]
// on random degree-d polynomial sections. Both sides of each identity are
// compared with the exact value; cases where the grid differential does not
// apply are skipped and counted.
struct BracketErrors {
    double bialgebroid = 0, derivation = 0;
    int cases = 0, skipped = 0;
    bool oracle_exact = true;
};
BracketErrors bracket_errors(int n, int m, std::uint64_t seed = 900, int degree = 6);

// max over the four Maurer-Cartan blocks of |grid - exact|_0 on random eps.
double mc_block_error(int n, int m, std::uint64_t seed = 77, int count = 3);

// d/dt of Phi_{dt v} . eps by finite differences, against the Courant velocity
// and against the algebraic formula dbar v + [eps, v] on L*.
struct LinearizationPair {
    std::string name;
    double velocity_err = 0;
    double formula_err = 0;
};
std::vector<LinearizationPair> linearization_pairs(int m2, int m1, double dt = 1e-3);

// Relative errors of the exact scaling laws; conjugation_printed is the
// composition order as printed, reported for information.
struct ScalingErrors {
    double dilation = 0;
    double derivative_law = 0;
    double lambda = 0;
    double lambda_diffeo = 0;
    double mc_invariance = 0;
    double conjugation = 0;
    double conjugation_printed = 0;
    bool rescale_bitwise = false;
};
ScalingErrors scaling_errors(int m);

// Perturbation eta = d_beta u + closed non-exact part around beta = z1 d1^d2,
// and the remainder |zeta(eps + dbar V + [beta, V])|_0 at eps = beta + s eta.
Deformation test_perturbation(const GridSpec& g, bool with_closed = true);
double infinitesimal_remainder(const Deformation& eta, double s);

// Max over the analytic corpus and t in {2, 4, 8, 16} of the smoothing defect
// ratios for (p, q) in {(1,0), (2,1), (3,1)}.
struct SmoothingConstants {
    double growth[3] = {0, 0, 0};
    double approx[3] = {0, 0, 0};
};
SmoothingConstants smoothing_constants(int m, int count = 20);

struct Options {
    int m1 = 33;  // n = 1 grids
    int m2 = 13;  // n = 2 grids
    std::uint64_t seed = 0;  // 0 keeps the default corpus seeds
};

std::vector<Check> run_identity_suites(const Options& o);
std::string report_json(const std::vector<Check>& checks);

}  // namespace gcn::verify
