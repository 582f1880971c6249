#pragma once

#include <string>
#include <vector>

#include "gcn/flow.hpp"
#include "gcn/oracle.hpp"

namespace gcn {

// Real coordinates as exact polynomials: x_i = (z_i + zbar_i)/2, y_i = (z_i - zbar_i)/(2i).
oracle::Poly real_x(int i);
oracle::Poly real_y(int i);

// Scrambling generalized diffeomorphism: a closed real 2-form with polynomial
// components B[pair_index(a, b, 2n)] on dx_a ^ dx_b, followed by the flow of a
// polynomial section v of L*.
struct Scrambler {
    std::vector<oracle::Poly> B;
    oracle::PolySection v;

    bool is_trivial() const;
    GenDiffeo build(const GridSpec& g, const FlowParams& p = {8, 0}) const;
};

struct Scenario {
    std::string name;
    int n = 2;
    oracle::PolySection seed;  // the deformation before scrambling
    Scrambler scrambler;
    bool integrable = true;
    bool normal_form = false;

    Deformation sample(const GridSpec& g) const;
};

// beta with holomorphic polynomial coefficients on d_1 ^ d_2
Scenario gen_holomorphic_poisson(int n, const oracle::Poly& coeff);
Scenario gen_gauge_scrambled(const Scenario& base, const Scrambler& phi0);
Scenario gen_beltrami(int n, const oracle::Poly& mu);

// Named scenarios used by the CLI and the acceptance run:
//   poisson      z1 d1^d2
//   poisson_sq   z2^2 d1^d2
//   g2           z1 d1^d2 scrambled by B = kappa (dx1^dy2 + y1 dy1^dx2)
//   g2_large     10 z1 d1^d2 scrambled by kappa (2 x1 dx1^dy2 + y1 dy1^dx2)
//   beltrami     constant mu at n = 1
Scenario named_scenario(const std::string& name, double param = -1);
std::vector<std::string> scenario_names();

// Recipe round trip as JSON text; coefficients are exact rationals.
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

}  // namespace gcn
