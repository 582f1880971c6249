#pragma once

#include <string>
#include <vector>

#include "gcn/section.hpp"

namespace gcn {

// dbar on the exterior algebra of L*: adds dzbar_j on the left of each term.
Section dbar(const Section& s);

// Bracket on the exterior algebra of L*, generated from the Courant bracket on
// generators and the graded Leibniz rule. Terms of degree > 3 are dropped.
Section bracket(const Section& a, const Section& b);

// Vector plus one-form in real coordinates, complex coefficients.
struct RealPair {
    GridSpec g;
    std::vector<Field> X;   // components on d/dx_a
    std::vector<Field> xi;  // components on dx_a

    RealPair() = default;
    explicit RealPair(const GridSpec& grid) : g(grid), X(grid.dims(), Field(grid)), xi(grid.dims(), Field(grid)) {}
};

RealPair courant_bracket(const RealPair& u, const RealPair& v);

// d_L sigma + [eps, sigma]
Section deformed_differential(const Deformation& e, const Section& s);

struct MCResidual {
    Section c30, c21, c12, c03;
    double norms[4] = {0, 0, 0, 0};
};

MCResidual mc_residual(const Deformation& e);

struct NormalFormReport {
    bool ok = false;
    double zeta_norm = 0;
    double dbar_eps1 = 0;
    double self_bracket = 0;
};

NormalFormReport is_normal_form(const Deformation& e, double tol);

}  // namespace gcn
