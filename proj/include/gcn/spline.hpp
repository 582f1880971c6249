#pragma once

#include <vector>

#include "gcn/section.hpp"

namespace gcn {

// Not-a-knot cubic spline slopes on m uniform unit-spaced nodes: s = D f.
const std::vector<double>& spline_slope_matrix(int m);

// Tensor-product cubic spline through several fields on a common lattice.
// Stored in Hermite form: for every subset of axes, the mixed slope array.
class MultiSpline {
public:
    MultiSpline() = default;
    explicit MultiSpline(const std::vector<const Field*>& comps);

    const GridSpec& grid() const { return g_; }
    int components() const { return k_; }
    bool contains(const double* x, double slack = 1e-12) const;

    // Writes the interpolated component values at x; throws DomainError outside.
    void eval(const double* x, cd* out) const;
    // Also writes the gradient grad[c * dims + a] = d(component c)/dx_a for the
    // first ngrad components (all when negative).
    void eval_grad(const double* x, cd* out, cd* grad, int ngrad = -1) const;

private:
    void locate(const double* x, int* cell, double* u) const;

    GridSpec g_;
    int k_ = 0;
    // data_[mask][node * k_ + c], slopes scaled by h per differentiated axis
    std::vector<std::vector<cd>> data_;
};

cd interpolate(const Field& f, const double* x);

// Resample fields onto the lattice of radius r2 < r with the same resolution.
Field restrict_to(const Field& f, double r2);
std::vector<Field> restrict_to(const std::vector<const Field*>& comps, double r2);
// Field-like overloads; r2 equal to the current radius returns a copy.
Deformation restrict_to(const Deformation& e, double r2);
GenVectorField restrict_to(const GenVectorField& v, double r2);

}  // namespace gcn
