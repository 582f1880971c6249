#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gcn/section.hpp"

namespace gcn {

// Polynomial modes on the uniform lattice of one axis, orthonormal over the
// nodes; the first d + 1 modes span the Chebyshev polynomials T_0..T_d.
class SpectralBasis {
public:
    explicit SpectralBasis(int m);
    int m() const { return m_; }
    // coefficients in the orthonormal modes and back
    std::vector<double> forward(const std::vector<double>& f) const;
    std::vector<double> inverse(const std::vector<double>& c) const;
    // least-squares projector onto span{T_0..T_d} on the nodes, row-major m x m
    const std::vector<double>& projector(int d) const;
    // unit vector of the node-orthonormalised Chebyshev family, degree d
    std::vector<double> orthogonal_mode(int d) const;

private:
    int m_;
    std::vector<double> Q_;
    mutable std::vector<std::vector<double>> proj_;
};

const SpectralBasis& spectral_basis(int m);

// Tensor truncation to per-axis degree floor(t); identity once floor(t) >= m - 1.
Field smooth(const Field& f, double t);
Deformation smooth(const Deformation& e, double t);
GenVectorField smooth(const GenVectorField& v, double t);

struct SmoothingDefect {
    double growth;       // |S f|_p / (t^{p-q} |f|_q)
    double approximation;  // |f - S f|_q / (t^{q-p} |f|_p)
};

// nullopt when a reference norm vanishes
std::optional<SmoothingDefect> smoothing_defect(const Field& f, double t, int p, int q);

}  // namespace gcn
