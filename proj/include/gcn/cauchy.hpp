#pragma once

#include <vector>

#include "gcn/section.hpp"

namespace gcn {

// Weights of the solid Cauchy kernel 1/(x - zeta) against the 16 bicubic
// Hermite basis functions of a unit cell, tabulated per cell offset relative to
// the evaluation node. Only depends on the lattice size.
class CauchyKernel {
public:
    explicit CauchyKernel(int m);
    int m() const { return m_; }
    const cd* weights(int du, int dv) const {
        const int w = 2 * m_ - 1;
        return table_.data() + 16 * (static_cast<std::size_t>(du + m_ - 1) * w + (dv + m_ - 1));
    }

    // One planar slice, values row-major over (x, y); spacing h.
    std::vector<cd> apply(const std::vector<cd>& f, double h) const;

private:
    int m_;
    std::vector<cd> table_;
};

const CauchyKernel& cauchy_kernel(int m);

// Transform in the z_i plane, fiberwise in the other coordinates, normalised so
// that d/dzbar_i of the result reproduces f. Holomorphic log terms generated by
// the square's corners are removed from the result.
Field cauchy_transform(const Field& f, int i);

// Homotopy operator lowering covariant degree by one, with dbar P + P dbar = Id
// on every section of covariant degree >= 1.
Section homotopy_P(const Section& s);

}  // namespace gcn
