#pragma once

#include <algorithm>

#include "gcn/oracle.hpp"
#include "gcn/section.hpp"

namespace testutil {

// max over nodes and components of |grid - exact|
inline double section_error(const gcn::Section& s, const gcn::oracle::PolySection& exact) {
    gcn::Section e = exact.sample(s.g);
    return (s - e).sup();
}

inline double interior_sup(const gcn::Field& f, int margin) {
    double best = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto ij = f.g.unravel(i);
        bool inside = true;
        for (int a = 0; a < f.g.dims(); ++a) inside = inside && ij[a] >= margin && ij[a] < f.g.m - margin;
        if (inside) best = std::max(best, std::abs(f[i]));
    }
    return best;
}

}  // namespace testutil
