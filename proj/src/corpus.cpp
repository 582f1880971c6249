#include "gcn/corpus.hpp"

#include <random>

namespace gcn {

using oracle::Poly;
using oracle::PolySection;
using oracle::QC;
using oracle::Rational;

namespace {

long draw(std::mt19937_64& rng, long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

QC draw_coefficient(std::mt19937_64& rng) {
    const long den = draw(rng, 1, 4);
    return QC(Rational(draw(rng, -4, 4), den), Rational(draw(rng, -4, 4), den));
}

}  // namespace

Poly random_poly(std::uint64_t seed, int n, int degree, int terms) {
    std::mt19937_64 rng(seed);
    Poly p;
    for (int t = 0; t < terms; ++t) {
        oracle::Monomial e{0, 0, 0, 0};
        int left = static_cast<int>(draw(rng, 0, degree));
        for (int k = 0; k < 4 && left > 0; ++k) {
            const int var = static_cast<int>(draw(rng, 0, 3));
            if (n == 1 && (var == 1 || var == 3)) continue;
            const int take = static_cast<int>(draw(rng, 0, left));
            e[var] += take;
            left -= take;
        }
        p += Poly::monomial(e, draw_coefficient(rng));
    }
    return p;
}

PolySection random_section(std::uint64_t seed, int n, int contra, int cov, int degree, int terms) {
    PolySection s(n);
    std::uint64_t k = 0;
    for (Mask mask = 0; mask < (1u << (2 * n)); ++mask) {
        auto bd = bidegree(mask, n);
        if (bd.first != contra || bd.second != cov) continue;
        s.add(mask, random_poly(seed * 1000003ULL + (++k), n, degree, terms));
    }
    return s;
}

std::vector<PolySection> section_corpus(int n, int contra, int cov, int degree, int count) {
    std::vector<PolySection> out;
    for (int i = 0; i < count; ++i) {
        const std::uint64_t seed = 7919ULL * (100 * n + 10 * contra + cov) + i;
        out.push_back(random_section(seed, n, contra, cov, degree));
    }
    return out;
}

}  // namespace gcn
