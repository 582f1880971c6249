#include "gcn/calculus.hpp"

#include <bit>
#include <map>
#include <mutex>

namespace gcn {

Section dbar(const Section& s) {
    const int n = s.g.n;
    Section out(s.g);
    for (const auto& [mask, f] : s.c) {
        if (popcount(mask) >= 3) throw DomainError("dbar degree out of range");
        for (int j = 0; j < n; ++j) {
            const Mask gen = 1u << (n + j);
            const int sign = wedge_sign(gen, mask);
            if (!sign) continue;
            out.add(gen | mask, dzbar(f, j), static_cast<double>(sign));
        }
    }
    return out;
}

namespace {

struct BracketTerm {
    Mask left, right, result;
    int axis;
    double sign;
    bool diff_right;  // true: coef(left) * d_axis coef(right); false: coef(right) * d_axis coef(left)
};

// Removes generator a after moving it to the right end of g_S.
int right_derivative_sign(Mask s, int a) { return (std::popcount(s >> (a + 1)) & 1) ? -1 : 1; }

// [P, Q] = sum_a (P d<_a) ^ d_{z_a} Q - (-1)^{(|P|-1)(|Q|-1)} (Q d<_a) ^ d_{z_a} P
// where d<_a is the right derivative in the odd generator d/dz_a; only those
// generators carry an anchor, the dzbar generators anchor to zero.
const std::vector<BracketTerm>& bracket_table(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<BracketTerm>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<BracketTerm> terms;
    const Mask all = 1u << (2 * n);
    for (Mask S = 0; S < all; ++S)
        for (Mask T = 0; T < all; ++T) {
            const int p = popcount(S), q = popcount(T);
            if (p + q - 1 > 3) continue;
            for (int a = 0; a < n; ++a) {
                const Mask ga = 1u << a;
                if (S & ga) {
                    const Mask rest = S & ~ga;
                    const int w = wedge_sign(rest, T);
                    if (w) terms.push_back({S, T, rest | T, a, double(right_derivative_sign(S, a) * w), true});
                }
                if (T & ga) {
                    const Mask rest = T & ~ga;
                    const int w = wedge_sign(rest, S);
                    const int koszul = (((p - 1) * (q - 1)) & 1) ? -1 : 1;
                    if (w) terms.push_back({S, T, rest | S, a, double(-koszul * right_derivative_sign(T, a) * w), false});
                }
            }
        }
    return cache.emplace(n, std::move(terms)).first->second;
}

}  // namespace

Section bracket(const Section& A, const Section& B) {
    if (!A.g.same_lattice(B.g)) throw DomainError("bracket operands on different grids");
    const int n = A.g.n;
    const auto& table = bracket_table(n);
    std::map<std::pair<Mask, int>, Field> dA, dB;
    auto deriv = [n](std::map<std::pair<Mask, int>, Field>& cache, const Section& s, Mask mask, int a) -> const Field& {
        auto key = std::make_pair(mask, a);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, dz(s.c.at(mask), a)).first;
        (void)n;
        return it->second;
    };
    Section out(A.g);
    for (const auto& t : table) {
        auto ia = A.c.find(t.left);
        auto ib = B.c.find(t.right);
        if (ia == A.c.end() || ib == B.c.end()) continue;
        Field& dst = out.at(t.result);
        if (t.diff_right) {
            const Field& d = deriv(dB, B, t.right, t.axis);
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += t.sign * ia->second[i] * d[i];
        } else {
            const Field& d = deriv(dA, A, t.left, t.axis);
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += t.sign * ib->second[i] * d[i];
        }
    }
    return out;
}

RealPair courant_bracket(const RealPair& u, const RealPair& v) {
    if (!u.g.same_lattice(v.g)) throw DomainError("courant bracket operands on different grids");
    const int d = u.g.dims();
    RealPair out(u.g);
    std::vector<std::vector<Field>> dX(d), dY(d), dxi(d), deta(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            dX[a].push_back(diff(u.X[b], a));
            dY[a].push_back(diff(v.X[b], a));
            dxi[a].push_back(diff(u.xi[b], a));
            deta[a].push_back(diff(v.xi[b], a));
        }
    const std::size_t N = u.g.size();
    for (int b = 0; b < d; ++b)
        for (int a = 0; a < d; ++a)
            for (std::size_t i = 0; i < N; ++i) {
                out.X[b][i] += u.X[a][i] * dY[a][b][i] - v.X[a][i] * dX[a][b][i];
                // Lie derivative of eta along X minus contraction of Y into d xi
                out.xi[b][i] += u.X[a][i] * deta[a][b][i] + v.xi[a][i] * dX[b][a][i];
                out.xi[b][i] -= v.X[a][i] * (dxi[a][b][i] - dxi[b][a][i]);
            }
    return out;
}

Section deformed_differential(const Deformation& e, const Section& s) { return dbar(s) + bracket(to_section(e), s); }

MCResidual mc_residual(const Deformation& e) {
    Section es = to_section(e);
    Section total = dbar(es) + 0.5 * bracket(es, es);
    MCResidual r;
    r.c30 = total.part(3, 0);
    r.c21 = total.part(2, 1);
    r.c12 = total.part(1, 2);
    r.c03 = total.part(0, 3);
    r.norms[0] = r.c30.sup();
    r.norms[1] = r.c21.sup();
    r.norms[2] = r.c12.sup();
    r.norms[3] = r.c03.sup();
    return r;
}

NormalFormReport is_normal_form(const Deformation& e, double tol) {
    NormalFormReport rep;
    rep.zeta_norm = zeta(e).sup();
    Deformation b = decompose(e).eps1;
    Section bs = to_section(b);
    rep.dbar_eps1 = dbar(bs).sup();
    rep.self_bracket = bracket(bs, bs).sup();
    rep.ok = rep.zeta_norm <= tol && rep.dbar_eps1 <= tol && rep.self_bracket <= tol;
    return rep;
}

}  // namespace gcn
