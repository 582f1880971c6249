#include "gcn/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <sstream>

namespace gcn::oracle {

cd QC::to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }

QC operator+(const QC& a, const QC& b) { return {a.re + b.re, a.im + b.im}; }
QC operator-(const QC& a, const QC& b) { return {a.re - b.re, a.im - b.im}; }
QC operator-(const QC& a) { return {-a.re, -a.im}; }
QC operator*(const QC& a, const QC& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
bool operator==(const QC& a, const QC& b) { return a.re == b.re && a.im == b.im; }

void Poly::add_term(const Monomial& e, const QC& c) {
    if (c.is_zero()) return;
    auto it = t_.find(e);
    if (it == t_.end()) {
        t_.emplace(e, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) t_.erase(it);
}

Poly Poly::constant(const QC& c) { return monomial({0, 0, 0, 0}, c); }

Poly Poly::z(int i) {
    Monomial e{0, 0, 0, 0};
    e[i] = 1;
    return monomial(e, QC(1));
}

Poly Poly::zbar(int i) {
    Monomial e{0, 0, 0, 0};
    e[2 + i] = 1;
    return monomial(e, QC(1));
}

Poly Poly::monomial(const Monomial& e, const QC& c) {
    Poly p;
    p.add_term(e, c);
    return p;
}

int Poly::degree() const {
    int d = 0;
    for (const auto& [e, c] : t_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
    return d;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [e, c] : o.t_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [e, c] : o.t_) add_term(e, -c);
    return *this;
}

Poly Poly::operator-() const {
    Poly p;
    for (const auto& [e, c] : t_) p.add_term(e, -c);
    return p;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly p;
    for (const auto& [ea, ca] : a.t_)
        for (const auto& [eb, cb] : b.t_) {
            Monomial e;
            for (int k = 0; k < 4; ++k) e[k] = ea[k] + eb[k];
            p.add_term(e, ca * cb);
        }
    return p;
}

Poly operator*(const QC& s, const Poly& a) {
    Poly p;
    for (const auto& [e, c] : a.t_) p.add_term(e, s * c);
    return p;
}

Poly Poly::d_z(int i) const {
    Poly p;
    for (const auto& [e, c] : t_) {
        if (e[i] == 0) continue;
        Monomial f = e;
        f[i] -= 1;
        p.add_term(f, QC(e[i]) * c);
    }
    return p;
}

Poly Poly::d_zbar(int i) const {
    Poly p;
    for (const auto& [e, c] : t_) {
        if (e[2 + i] == 0) continue;
        Monomial f = e;
        f[2 + i] -= 1;
        p.add_term(f, QC(e[2 + i]) * c);
    }
    return p;
}

Poly Poly::d_real(int axis) const {
    const int i = axis / 2;
    if (axis % 2 == 0) return d_z(i) + d_zbar(i);
    return QC(0, 1) * (d_z(i) - d_zbar(i));
}

cd Poly::eval(const double* x) const {
    cd z[2] = {cd(x[0], x[1]), cd(x[2], x[3])};
    cd out = 0.0;
    for (const auto& [e, c] : t_) {
        cd term = c.to_complex();
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < e[i]; ++k) term *= z[i];
            for (int k = 0; k < e[2 + i]; ++k) term *= std::conj(z[i]);
        }
        out += term;
    }
    return out;
}

Field Poly::sample(const GridSpec& g) const {
    // coefficients converted once; powers tabulated per node
    std::vector<std::pair<Monomial, cd>> terms;
    terms.reserve(t_.size());
    int top[4] = {0, 0, 0, 0};
    for (const auto& [e, c] : t_) {
        terms.emplace_back(e, c.to_complex());
        for (int k = 0; k < 4; ++k) top[k] = std::max(top[k], e[k]);
    }
    std::array<std::vector<cd>, 4> pw;
    for (int k = 0; k < 4; ++k) pw[k].resize(top[k] + 1);
    Field out(g);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto x = g.point(i);
        const cd base[4] = {cd(x[0], x[1]), cd(x[2], x[3]), cd(x[0], -x[1]), cd(x[2], -x[3])};
        for (int k = 0; k < 4; ++k) {
            pw[k][0] = 1.0;
            for (int j = 1; j <= top[k]; ++j) pw[k][j] = pw[k][j - 1] * base[k];
        }
        cd acc = 0.0;
        for (const auto& [e, c] : terms) acc += c * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] * pw[3][e[3]];
        out[i] = acc;
    }
    return out;
}

std::string Poly::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : t_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.re << (c.im >= 0 ? "+" : "") << c.im << "i)";
        const char* names[4] = {"z1", "z2", "zb1", "zb2"};
        for (int k = 0; k < 4; ++k)
            if (e[k]) os << "*" << names[k] << "^" << e[k];
    }
    if (first) os << "0";
    return os.str();
}

void PolySection::add(Mask s, const Poly& p) {
    if (p.is_zero()) return;
    auto it = c.find(s);
    if (it == c.end()) {
        c.emplace(s, p);
        return;
    }
    it->second += p;
    if (it->second.is_zero()) c.erase(it);
}

bool PolySection::is_zero() const { return c.empty(); }

PolySection PolySection::part(int contra, int cov) const {
    PolySection out(n);
    for (const auto& [s, p] : c) {
        auto bd = bidegree(s, n);
        if (bd.first == contra && bd.second == cov) out.c.emplace(s, p);
    }
    return out;
}

Section PolySection::sample(const GridSpec& g) const {
    Section out(g);
    for (const auto& [s, p] : c) out.c.emplace(s, p.sample(g));
    return out;
}

PolySection operator+(PolySection a, const PolySection& b) {
    for (const auto& [s, p] : b.c) a.add(s, p);
    return a;
}

PolySection operator-(PolySection a, const PolySection& b) {
    for (const auto& [s, p] : b.c) a.add(s, -p);
    return a;
}

PolySection operator*(const QC& k, PolySection a) {
    PolySection out(a.n);
    for (const auto& [s, p] : a.c) out.add(s, k * p);
    return out;
}

bool operator==(const PolySection& a, const PolySection& b) { return a.n == b.n && a.c == b.c; }

PolySection wedge(const PolySection& a, const PolySection& b) {
    PolySection out(a.n);
    for (const auto& [sa, pa] : a.c)
        for (const auto& [sb, pb] : b.c) {
            const int sign = wedge_sign(sa, sb);
            if (!sign) continue;
            out.add(sa | sb, QC(sign) * (pa * pb));
        }
    return out;
}

namespace {

// Degree-one section viewed as a pair (vector part, dzbar part).
struct Gen {
    std::vector<Poly> X, xi;
};

Gen as_gen(const PolySection& s) {
    Gen g{std::vector<Poly>(s.n), std::vector<Poly>(s.n)};
    for (const auto& [mask, p] : s.c) {
        const int a = std::countr_zero(mask);
        if (a < s.n)
            g.X[a] += p;
        else
            g.xi[a - s.n] += p;
    }
    return g;
}

Poly apply_vector(const std::vector<Poly>& X, const Poly& f) {
    Poly out;
    for (std::size_t a = 0; a < X.size(); ++a) out += X[a] * f.d_z(static_cast<int>(a));
    return out;
}

// Restricted Courant bracket: [X + xi, Y + eta] = [X, Y] + X(eta) - Y(xi).
PolySection base_bracket(const PolySection& u, const PolySection& v) {
    const int n = u.n;
    Gen a = as_gen(u), b = as_gen(v);
    PolySection out(n);
    for (int c = 0; c < n; ++c) {
        out.add(1u << c, apply_vector(a.X, b.X[c]) - apply_vector(b.X, a.X[c]));
        out.add(1u << (n + c), apply_vector(a.X, b.xi[c]) - apply_vector(b.X, a.xi[c]));
    }
    return out;
}

PolySection single(int n, Mask s, const Poly& p) {
    PolySection out(n);
    out.add(s, p);
    return out;
}

// Factors of f g_{s_1} ^ ... ^ g_{s_k}: first factor carries f.
std::vector<PolySection> factors(int n, Mask s, const Poly& f) {
    std::vector<PolySection> out;
    bool first = true;
    for (Mask x = s; x; x &= x - 1) {
        const Mask gen = 1u << std::countr_zero(x);
        out.push_back(single(n, gen, first ? f : Poly::constant(QC(1))));
        first = false;
    }
    return out;
}

PolySection wedge_all(int n, const std::vector<PolySection>& xs, int skip) {
    PolySection acc = single(n, 0, Poly::constant(QC(1)));
    for (int i = 0; i < static_cast<int>(xs.size()); ++i)
        if (i != skip) acc = wedge(acc, xs[i]);
    return acc;
}

// [Y_1 ^ ... ^ Y_q, f] = sum_j (-1)^{q-j} Y_j(f) Y_1 ^ .. ^ hat(Y_j) ^ .. ^ Y_q
PolySection bracket_with_function(int n, const std::vector<PolySection>& ys, const Poly& f) {
    const int q = static_cast<int>(ys.size());
    PolySection out(n);
    for (int j = 0; j < q; ++j) {
        Gen y = as_gen(ys[j]);
        Poly yf = apply_vector(y.X, f);
        if (yf.is_zero()) continue;
        const int sign = ((q - 1 - j) & 1) ? -1 : 1;
        out = out + QC(sign) * wedge(single(n, 0, yf), wedge_all(n, ys, j));
    }
    return out;
}

PolySection bracket_terms(int n, Mask S, const Poly& f, Mask T, const Poly& g) {
    const int p = popcount(S), q = popcount(T);
    if (p == 0 && q == 0) return PolySection(n);
    if (p == 0) {
        // [f, Q] = (-1)^q [Q, f]
        PolySection r = bracket_with_function(n, factors(n, T, g), f);
        return (q & 1) ? QC(-1) * r : r;
    }
    if (q == 0) return bracket_with_function(n, factors(n, S, f), g);
    auto xs = factors(n, S, f);
    auto ys = factors(n, T, g);
    PolySection out(n);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j) {
            PolySection b = base_bracket(xs[i], ys[j]);
            if (b.is_zero()) continue;
            const int sign = ((i + j) & 1) ? -1 : 1;
            out = out + QC(sign) * wedge(wedge(b, wedge_all(n, xs, i)), wedge_all(n, ys, j));
        }
    return out;
}

}  // namespace

PolySection dbar(const PolySection& s) {
    PolySection out(s.n);
    for (const auto& [mask, p] : s.c)
        for (int j = 0; j < s.n; ++j)
            out = out + wedge(single(s.n, 1u << (s.n + j), p.d_zbar(j)), single(s.n, mask, Poly::constant(QC(1))));
    return out;
}

PolySection bracket(const PolySection& a, const PolySection& b) {
    PolySection out(a.n);
    for (const auto& [S, f] : a.c)
        for (const auto& [T, g] : b.c) out = out + bracket_terms(a.n, S, f, T, g);
    return out;
}

PolySection mc(const PolySection& eps) {
    PolySection half = QC(Rational(1, 2)) * bracket(eps, eps);
    return dbar(eps) + half;
}

}  // namespace gcn::oracle
