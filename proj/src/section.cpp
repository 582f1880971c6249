#include "gcn/section.hpp"

#include <algorithm>
#include <bit>

namespace gcn {

int popcount(Mask s) { return std::popcount(s); }

std::pair<int, int> bidegree(Mask s, int n) {
    const Mask low = (1u << n) - 1;
    return {std::popcount(s & low), std::popcount(s >> n)};
}

int wedge_sign(Mask a, Mask b) {
    if (a & b) return 0;
    int swaps = 0;
    for (Mask x = b; x; x &= x - 1) {
        const int j = std::countr_zero(x);
        swaps += std::popcount(a >> (j + 1));
    }
    return (swaps & 1) ? -1 : 1;
}

Field Section::get(Mask s) const {
    auto it = c.find(s);
    return it == c.end() ? Field(g) : it->second;
}

Field& Section::at(Mask s) {
    auto it = c.find(s);
    if (it == c.end()) it = c.emplace(s, Field(g)).first;
    return it->second;
}

void Section::add(Mask s, const Field& f, cd scale) {
    Field& dst = at(s);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * f[i];
}

Section& Section::operator+=(const Section& o) {
    for (const auto& [s, f] : o.c) add(s, f);
    return *this;
}

Section& Section::operator-=(const Section& o) {
    for (const auto& [s, f] : o.c) add(s, f, -1.0);
    return *this;
}

Section& Section::operator*=(cd k) {
    for (auto& [s, f] : c) f *= k;
    return *this;
}

Section Section::part(int contra, int cov) const {
    Section out(g);
    for (const auto& [s, f] : c) {
        auto bd = bidegree(s, g.n);
        if (bd.first == contra && bd.second == cov) out.c.emplace(s, f);
    }
    return out;
}

double Section::sup() const {
    double m = 0;
    for (const auto& [s, f] : c) m = std::max(m, f.sup());
    return m;
}

double Section::ck(int k) const { return ck_norm(fields(), k); }

std::vector<const Field*> Section::fields() const {
    std::vector<const Field*> out;
    for (const auto& [s, f] : c) out.push_back(&f);
    return out;
}

Section operator+(Section a, const Section& b) { return a += b; }
Section operator-(Section a, const Section& b) { return a -= b; }
Section operator*(cd s, Section a) { return a *= s; }

int pair_count(int n) { return n * (n - 1) / 2; }

int pair_index(int i, int j, int n) {
    // lexicographic over i < j
    int idx = 0;
    for (int a = 0; a < i; ++a) idx += n - 1 - a;
    return idx + (j - i - 1);
}

Deformation::Deformation(const GridSpec& grid)
    : g(grid),
      eps1(pair_count(grid.n), Field(grid)),
      eps2(grid.n * grid.n, Field(grid)),
      eps3(pair_count(grid.n), Field(grid)) {}

std::vector<const Field*> Deformation::fields() const {
    std::vector<const Field*> out;
    for (const auto& f : eps1) out.push_back(&f);
    for (const auto& f : eps2) out.push_back(&f);
    for (const auto& f : eps3) out.push_back(&f);
    return out;
}

std::vector<Field*> Deformation::fields_mut() {
    std::vector<Field*> out;
    for (auto& f : eps1) out.push_back(&f);
    for (auto& f : eps2) out.push_back(&f);
    for (auto& f : eps3) out.push_back(&f);
    return out;
}

Deformation& Deformation::operator+=(const Deformation& o) {
    auto a = fields_mut();
    auto b = o.fields();
    for (std::size_t i = 0; i < a.size(); ++i) *a[i] += *b[i];
    return *this;
}

Deformation& Deformation::operator-=(const Deformation& o) {
    auto a = fields_mut();
    auto b = o.fields();
    for (std::size_t i = 0; i < a.size(); ++i) *a[i] -= *b[i];
    return *this;
}

Deformation& Deformation::operator*=(cd s) {
    for (Field* f : fields_mut()) *f *= s;
    return *this;
}

double Deformation::sup() const {
    double m = 0;
    for (const Field* f : fields()) m = std::max(m, f->sup());
    return m;
}

double Deformation::ck(int k) const { return ck_norm(fields(), k); }

Deformation operator+(Deformation a, const Deformation& b) { return a += b; }
Deformation operator-(Deformation a, const Deformation& b) { return a -= b; }
Deformation operator*(cd s, Deformation a) { return a *= s; }

Section to_section(const Deformation& e) {
    const int n = e.g.n;
    Section s(e.g);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            s.c.emplace((1u << i) | (1u << j), e.eps1[pair_index(i, j, n)]);
            s.c.emplace((1u << (n + i)) | (1u << (n + j)), e.eps3[pair_index(i, j, n)]);
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.c.emplace((1u << i) | (1u << (n + j)), e.eps2[i * n + j]);
    return s;
}

Deformation from_section(const Section& s) {
    const int n = s.g.n;
    Deformation e(s.g);
    for (const auto& [mask, f] : s.c) {
        if (popcount(mask) != 2) throw DomainError("deformation must be a degree-2 section");
        int bits[2], k = 0;
        for (Mask x = mask; x; x &= x - 1) bits[k++] = std::countr_zero(x);
        const int a = bits[0], b = bits[1];
        if (b < n) {
            e.eps1[pair_index(a, b, n)] += f;
        } else if (a >= n) {
            e.eps3[pair_index(a - n, b - n, n)] += f;
        } else {
            e.eps2[a * n + (b - n)] += f;
        }
    }
    return e;
}

Graded decompose(const Deformation& e) {
    Graded p{Deformation(e.g), Deformation(e.g), Deformation(e.g)};
    p.eps1.eps1 = e.eps1;
    p.eps2.eps2 = e.eps2;
    p.eps3.eps3 = e.eps3;
    return p;
}

Deformation recompose(const Graded& p) {
    Deformation e(p.eps1.g);
    e.eps1 = p.eps1.eps1;
    e.eps2 = p.eps2.eps2;
    e.eps3 = p.eps3.eps3;
    return e;
}

Deformation zeta(const Deformation& e) {
    Deformation z = e;
    for (auto& f : z.eps1) f = Field(e.g);
    return z;
}

GenVectorField::GenVectorField(const GridSpec& grid) : g(grid), X(grid.n, Field(grid)), xi(grid.n, Field(grid)) {}

GenVectorField& GenVectorField::operator+=(const GenVectorField& o) {
    for (int i = 0; i < g.n; ++i) {
        X[i] += o.X[i];
        xi[i] += o.xi[i];
    }
    return *this;
}

GenVectorField& GenVectorField::operator*=(cd s) {
    for (int i = 0; i < g.n; ++i) {
        X[i] *= s;
        xi[i] *= s;
    }
    return *this;
}

std::vector<const Field*> GenVectorField::fields() const {
    std::vector<const Field*> out;
    for (const auto& f : X) out.push_back(&f);
    for (const auto& f : xi) out.push_back(&f);
    return out;
}

std::vector<Field*> GenVectorField::fields_mut() {
    std::vector<Field*> out;
    for (auto& f : X) out.push_back(&f);
    for (auto& f : xi) out.push_back(&f);
    return out;
}

double GenVectorField::sup() const {
    double m = 0;
    for (const Field* f : fields()) m = std::max(m, f->sup());
    return m;
}

double GenVectorField::ck(int k) const { return ck_norm(fields(), k); }

Section to_section(const GenVectorField& v) {
    Section s(v.g);
    for (int i = 0; i < v.g.n; ++i) {
        s.c.emplace(1u << i, v.X[i]);
        s.c.emplace(1u << (v.g.n + i), v.xi[i]);
    }
    return s;
}

GenVectorField vector_from_section(const Section& s) {
    GenVectorField v(s.g);
    const int n = s.g.n;
    for (const auto& [mask, f] : s.c) {
        if (popcount(mask) != 1) throw DomainError("expected a degree-1 section");
        const int a = std::countr_zero(mask);
        if (a < n)
            v.X[a] += f;
        else
            v.xi[a - n] += f;
    }
    return v;
}

Section scalar_section(const Field& f) {
    Section s(f.g);
    s.c.emplace(0u, f);
    return s;
}

}  // namespace gcn
