#include "gcn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace gcn {

std::size_t GridSpec::size() const {
    std::size_t s = 1;
    for (int a = 0; a < dims(); ++a) s *= static_cast<std::size_t>(m);
    return s;
}

std::size_t GridSpec::stride(int axis) const {
    std::size_t s = 1;
    for (int a = dims() - 1; a > axis; --a) s *= static_cast<std::size_t>(m);
    return s;
}

std::array<int, 4> GridSpec::unravel(std::size_t idx) const {
    std::array<int, 4> ij{0, 0, 0, 0};
    for (int a = dims() - 1; a >= 0; --a) {
        ij[a] = static_cast<int>(idx % m);
        idx /= m;
    }
    return ij;
}

std::size_t GridSpec::ravel(const std::array<int, 4>& ij) const {
    std::size_t idx = 0;
    for (int a = 0; a < dims(); ++a) idx = idx * m + ij[a];
    return idx;
}

std::array<double, 4> GridSpec::point(std::size_t idx) const {
    auto ij = unravel(idx);
    std::array<double, 4> x{0, 0, 0, 0};
    for (int a = 0; a < dims(); ++a) x[a] = coord(ij[a]);
    return x;
}

std::size_t GridSpec::origin() const {
    std::array<int, 4> ij{};
    ij.fill(m / 2);
    return ravel(ij);
}

bool GridSpec::same_lattice(const GridSpec& o) const {
    return n == o.n && m == o.m && std::abs(r - o.r) <= 1e-14 * r;
}

GridSpec make_grid(int n, double r, int m) {
    if (n != 1 && n != 2) throw DomainError("complex dimension must be 1 or 2");
    if (!(r > 0.0) || r > 1.0) throw DomainError("radius must lie in (0, 1]");
    if (m < 9) throw DomainError("grid needs at least 9 points per axis");
    if (m % 2 == 0) throw DomainError("grid size must be odd so the origin is a node");
    GridSpec g;
    g.n = n;
    g.r = r;
    g.m = m;
    g.h = 2.0 * r / (m - 1);
    return g;
}

Field& Field::operator+=(const Field& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    return *this;
}

Field& Field::operator*=(cd s) {
    for (auto& x : v) x *= s;
    return *this;
}

double Field::sup() const {
    double s = 0.0;
    for (const auto& x : v) s = std::max(s, std::abs(x));
    return s;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cd s, Field a) { return a *= s; }
Field operator-(Field a) { return a *= -1.0; }

Field operator*(const Field& a, const Field& b) {
    Field c(a.g);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] * b[i];
    return c;
}

Field conj(Field a) {
    for (auto& x : a.v) x = std::conj(x);
    return a;
}

Field real_part(Field a) {
    for (auto& x : a.v) x = x.real();
    return a;
}

Field imag_part(Field a) {
    for (auto& x : a.v) x = x.imag();
    return a;
}

Field sample(const GridSpec& g, const std::function<cd(const double*)>& f) {
    Field out(g);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto x = g.point(i);
        out[i] = f(x.data());
    }
    return out;
}

Field coord_z(const GridSpec& g, int i) {
    return sample(g, [i](const double* x) { return cd(x[2 * i], x[2 * i + 1]); });
}

Field coord_zbar(const GridSpec& g, int i) {
    return sample(g, [i](const double* x) { return cd(x[2 * i], -x[2 * i + 1]); });
}

namespace {

constexpr double kCentral[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
// One-sided rows share the leading error term -h^4 f^(5) / 30 of the centered
// stencil, so composed derivatives stay fourth order up to the boundary.
constexpr double kEdge0[6] = {-135.0 / 60, 290.0 / 60, -280.0 / 60, 180.0 / 60, -65.0 / 60, 10.0 / 60};
constexpr double kEdge1[6] = {-10.0 / 60, -75.0 / 60, 140.0 / 60, -80.0 / 60, 30.0 / 60, -5.0 / 60};

}  // namespace

Field diff(const Field& f, int axis) {
    const GridSpec& g = f.g;
    const int m = g.m;
    const std::size_t s = g.stride(axis);
    const std::size_t block = s * m;
    const double ih = 1.0 / g.h;
    Field d(g);
    for (std::size_t outer = 0; outer < g.size(); outer += block) {
        for (std::size_t inner = 0; inner < s; ++inner) {
            const cd* src = f.v.data() + outer + inner;
            cd* dst = d.v.data() + outer + inner;
            auto at = [&](int i) { return src[static_cast<std::size_t>(i) * s]; };
            for (int i = 0; i < m; ++i) {
                cd acc = 0.0;
                if (i >= 2 && i <= m - 3) {
                    for (int k = 0; k < 5; ++k) acc += kCentral[k] * at(i - 2 + k);
                } else if (i == 0) {
                    for (int k = 0; k < 6; ++k) acc += kEdge0[k] * at(k);
                } else if (i == 1) {
                    for (int k = 0; k < 6; ++k) acc += kEdge1[k] * at(k);
                } else if (i == m - 1) {
                    for (int k = 0; k < 6; ++k) acc -= kEdge0[k] * at(m - 1 - k);
                } else {
                    for (int k = 0; k < 6; ++k) acc -= kEdge1[k] * at(m - 1 - k);
                }
                dst[static_cast<std::size_t>(i) * s] = acc * ih;
            }
        }
    }
    return d;
}

Field dz(const Field& f, int i) {
    Field fx = diff(f, 2 * i);
    Field fy = diff(f, 2 * i + 1);
    for (std::size_t k = 0; k < fx.size(); ++k) fx[k] = 0.5 * (fx[k] - cd(0, 1) * fy[k]);
    return fx;
}

Field dzbar(const Field& f, int i) {
    Field fx = diff(f, 2 * i);
    Field fy = diff(f, 2 * i + 1);
    for (std::size_t k = 0; k < fx.size(); ++k) fx[k] = 0.5 * (fx[k] + cd(0, 1) * fy[k]);
    return fx;
}

namespace {

// Walks multi-indices in nondecreasing axis order so every derivative is one
// difference away from its parent.
void walk_derivatives(const Field& f, int order, int k, int first_axis, double& best) {
    best = std::max(best, f.sup());
    if (order == k) return;
    for (int a = first_axis; a < f.g.dims(); ++a) {
        Field d = diff(f, a);
        walk_derivatives(d, order + 1, k, a, best);
    }
}

}  // namespace

double ck_norm(const Field& f, int k, int kmax) {
    if (k < 0 || k > kmax) throw DomainError("norm degree out of range");
    double best = 0.0;
    walk_derivatives(f, 0, k, 0, best);
    return best;
}

double ck_norm(const std::vector<const Field*>& comps, int k, int kmax) {
    double best = 0.0;
    for (const Field* c : comps) best = std::max(best, ck_norm(*c, k, kmax));
    return best;
}

void save_snapshot(std::ostream& os, const std::vector<const Field*>& comps) {
    if (comps.empty()) throw DomainError("snapshot needs at least one component");
    const GridSpec& g = comps[0]->g;
    for (const Field* c : comps)
        if (!c->g.same_lattice(g)) throw DomainError("snapshot components live on different grids");
    os << "gcnorm-snapshot 1\n" << std::setprecision(17) << g.n << ' ' << g.r << ' ' << g.m << ' ' << comps.size()
       << '\n';
    for (const Field* c : comps)
        for (const cd& z : c->v) os << z.real() << ' ' << z.imag() << '\n';
}

std::vector<Field> load_snapshot(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "gcnorm-snapshot 1") throw DomainError("not a version 1 snapshot");
    int n = 0, m = 0;
    double r = 0;
    long count = 0;
    if (!std::getline(is, line)) throw DomainError("snapshot header truncated");
    std::istringstream hs(line);
    if (!(hs >> n >> r >> m >> count) || n < 1 || n > 2 || m < 5 || !(r > 0) || count < 1)
        throw DomainError("malformed snapshot header");
    GridSpec g = make_grid(n, r, m);
    std::vector<Field> out(static_cast<std::size_t>(count), Field(g));
    for (Field& f : out)
        for (cd& z : f.v) {
            double re = 0, im = 0;
            if (!(is >> re >> im)) throw DomainError("snapshot data truncated");
            z = cd(re, im);
        }
    std::string rest;
    if (is >> rest) throw DomainError("trailing data in snapshot");
    return out;
}

}  // namespace gcn
