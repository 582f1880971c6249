#include "gcn/cauchy.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "gcn/spline.hpp"

namespace gcn {

namespace {

template <int N>
struct GaussRule {
    std::vector<double> x, w;  // on [0, 1]
    GaussRule() {
        using G = boost::math::quadrature::gauss<double, N>;
        const auto& a = G::abscissa();
        const auto& wt = G::weights();
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k] == 0.0) {
                x.push_back(0.5);
                w.push_back(0.5 * wt[k]);
                continue;
            }
            x.push_back(0.5 * (1 - a[k]));
            w.push_back(0.5 * wt[k]);
            x.push_back(0.5 * (1 + a[k]));
            w.push_back(0.5 * wt[k]);
        }
    }
};

inline void hermite4(double u, double h[4]) {
    const double u2 = u * u, u3 = u2 * u;
    h[0] = 2 * u3 - 3 * u2 + 1;  // value at 0
    h[1] = u3 - 2 * u2 + u;      // slope at 0
    h[2] = -2 * u3 + 3 * u2;     // value at 1
    h[3] = u3 - u2;              // slope at 1
}

inline void accumulate(double u, double v, cd kernel, cd* out) {
    double hu[4], hv[4];
    hermite4(u, hu);
    hermite4(v, hv);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) out[a * 4 + b] += hu[a] * hv[b] * kernel;
}

template <int N>
void regular_cell(int du, int dv, cd* out) {
    static const GaussRule<N> q;
    for (std::size_t i = 0; i < q.x.size(); ++i)
        for (std::size_t j = 0; j < q.x.size(); ++j) {
            const double u = q.x[i], v = q.x[j];
            const cd k = -1.0 / cd(du + u, dv + v);
            accumulate(u, v, q.w[i] * q.w[j] * k, out);
        }
}

// Cell having the evaluation node at local corner (pu, pv): in polar
// coordinates around it the kernel times the area element is bounded.
void singular_cell(int pu, int pv, cd* out) {
    static const GaussRule<24> qt;
    static const GaussRule<8> qr;
    const double pi = std::numbers::pi;
    double t0;
    if (pu == 0 && pv == 0)
        t0 = 0;
    else if (pu == 1 && pv == 0)
        t0 = pi / 2;
    else if (pu == 1 && pv == 1)
        t0 = pi;
    else
        t0 = 1.5 * pi;
    for (int half = 0; half < 2; ++half) {
        const double a = t0 + half * pi / 4;
        for (std::size_t i = 0; i < qt.x.size(); ++i) {
            const double th = a + qt.x[i] * pi / 4;
            const double c = std::cos(th), s = std::sin(th);
            const double R = 1.0 / std::max(std::abs(c), std::abs(s));
            const cd phase = -std::exp(cd(0, -th));
            for (std::size_t j = 0; j < qr.x.size(); ++j) {
                const double rho = qr.x[j] * R;
                const double u = pu + rho * c, v = pv + rho * s;
                accumulate(u, v, qt.w[i] * (pi / 4) * qr.w[j] * R * phase, out);
            }
        }
    }
}

}  // namespace

CauchyKernel::CauchyKernel(int m) : m_(m) {
    const int w = 2 * m - 1;
    table_.assign(static_cast<std::size_t>(w) * w * 16, 0.0);
    for (int du = -(m - 1); du <= m - 1; ++du)
        for (int dv = -(m - 1); dv <= m - 1; ++dv) {
            cd* out = table_.data() + 16 * (static_cast<std::size_t>(du + m - 1) * w + (dv + m - 1));
            if ((du == 0 || du == -1) && (dv == 0 || dv == -1))
                singular_cell(-du, -dv, out);
            else if (std::max(std::abs(du), std::abs(dv)) <= 3)
                regular_cell<20>(du, dv, out);
            else
                regular_cell<8>(du, dv, out);
        }
}

std::vector<cd> CauchyKernel::apply(const std::vector<cd>& f, double h) const {
    const int m = m_;
    const auto& D = spline_slope_matrix(m);
    auto at = [m](int i, int j) { return static_cast<std::size_t>(i) * m + j; };
    // Hermite data: value, u-slope, v-slope, mixed slope (unit spacing)
    std::vector<cd> fu(f.size()), fv(f.size()), fuv(f.size());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            cd su = 0, sv = 0;
            for (int k = 0; k < m; ++k) {
                su += D[at(i, k)] * f[at(k, j)];
                sv += D[at(j, k)] * f[at(i, k)];
            }
            fu[at(i, j)] = su;
            fv[at(i, j)] = sv;
        }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            cd s = 0;
            for (int k = 0; k < m; ++k) s += D[at(j, k)] * fu[at(i, k)];
            fuv[at(i, j)] = s;
        }
    const int cells = m - 1;
    std::vector<cd> coef(static_cast<std::size_t>(cells) * cells * 16);
    const std::vector<cd>* src[2][2] = {{&f, &fv}, {&fu, &fuv}};
    for (int ci = 0; ci < cells; ++ci)
        for (int cj = 0; cj < cells; ++cj) {
            cd* c = coef.data() + 16 * (static_cast<std::size_t>(ci) * cells + cj);
            for (int ou = 0; ou < 2; ++ou)
                for (int su = 0; su < 2; ++su)
                    for (int ov = 0; ov < 2; ++ov)
                        for (int sv = 0; sv < 2; ++sv)
                            c[(ou * 2 + su) * 4 + (ov * 2 + sv)] = (*src[su][sv])[at(ci + ou, cj + ov)];
        }
    std::vector<cd> out(f.size());
    const double scale = h / std::numbers::pi;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            cd acc = 0;
            for (int ci = 0; ci < cells; ++ci)
                for (int cj = 0; cj < cells; ++cj) {
                    const cd* w = weights(ci - i, cj - j);
                    const cd* c = coef.data() + 16 * (static_cast<std::size_t>(ci) * cells + cj);
                    for (int k = 0; k < 16; ++k) acc += w[k] * c[k];
                }
            out[at(i, j)] = scale * acc;
        }
    return out;
}

const CauchyKernel& cauchy_kernel(int m) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<CauchyKernel>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, std::make_unique<CauchyKernel>(m)).first;
    return *it->second;
}

namespace {

// Holomorphic singular parts of the transform at the four corners of the
// square, up to second order in the local Taylor expansion of f.
std::vector<cd> corner_terms(const std::vector<cd>& f, double r, int m) {
    GridSpec g = make_grid(1, r, m);
    Field F(g);
    F.v = f;
    Field fx = diff(F, 0), fy = diff(F, 1);
    Field fxx = diff(fx, 0), fyy = diff(fy, 1), fxy = diff(fx, 1);
    const cd I(0, 1);
    const double pi = std::numbers::pi;
    std::vector<cd> out(f.size(), 0.0);
    const int ci[4][2] = {{0, 0}, {m - 1, 0}, {m - 1, m - 1}, {0, m - 1}};
    const double theta[4] = {0, pi / 2, pi, 1.5 * pi};
    for (int k = 0; k < 4; ++k) {
        const std::size_t idx = static_cast<std::size_t>(ci[k][0]) * m + ci[k][1];
        const cd zk(g.coord(ci[k][0]), g.coord(ci[k][1]));
        const cd dir = -zk / std::abs(zk);
        const double th_out = theta[k], th_in = theta[(k + 3) % 4];
        // Taylor coefficients f_pq of (z - zk)^p (zbar - zbar_k)^q
        cd c[3][3] = {};
        c[0][0] = F[idx];
        c[1][0] = 0.5 * (fx[idx] - I * fy[idx]);
        c[0][1] = 0.5 * (fx[idx] + I * fy[idx]);
        c[2][0] = 0.125 * (fxx[idx] - 2.0 * I * fxy[idx] - fyy[idx]);
        c[1][1] = 0.25 * (fxx[idx] + fyy[idx]);
        c[0][2] = 0.125 * (fxx[idx] + 2.0 * I * fxy[idx] - fyy[idx]);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const std::size_t t = static_cast<std::size_t>(i) * m + j;
                if (t == idx) continue;
                const cd w = cd(g.coord(i), g.coord(j)) - zk;
                const cd L = std::log(w / dir);
                cd acc = 0;
                for (int p = 0; p <= 2; ++p)
                    for (int q = 0; q <= 2 - p; q += 2) {
                        const int deg = p + q + 1;
                        const cd jump = std::exp(-2.0 * I * double(q + 1) * th_in) - std::exp(-2.0 * I * double(q + 1) * th_out);
                        acc += c[p][q] * std::pow(w, deg) / double(q + 1) * jump;
                    }
                out[t] += -acc * L / (2.0 * pi * I);
            }
    }
    return out;
}

}  // namespace

Field cauchy_transform(const Field& f, int i) {
    const GridSpec& g = f.g;
    if (i < 0 || i >= g.n) throw DomainError("transform axis out of range");
    const int m = g.m;
    const CauchyKernel& K = cauchy_kernel(m);
    const std::size_t sx = g.stride(2 * i), sy = g.stride(2 * i + 1);
    Field out(g);
    std::vector<cd> slice(static_cast<std::size_t>(m) * m);
    // enumerate fiber base points: all nodes whose z_i coordinates are zero
    for (std::size_t base = 0; base < g.size(); ++base) {
        auto ij = g.unravel(base);
        if (ij[2 * i] != 0 || ij[2 * i + 1] != 0) continue;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) slice[static_cast<std::size_t>(a) * m + b] = f[base + a * sx + b * sy];
        std::vector<cd> t = K.apply(slice, g.h);
        std::vector<cd> corr = corner_terms(slice, g.r, m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                const std::size_t k = static_cast<std::size_t>(a) * m + b;
                out[base + a * sx + b * sy] = t[k] - corr[k];
            }
    }
    return out;
}

Section homotopy_P(const Section& s) {
    const int n = s.g.n;
    const Mask vec_mask = (1u << n) - 1;
    // group components by contravariant part
    std::map<Mask, std::map<Mask, const Field*>> groups;
    for (const auto& [mask, f] : s.c) {
        const Mask I = mask & vec_mask, J = mask >> n;
        if (J == 0) continue;
        groups[I][J] = &f;
    }
    Section out(s.g);
    for (const auto& [I, forms] : groups) {
        const double sign = (popcount(I) & 1) ? -1.0 : 1.0;
        if (n == 1) {
            out.add(I, cauchy_transform(*forms.at(1u), 0), sign);
            continue;
        }
        auto get = [&](Mask J) { return forms.count(J) ? *forms.at(J) : Field(s.g); };
        if (forms.count(1u) || forms.count(2u)) {
            Field t1 = cauchy_transform(get(1u), 0);
            Field rest = get(2u) - dzbar(t1, 1);
            out.add(I, t1 + cauchy_transform(rest, 1), sign);
        }
        if (forms.count(3u)) {
            // P(g dzbar_1 ^ dzbar_2) = -(T_2 g) dzbar_1
            out.add(I | (1u << n), cauchy_transform(*forms.at(3u), 1), -sign);
        }
    }
    return out;
}

}  // namespace gcn
