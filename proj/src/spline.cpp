#include "gcn/spline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace gcn {

const std::vector<double>& spline_slope_matrix(int m) {
    static std::mutex mu;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    // A s = R f with interior rows s_{i-1} + 4 s_i + s_{i+1} = 3 (f_{i+1} - f_{i-1})
    // and not-a-knot rows s_0 - s_2 = 2 (2 f_1 - f_0 - f_2).
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(m, m);
    A(0, 0) = 1;
    A(0, 2) = -1;
    R(0, 0) = -2;
    R(0, 1) = 4;
    R(0, 2) = -2;
    for (int i = 1; i < m - 1; ++i) {
        A(i, i - 1) = 1;
        A(i, i) = 4;
        A(i, i + 1) = 1;
        R(i, i + 1) = 3;
        R(i, i - 1) = -3;
    }
    A(m - 1, m - 1) = 1;
    A(m - 1, m - 3) = -1;
    R(m - 1, m - 1) = 2;
    R(m - 1, m - 2) = -4;
    R(m - 1, m - 3) = 2;
    Eigen::MatrixXd D = A.partialPivLu().solve(R);
    std::vector<double> out(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(i) * m + j] = D(i, j);
    return cache.emplace(m, std::move(out)).first->second;
}

namespace {

// Applies the slope matrix along one axis to an interleaved array of k components.
std::vector<cd> slopes_along(const std::vector<cd>& src, const GridSpec& g, int axis, int k) {
    const int m = g.m;
    const auto& D = spline_slope_matrix(m);
    const std::size_t s = g.stride(axis) * k;
    const std::size_t block = s * m;
    std::vector<cd> out(src.size());
    std::vector<cd> line(m);
    for (std::size_t outer = 0; outer < src.size(); outer += block) {
        for (std::size_t inner = 0; inner < s; ++inner) {
            for (int i = 0; i < m; ++i) line[i] = src[outer + inner + i * s];
            for (int i = 0; i < m; ++i) {
                cd acc = 0.0;
                const double* row = D.data() + static_cast<std::size_t>(i) * m;
                for (int j = 0; j < m; ++j) acc += row[j] * line[j];
                out[outer + inner + i * s] = acc;
            }
        }
    }
    return out;
}

inline void hermite(double u, double w[4], double dw[4]) {
    const double u2 = u * u, u3 = u2 * u;
    w[0] = 2 * u3 - 3 * u2 + 1;
    w[1] = u3 - 2 * u2 + u;
    w[2] = -2 * u3 + 3 * u2;
    w[3] = u3 - u2;
    if (dw) {
        dw[0] = 6 * u2 - 6 * u;
        dw[1] = 3 * u2 - 4 * u + 1;
        dw[2] = -6 * u2 + 6 * u;
        dw[3] = 3 * u2 - 2 * u;
    }
}

}  // namespace

MultiSpline::MultiSpline(const std::vector<const Field*>& comps) {
    if (comps.empty()) throw DomainError("spline needs at least one component");
    g_ = comps[0]->g;
    k_ = static_cast<int>(comps.size());
    const int d = g_.dims();
    const std::size_t N = g_.size();
    data_.assign(1u << d, {});
    std::vector<cd> base(N * k_);
    for (int c = 0; c < k_; ++c) {
        if (!comps[c]->g.same_lattice(g_)) throw DomainError("spline components on different grids");
        for (std::size_t i = 0; i < N; ++i) base[i * k_ + c] = comps[c]->v[i];
    }
    data_[0] = std::move(base);
    for (int mask = 1; mask < (1 << d); ++mask) {
        int low = 0;
        while (!(mask & (1 << low))) ++low;
        const int parent = mask & ~(1 << low);
        data_[mask] = slopes_along(data_[parent], g_, low, k_);
    }
}

bool MultiSpline::contains(const double* x, double slack) const {
    for (int a = 0; a < g_.dims(); ++a)
        if (std::abs(x[a]) > g_.r * (1 + slack)) return false;
    return true;
}

void MultiSpline::locate(const double* x, int* cell, double* u) const {
    for (int a = 0; a < g_.dims(); ++a) {
        if (std::abs(x[a]) > g_.r * (1 + 1e-12)) throw DomainError("interpolation point outside domain");
        double t = (x[a] + g_.r) / g_.h;
        int i = static_cast<int>(std::floor(t));
        i = std::clamp(i, 0, g_.m - 2);
        cell[a] = i;
        u[a] = t - i;
    }
}

void MultiSpline::eval(const double* x, cd* out) const { eval_grad(x, out, nullptr); }

void MultiSpline::eval_grad(const double* x, cd* out, cd* grad, int ngrad) const {
    const int d = g_.dims();
    const int kg = grad ? (ngrad < 0 ? k_ : std::min(ngrad, k_)) : 0;
    int cell[4];
    double u[4];
    locate(x, cell, u);
    double w[4][4], dw[4][4];
    for (int a = 0; a < d; ++a) hermite(u[a], w[a], dw[a]);
    for (int c = 0; c < k_; ++c) {
        out[c] = 0.0;
        if (c < kg)
            for (int a = 0; a < d; ++a) grad[c * d + a] = 0.0;
    }
    // Tables over the 4^d Hermite terms, built one axis at a time.
    constexpr int kMax = 256;
    double W[kMax], G[4][kMax];
    std::size_t off[kMax];
    int msk[kMax];
    int count = 1;
    W[0] = 1.0;
    off[0] = 0;
    msk[0] = 0;
    for (int a = 0; a < d; ++a) G[a][0] = 1.0;
    for (int a = 0; a < d; ++a) {
        const std::size_t st = g_.stride(a);
        for (int t = count - 1; t >= 0; --t) {
            for (int sel = 3; sel >= 0; --sel) {
                const int j = t * 4 + sel;
                const int node_off = sel >> 1, slope = sel & 1;
                off[j] = off[t] + (cell[a] + node_off) * st;
                msk[j] = msk[t] | (slope << a);
                for (int b = 0; b < d; ++b) G[b][j] = G[b][t] * (b == a ? dw[a][sel] / g_.h : w[a][sel]);
                W[j] = W[t] * w[a][sel];
            }
        }
        count *= 4;
    }
    for (int t = 0; t < count; ++t) {
        const cd* src = data_[msk[t]].data() + off[t] * k_;
        const double wt = W[t];
        for (int c = 0; c < k_; ++c) out[c] += wt * src[c];
        for (int c = 0; c < kg; ++c) {
            const cd v = src[c];
            for (int a = 0; a < d; ++a) grad[c * d + a] += G[a][t] * v;
        }
    }
}

cd interpolate(const Field& f, const double* x) {
    MultiSpline s({&f});
    cd out;
    s.eval(x, &out);
    return out;
}

std::vector<Field> restrict_to(const std::vector<const Field*>& comps, double r2) {
    if (comps.empty()) return {};
    const GridSpec& g = comps[0]->g;
    if (!(r2 < g.r) || r2 <= 0) throw DomainError("restriction radius must be smaller than the source radius");
    GridSpec g2 = make_grid(g.n, r2, g.m);
    MultiSpline s(comps);
    std::vector<Field> out(comps.size(), Field(g2));
    std::vector<cd> val(comps.size());
    for (std::size_t i = 0; i < g2.size(); ++i) {
        auto x = g2.point(i);
        s.eval(x.data(), val.data());
        for (std::size_t c = 0; c < comps.size(); ++c) out[c][i] = val[c];
    }
    return out;
}

Field restrict_to(const Field& f, double r2) { return restrict_to(std::vector<const Field*>{&f}, r2)[0]; }

namespace {

template <class T>
T restrict_like(const T& x, double r2) {
    if (r2 == x.g.r) return x;
    auto fs = restrict_to(x.fields(), r2);
    T out(make_grid(x.g.n, r2, x.g.m));
    auto dst = out.fields_mut();
    for (std::size_t c = 0; c < fs.size(); ++c) *dst[c] = std::move(fs[c]);
    return out;
}

}  // namespace

Deformation restrict_to(const Deformation& e, double r2) { return restrict_like(e, r2); }
GenVectorField restrict_to(const GenVectorField& v, double r2) { return restrict_like(v, r2); }

}  // namespace gcn
