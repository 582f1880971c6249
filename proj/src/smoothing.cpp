#include "gcn/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace gcn {

namespace {

std::mutex proj_mu;

}  // namespace

SpectralBasis::SpectralBasis(int m) : m_(m), proj_(m) {
    // Node-orthonormal polynomials by the Stieltjes recurrence with full
    // reorthogonalisation; column k spans the same space as T_0..T_k.
    Q_.assign(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = -1.0 + 2.0 * i / (m - 1);
    auto col = [&](int k, int i) -> double& { return Q_[static_cast<std::size_t>(i) * m + k]; };
    for (int i = 0; i < m; ++i) col(0, i) = 1.0 / std::sqrt(double(m));
    for (int k = 1; k < m; ++k) {
        for (int i = 0; i < m; ++i) col(k, i) = x[i] * col(k - 1, i);
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < k; ++j) {
                double dot = 0;
                for (int i = 0; i < m; ++i) dot += col(k, i) * col(j, i);
                for (int i = 0; i < m; ++i) col(k, i) -= dot * col(j, i);
            }
        double nrm = 0;
        for (int i = 0; i < m; ++i) nrm += col(k, i) * col(k, i);
        nrm = std::sqrt(nrm);
        for (int i = 0; i < m; ++i) col(k, i) /= nrm;
    }
}

std::vector<double> SpectralBasis::forward(const std::vector<double>& f) const {
    std::vector<double> c(m_, 0.0);
    for (int k = 0; k < m_; ++k)
        for (int i = 0; i < m_; ++i) c[k] += Q_[i * m_ + k] * f[i];
    return c;
}

std::vector<double> SpectralBasis::inverse(const std::vector<double>& c) const {
    std::vector<double> f(m_, 0.0);
    for (int i = 0; i < m_; ++i)
        for (int k = 0; k < m_; ++k) f[i] += Q_[i * m_ + k] * c[k];
    return f;
}

const std::vector<double>& SpectralBasis::projector(int d) const {
    d = std::clamp(d, 0, m_ - 1);
    std::lock_guard<std::mutex> lock(proj_mu);
    auto& P = proj_[d];
    if (P.empty()) {
        P.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) {
                double s = 0;
                for (int k = 0; k <= d; ++k) s += Q_[i * m_ + k] * Q_[j * m_ + k];
                P[i * m_ + j] = s;
            }
    }
    return P;
}

std::vector<double> SpectralBasis::orthogonal_mode(int d) const {
    std::vector<double> out(m_);
    for (int i = 0; i < m_; ++i) out[i] = Q_[i * m_ + d];
    return out;
}

const SpectralBasis& spectral_basis(int m) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<SpectralBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, std::make_unique<SpectralBasis>(m)).first;
    return *it->second;
}

Field smooth(const Field& f, double t) {
    if (!(t > 1.0)) throw DomainError("smoothing parameter must exceed 1");
    const GridSpec& g = f.g;
    const int m = g.m;
    const int d = static_cast<int>(std::floor(t));
    if (d >= m - 1) return f;
    const auto& P = spectral_basis(m).projector(d);
    Field out = f;
    std::vector<cd> line(m);
    for (int axis = 0; axis < g.dims(); ++axis) {
        const std::size_t s = g.stride(axis), block = s * m;
        for (std::size_t outer = 0; outer < g.size(); outer += block)
            for (std::size_t inner = 0; inner < s; ++inner) {
                cd* p = out.v.data() + outer + inner;
                for (int i = 0; i < m; ++i) line[i] = p[i * s];
                for (int i = 0; i < m; ++i) {
                    cd acc = 0;
                    for (int j = 0; j < m; ++j) acc += P[i * m + j] * line[j];
                    p[i * s] = acc;
                }
            }
    }
    return out;
}

Deformation smooth(const Deformation& e, double t) {
    Deformation out = e;
    for (Field* f : out.fields_mut()) *f = smooth(*f, t);
    return out;
}

GenVectorField smooth(const GenVectorField& v, double t) {
    GenVectorField out = v;
    for (Field* f : out.fields_mut()) *f = smooth(*f, t);
    return out;
}

std::optional<SmoothingDefect> smoothing_defect(const Field& f, double t, int p, int q) {
    if (!(p > q && q >= 0)) throw DomainError("smoothing defect needs p > q >= 0");
    Field s = smooth(f, t);
    const double fq = ck_norm(f, q), fp = ck_norm(f, p);
    if (fq == 0.0 || fp == 0.0) return std::nullopt;
    SmoothingDefect d;
    d.growth = ck_norm(s, p) / (std::pow(t, p - q) * fq);
    d.approximation = ck_norm(f - s, q) / (std::pow(t, q - p) * fp);
    return d;
}

}  // namespace gcn
