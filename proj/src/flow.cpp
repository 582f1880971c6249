#include "gcn/flow.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gcn/spline.hpp"

namespace gcn {

namespace {

using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using CMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

std::vector<const Field*> ptrs(const std::vector<Field>& v) {
    std::vector<const Field*> out;
    for (const Field& f : v) out.push_back(&f);
    return out;
}

double imag_sup(const std::vector<Field>& v) {
    double s = 0;
    for (const Field& f : v)
        for (const cd& z : f.v) s = std::max(s, std::abs(z.imag()));
    return s;
}

bool is_identity(const GenDiffeo& f) {
    for (const Field& d : f.disp)
        for (const cd& z : d.v)
            if (z != 0.0) return false;
    return true;
}

double sup_of(const std::vector<Field>& v) {
    double s = 0;
    for (const Field& f : v) s = std::max(s, f.sup());
    return s;
}

// Antisymmetric matrix from pair-indexed components at a point.
RMat antisym(const cd* comps, int D) {
    RMat M = RMat::Zero(D, D);
    for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b) {
            const double v = comps[pair_index(a, b, D)].real();
            M(a, b) = v;
            M(b, a) = -v;
        }
    return M;
}

// Evaluates phi = Id + disp and its Jacobian through a spline whose first D
// components are the displacement.
struct PointMap {
    const MultiSpline* s;
    int D;
    mutable std::vector<cd> val, grad;

    PointMap(const MultiSpline& sp, int dims) : s(&sp), D(dims), val(sp.components()), grad(sp.components() * dims) {}

    bool eval(const double* x, double* y, RMat& J) const {
        if (!s->contains(x)) return false;
        s->eval_grad(x, val.data(), grad.data(), D);
        J.setIdentity(D, D);
        for (int a = 0; a < D; ++a) {
            y[a] = x[a] + val[a].real();
            for (int b = 0; b < D; ++b) J(a, b) += grad[a * D + b].real();
        }
        return true;
    }
};

// Solves phi(x) = y by damped Newton from x = y - disp(y).
bool invert_point(const PointMap& pm, const double* y, double* x, RMat& J, double tol) {
    const int D = pm.D;
    double fx[4], trial[4], ftrial[4];
    RMat Jt(D, D);
    for (int a = 0; a < D; ++a) x[a] = y[a];
    const double r = pm.s->grid().r;
    for (int a = 0; a < D; ++a) x[a] = std::clamp(x[a], -r, r);
    if (!pm.eval(x, fx, J)) return false;
    for (int a = 0; a < D; ++a) x[a] = std::clamp(y[a] - (fx[a] - x[a]), -r, r);
    if (!pm.eval(x, fx, J)) return false;
    auto resid = [&](const double* f) {
        double s = 0;
        for (int a = 0; a < D; ++a) s = std::max(s, std::abs(f[a] - y[a]));
        return s;
    };
    double res = resid(fx);
    for (int it = 0; it < 50 && res > tol; ++it) {
        Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1> rhs(D);
        for (int a = 0; a < D; ++a) rhs(a) = y[a] - fx[a];
        Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1> step = J.partialPivLu().solve(rhs);
        double lam = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k) {
            for (int a = 0; a < D; ++a) trial[a] = x[a] + lam * step(a);
            if (pm.eval(trial, ftrial, Jt) && resid(ftrial) < res) {
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        if (!accepted) break;
        for (int a = 0; a < D; ++a) {
            x[a] = trial[a];
            fx[a] = ftrial[a];
        }
        J = Jt;
        res = resid(fx);
    }
    return res <= tol * 10;
}

// Real frame: rows are d/dx_a then dx_a. Columns are L (dz_a, dbar_j) then
// Lbar (d_a, dzbar_j); generator g_k of Lbar is dual to column k of L.
CMat frame(int n) {
    const int D = 2 * n, K = 2 * D;
    CMat C = CMat::Zero(K, K);
    const cd I(0, 1);
    for (int a = 0; a < n; ++a) {
        C(D + 2 * a, a) = 1.0;
        C(D + 2 * a + 1, a) = I;
        C(2 * a, n + a) = 0.5;
        C(2 * a + 1, n + a) = 0.5 * I;
        C(2 * a, D + a) = 0.5;
        C(2 * a + 1, D + a) = -0.5 * I;
        C(D + 2 * a, D + n + a) = 1.0;
        C(D + 2 * a + 1, D + n + a) = -I;
    }
    return C;
}

// Coefficient of g_a ^ g_b (a < b) in a deformation, as a field.
const Field& pair_slot(const Deformation& d, int a, int b) {
    const int n = d.g.n;
    if (b < n) return d.eps1[pair_index(a, b, n)];
    if (a >= n) return d.eps3[pair_index(a - n, b - n, n)];
    return d.eps2[a * n + (b - n)];
}

Field& pair_slot(Deformation& d, int a, int b) {
    return const_cast<Field&>(pair_slot(static_cast<const Deformation&>(d), a, b));
}

}  // namespace

GenDiffeo::GenDiffeo(const GridSpec& grid)
    : g(grid), disp(grid.dims(), Field(grid)), B(pair_count(grid.dims()), Field(grid)) {}

std::vector<const Field*> GenDiffeo::fields() const {
    std::vector<const Field*> out = ptrs(disp);
    for (const Field& f : B) out.push_back(&f);
    return out;
}

double GenDiffeo::b(int a, int c, std::size_t i) const {
    if (a == c) return 0.0;
    const int D = g.dims();
    if (a < c) return B[pair_index(a, c, D)][i].real();
    return -B[pair_index(c, a, D)][i].real();
}

RealPair realify(const GenVectorField& v) {
    RealPair u(v.g);
    for (int i = 0; i < v.g.n; ++i) {
        u.X[2 * i] = real_part(v.X[i]);
        u.X[2 * i + 1] = imag_part(v.X[i]);
        u.xi[2 * i] = 2.0 * real_part(v.xi[i]);
        u.xi[2 * i + 1] = 2.0 * imag_part(v.xi[i]);
    }
    return u;
}

FlowReport flow_real(const RealPair& u, const FlowParams& p) {
    const GridSpec& g = u.g;
    const int n = g.n, D = g.dims();
    const double scale = std::max(1.0, std::max(sup_of(u.X), sup_of(u.xi)));
    if (imag_sup(u.X) > 1e-12 * scale || imag_sup(u.xi) > 1e-12 * scale)
        throw DomainError("flow needs a real vector field and one-form");
    if (p.substeps < 1) throw DomainError("flow needs at least one substep");

    // Pairs of real components travel as one complex field.
    std::vector<Field> px, pxi;
    for (int i = 0; i < n; ++i) px.push_back(u.X[2 * i] + cd(0, 1) * u.X[2 * i + 1]);
    for (int i = 0; i < n; ++i) pxi.push_back(u.xi[2 * i] + cd(0, 1) * u.xi[2 * i + 1]);

    const double rho = ck_norm(ptrs(u.X), 1);
    double lip = 0;
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) lip = std::max(lip, diff(u.X[a], b).sup());
    const double c = p.shrink_c(n);
    double rf = std::min(g.r * (1.0 - c * rho * (1.0 + rho)), g.r - 1.01 * sup_of(u.X) * std::exp(lip));
    rf = std::min(rf, g.r);
    FlowReport rep;
    rep.predicted_radius = rf;
    if (!(rf > 0.05 * g.r)) throw FlowAbort("flow radius collapsed");

    if (sup_of(u.X) == 0.0) {
        // no motion: phi = Id and B = d xi
        GenDiffeo phi(g);
        for (int a = 0; a < D; ++a)
            for (int b = a + 1; b < D; ++b) phi.B[pair_index(a, b, D)] = real_part(diff(u.xi[b], a) - diff(u.xi[a], b));
        rep.phi = std::move(phi);
        rep.predicted_radius = g.r;
        return rep;
    }
    MultiSpline sp(ptrs(px)), sxi(ptrs(pxi));

    const int N = p.substeps;
    const double dt = 1.0 / N;
    std::vector<cd> val(n), xval(n), grad(n * D);
    // Simpson over the substep endpoints, trapezoid for odd counts
    auto weight = [&](int k) {
        if (N % 2) return (k == 0 || k == N) ? dt / 2 : dt;
        if (k == 0 || k == N) return dt / 3;
        return (k % 2 ? 4.0 : 2.0) * dt / 3;
    };

    struct State {
        double x[4];
        double J[16];
    };
    // derivative of (x, J) and the one-form at x
    auto rhs = [&](const State& s, State& ds, double* xi) -> bool {
        if (!sp.contains(s.x)) return false;
        sp.eval_grad(s.x, val.data(), grad.data(), n);
        double dX[16];
        for (int i = 0; i < n; ++i) {
            ds.x[2 * i] = val[i].real();
            ds.x[2 * i + 1] = val[i].imag();
            if (xi) {
                if (i == 0) sxi.eval(s.x, xval.data());
                xi[2 * i] = xval[i].real();
                xi[2 * i + 1] = xval[i].imag();
            }
            for (int b = 0; b < D; ++b) {
                dX[(2 * i) * D + b] = grad[i * D + b].real();
                dX[(2 * i + 1) * D + b] = grad[i * D + b].imag();
            }
        }
        for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b) {
                double acc = 0;
                for (int k = 0; k < D; ++k) acc += dX[a * D + k] * s.J[k * D + b];
                ds.J[a * D + b] = acc;
            }
        return true;
    };

    for (int attempt = 0;; ++attempt) {
        GridSpec gf = make_grid(n, rf, g.m);
        GenDiffeo phi(gf);
        std::vector<Field> alpha(D, Field(gf));
        int exits = 0;
        for (std::size_t node = 0; node < gf.size(); ++node) {
            auto pt = gf.point(node);
            State s{}, k1, k2, k3, k4, tmp;
            for (int a = 0; a < D; ++a) {
                s.x[a] = pt[a];
                for (int b = 0; b < D; ++b) s.J[a * D + b] = a == b ? 1.0 : 0.0;
            }
            double acc[4] = {0, 0, 0, 0}, xi[4];
            bool ok = true;
            auto accumulate = [&](double w) {
                for (int b = 0; b < D; ++b) {
                    double v = 0;
                    for (int a = 0; a < D; ++a) v += xi[a] * s.J[a * D + b];
                    acc[b] += w * v;
                }
            };
            auto axpy = [&](const State& base, const State& d, double h) {
                for (int a = 0; a < D; ++a) tmp.x[a] = base.x[a] + h * d.x[a];
                for (int a = 0; a < D * D; ++a) tmp.J[a] = base.J[a] + h * d.J[a];
            };
            for (int k = 0; k < N && ok; ++k) {
                ok = rhs(s, k1, xi);
                if (!ok) break;
                accumulate(weight(k));
                axpy(s, k1, dt / 2);
                ok = rhs(tmp, k2, nullptr);
                if (!ok) break;
                axpy(s, k2, dt / 2);
                ok = rhs(tmp, k3, nullptr);
                if (!ok) break;
                axpy(s, k3, dt);
                ok = rhs(tmp, k4, nullptr);
                if (!ok) break;
                for (int a = 0; a < D; ++a) s.x[a] += dt / 6 * (k1.x[a] + 2 * k2.x[a] + 2 * k3.x[a] + k4.x[a]);
                for (int a = 0; a < D * D; ++a) s.J[a] += dt / 6 * (k1.J[a] + 2 * k2.J[a] + 2 * k3.J[a] + k4.J[a]);
            }
            if (ok) ok = rhs(s, k1, xi);
            if (!ok) {
                ++exits;
                continue;
            }
            accumulate(weight(N));
            for (int a = 0; a < D; ++a) {
                phi.disp[a][node] = s.x[a] - pt[a];
                alpha[a][node] = acc[a];
            }
        }
        if (attempt == 0) rep.exits = exits;
        if (exits == 0) {
            for (int a = 0; a < D; ++a)
                for (int b = a + 1; b < D; ++b) phi.B[pair_index(a, b, D)] = diff(alpha[b], a) - diff(alpha[a], b);
            rep.phi = std::move(phi);
            return rep;
        }
        rf *= 0.9;
        if (attempt > 20 || !(rf > 0.05 * g.r)) throw FlowAbort("flow trajectories keep leaving the domain");
    }
}

FlowReport time1_flow(const RealPair& Xr, const FlowParams& p) {
    RealPair u = Xr;
    for (Field& f : u.xi) f = Field(u.g);
    return flow_real(u, p);
}

std::vector<Field> bfield_of_flow(const RealPair& u, const FlowParams& p) { return flow_real(u, p).phi.B; }

GenDiffeo gen_flow(const GenVectorField& v, const FlowParams& p) { return flow_real(realify(v), p).phi; }

GenDiffeo restrict_to(const GenDiffeo& f, double r2) {
    if (r2 == f.g.r) return f;
    auto fs = restrict_to(f.fields(), r2);
    GenDiffeo out(make_grid(f.g.n, r2, f.g.m));
    const std::size_t D = out.disp.size();
    for (std::size_t c = 0; c < fs.size(); ++c) (c < D ? out.disp[c] : out.B[c - D]) = std::move(fs[c]);
    return out;
}

double diffeo_norm(const GenDiffeo& f, int k) {
    const double dn = ck_norm(ptrs(f.disp), k);
    const double bn = ck_norm(ptrs(f.B), std::max(k - 1, 0));
    return std::max(dn, bn);
}

GenDiffeo compose(const GenDiffeo& Phi, const GenDiffeo& Psi, const FlowParams&) {
    const int n = Psi.g.n, D = Psi.g.dims();
    if (Phi.g.n != n) throw DomainError("composing diffeomorphisms of different dimension");
    // sup |psi(x)| / |x| over the nodes of Psi's grid
    double ratio = 0;
    for (std::size_t i = 0; i < Psi.g.size(); ++i) {
        auto x = Psi.g.point(i);
        double nx = 0, ny = 0;
        for (int a = 0; a < D; ++a) {
            nx = std::max(nx, std::abs(x[a]));
            ny = std::max(ny, std::abs(x[a] + Psi.disp[a][i].real()));
        }
        if (nx > 0) ratio = std::max(ratio, ny / nx);
    }
    double r = Psi.g.r;
    if (ratio > 0) r = std::min(r, 0.999 * Phi.g.r / ratio);
    GridSpec gr = make_grid(n, r, Psi.g.m);
    MultiSpline spsi(Psi.fields()), sphi(Phi.fields());
    PointMap pm(spsi, D);
    std::vector<cd> vphi(sphi.components());
    GenDiffeo out(gr);
    RMat J(D, D);
    double y[4];
    for (std::size_t i = 0; i < gr.size(); ++i) {
        auto x = gr.point(i);
        if (!pm.eval(x.data(), y, J)) throw DomainError("composition point outside the inner map");
        for (int a = 0; a < D; ++a) y[a] = std::clamp(y[a], -Phi.g.r, Phi.g.r);
        sphi.eval(y, vphi.data());
        for (int a = 0; a < D; ++a) out.disp[a][i] = y[a] + vphi[a].real() - x[a];
        RMat Bo = antisym(vphi.data() + D, D);
        RMat pulled = J.transpose() * Bo * J;
        for (int a = 0; a < D; ++a)
            for (int b = a + 1; b < D; ++b) {
                const int q = pair_index(a, b, D);
                out.B[q][i] = pulled(a, b) + pm.val[D + q].real();
            }
    }
    return out;
}

double action_radius(const GenDiffeo& Phi, const FlowParams& p) {
    if (is_identity(Phi)) return Phi.g.r;
    const double d1 = ck_norm(ptrs(Phi.disp), 1);
    const double d0 = sup_of(Phi.disp);
    const double r = std::min(Phi.g.r * (1.0 - p.shrink_c(Phi.g.n) * d1), Phi.g.r - 1.01 * d0);
    if (!(r > 0.05 * Phi.g.r)) throw FlowAbort("action radius collapsed");
    return r;
}

GenDiffeo inverse(const GenDiffeo& Phi, const FlowParams& p) {
    const int n = Phi.g.n, D = Phi.g.dims();
    if (is_identity(Phi)) {
        GenDiffeo out = Phi;
        for (Field& f : out.B) f = -f;
        return out;
    }
    GridSpec gr = make_grid(n, action_radius(Phi, p), Phi.g.m);
    MultiSpline sp(Phi.fields());
    PointMap pm(sp, D);
    GenDiffeo out(gr);
    RMat J(D, D);
    double x[4];
    const double tol = 1e-12 * Phi.g.h;
    for (std::size_t i = 0; i < gr.size(); ++i) {
        auto y = gr.point(i);
        if (!invert_point(pm, y.data(), x, J, tol)) throw DomainError("newton inversion failed");
        for (int a = 0; a < D; ++a) out.disp[a][i] = x[a] - y[a];
        RMat Ji = J.inverse();
        RMat Bx = antisym(pm.val.data() + D, D);
        RMat pushed = Ji.transpose() * Bx * Ji;
        for (int a = 0; a < D; ++a)
            for (int b = a + 1; b < D; ++b) out.B[pair_index(a, b, D)][i] = -pushed(a, b);
    }
    return out;
}

RealPair pushforward_section(const GenDiffeo& Phi, const RealPair& u, const FlowParams& p) {
    const int n = Phi.g.n, D = Phi.g.dims();
    double r = action_radius(Phi, p);
    if (u.g.r < Phi.g.r) r = std::min(r, u.g.r - 1.01 * sup_of(Phi.disp));
    GridSpec gr = make_grid(n, r, Phi.g.m);
    MultiSpline sp(Phi.fields());
    std::vector<const Field*> uc = ptrs(u.X);
    for (const Field& f : u.xi) uc.push_back(&f);
    MultiSpline su(uc);
    PointMap pm(sp, D);
    std::vector<cd> uv(2 * D);
    RealPair out(gr);
    RMat J = RMat::Identity(D, D);
    double x[4];
    const bool ident = is_identity(Phi);
    const double tol = 1e-12 * Phi.g.h;
    for (std::size_t i = 0; i < gr.size(); ++i) {
        auto y = gr.point(i);
        if (ident) {
            for (int a = 0; a < D; ++a) x[a] = y[a];
            double fx[4];
            pm.eval(x, fx, J);
        } else if (!invert_point(pm, y.data(), x, J, tol)) {
            throw DomainError("newton inversion failed");
        }
        su.eval(x, uv.data());
        RMat Bx = antisym(pm.val.data() + D, D);
        RMat JiT = J.inverse().transpose();
        for (int a = 0; a < D; ++a) {
            cd v = 0, w = 0;
            for (int b = 0; b < D; ++b) v += J(a, b) * uv[b];
            out.X[a][i] = v;
            for (int b = 0; b < D; ++b) {
                cd form = uv[D + b];
                for (int c = 0; c < D; ++c) form += Bx(c, b) * uv[c];
                w += JiT(a, b) * form;
            }
            out.xi[a][i] = w;
        }
    }
    return out;
}

ActionResult act_on_deformation(const GenDiffeo& Phi, const Deformation& e, const FlowParams& p) {
    const int n = Phi.g.n, D = Phi.g.dims(), K = 2 * D;
    if (e.g.n != n) throw DomainError("deformation and diffeomorphism differ in dimension");
    const bool ident = is_identity(Phi);
    double r = std::min(action_radius(Phi, p), Phi.g.r);
    if (e.g.r < Phi.g.r) r = std::min(r, ident ? e.g.r : e.g.r - 1.01 * sup_of(Phi.disp));
    GridSpec gr = make_grid(n, r, Phi.g.m);

    CMat C = frame(n);
    CMat Cinv = C.inverse();

    MultiSpline sp(Phi.fields());
    MultiSpline se(e.fields());
    PointMap pm(sp, D);
    std::vector<cd> ev(se.components());
    ActionResult res;
    res.eps = Deformation(gr);
    RMat J = RMat::Identity(D, D);
    double x[4];
    const double tol = 1e-12 * Phi.g.h;

    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b) pairs.emplace_back(a, b);
    // component order in Deformation::fields(): eps1, eps2, eps3
    std::vector<int> comp_of(D * D, -1);
    {
        Deformation probe(e.g);
        auto fs = probe.fields();
        for (auto [a, b] : pairs) {
            const Field* target = &pair_slot(probe, a, b);
            for (std::size_t c = 0; c < fs.size(); ++c)
                if (fs[c] == target) comp_of[a * D + b] = static_cast<int>(c);
        }
    }

    for (std::size_t i = 0; i < gr.size(); ++i) {
        auto y = gr.point(i);
        if (ident) {
            for (int a = 0; a < D; ++a) x[a] = y[a];
            double fx[4];
            pm.eval(x, fx, J);
        } else if (!invert_point(pm, y.data(), x, J, tol)) {
            throw DomainError("newton inversion failed");
        }
        se.eval(x, ev.data());
        RMat Bx = antisym(pm.val.data() + D, D);
        RMat JiT = J.inverse().transpose();
        CMat R = CMat::Zero(K, K);
        R.topLeftCorner(D, D) = J.cast<cd>();
        R.bottomRightCorner(D, D) = JiT.cast<cd>();
        R.bottomLeftCorner(D, D) = (JiT * Bx.transpose()).cast<cd>();
        CMat M = Cinv * R * C;

        CMat E = CMat::Zero(D, D);
        for (auto [a, b] : pairs) {
            const cd v = ev[comp_of[a * D + b]];
            E(b, a) += v;
            E(a, b) -= v;
        }
        CMat top = M.topLeftCorner(D, D) + M.topRightCorner(D, D) * E;
        CMat bot = M.bottomLeftCorner(D, D) + M.bottomRightCorner(D, D) * E;
        Eigen::PartialPivLU<CMat> lu(top);
        if (!(lu.rcond() > 1e-10)) throw ActionSingular("graph block of the transformed bundle is singular");
        CMat En = bot * lu.inverse();
        for (int a = 0; a < D; ++a) {
            res.skew_defect = std::max(res.skew_defect, std::abs(En(a, a)));
            for (int b = a + 1; b < D; ++b) {
                res.skew_defect = std::max(res.skew_defect, std::abs(En(b, a) + En(a, b)));
                pair_slot(res.eps, a, b)[i] = 0.5 * (En(b, a) - En(a, b));
            }
        }
    }
    return res;
}

Deformation deformation_velocity(const Deformation& e, const GenVectorField& v) {
    const GridSpec& g = e.g;
    const int n = g.n, D = g.dims(), K = 2 * D;
    CMat C = frame(n);
    CMat Cinv = C.inverse();
    RealPair u = realify(v);
    // E(b, k): component along g_b of the image of the frame element e_k
    std::vector<std::vector<Field>> E(D, std::vector<Field>(D, Field(g)));
    for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b) {
            const Field& f = pair_slot(e, a, b);
            E[b][a] += f;
            E[a][b] -= f;
        }
    std::vector<std::vector<Field>> Edot(D, std::vector<Field>(D, Field(g)));
    for (int k = 0; k < D; ++k) {
        // section e_k + eps(e_k) in real coordinates
        RealPair s(g);
        for (int row = 0; row < K; ++row) {
            Field f(g, C(row, k));
            for (int b = 0; b < D; ++b)
                if (C(row, D + b) != 0.0) f += C(row, D + b) * E[b][k];
            (row < D ? s.X[row] : s.xi[row - D]) = f;
        }
        // pushforward by the flow moves sections by -[u, s]
        RealPair w = courant_bracket(u, s);
        for (std::size_t i = 0; i < g.size(); ++i) {
            Eigen::Matrix<cd, Eigen::Dynamic, 1, 0, 8, 1> col(K);
            for (int row = 0; row < K; ++row) col(row) = row < D ? w.X[row][i] : w.xi[row - D][i];
            Eigen::Matrix<cd, Eigen::Dynamic, 1, 0, 8, 1> q = Cinv * col;
            for (int b = 0; b < D; ++b) {
                cd val = -q(D + b);
                for (int j = 0; j < D; ++j) val += E[b][j][i] * q(j);
                Edot[b][k][i] = val;
            }
        }
    }
    Deformation out(g);
    for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b) pair_slot(out, a, b) = 0.5 * (Edot[b][a] - Edot[a][b]);
    return out;
}

GenDiffeo lambda_on_diffeo(const GenDiffeo& Phi, double t) {
    GenDiffeo out = Phi;
    for (Field& f : out.B) f *= 1.0 / t;
    return out;
}

}  // namespace gcn
