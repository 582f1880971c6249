#include "gcn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gcn/calculus.hpp"
#include "gcn/cauchy.hpp"
#include "gcn/corpus.hpp"
#include "gcn/flow.hpp"
#include "gcn/normalizer.hpp"
#include "gcn/scenario.hpp"
#include "gcn/smoothing.hpp"
#include "gcn/spline.hpp"

namespace gcn::verify {

namespace {

using oracle::PolySection;

double rel(const Deformation& a, const Deformation& b) { return (a - b).sup() / std::max(b.sup(), 1e-300); }

Deformation restrict_deformation(const Deformation& e, double r) { return r < e.g.r ? restrict_to(e, r) : e; }

double scaled_error(const Section& grid, const PolySection& exact, const GridSpec& g) {
    Section ex = exact.sample(g);
    return (grid - ex).sup() / std::max(1.0, ex.sup());
}

PolySection random_deformation(std::uint64_t seed, int n, int degree) {
    const oracle::QC s(oracle::Rational(1, 4));
    PolySection e = random_section(seed, n, 1, 1, degree);
    if (n == 2) e = e + random_section(seed + 1, n, 2, 0, degree) + random_section(seed + 2, n, 0, 2, degree);
    return s * e;
}

Check make(const std::string& name, double value, double tol, const std::string& detail = "") {
    return {name, value, tol, std::isfinite(value) && value <= tol, detail};
}

}  // namespace

double h4_tolerance(const GridSpec& g, double C) { return C * std::pow(g.h, 4); }

double homotopy_residual(int m, int count) {
    GridSpec g = make_grid(1, 1.0, m);
    double worst = 0;
    for (int contra : {0, 1})
        for (const auto& ps : section_corpus(1, contra, 1, 3, count)) {
            Section s = ps.sample(g);
            Section r = dbar(homotopy_P(s)) + homotopy_P(dbar(s)) - s;
            worst = std::max(worst, r.sup() / std::max(1.0, s.sup()));
        }
    return worst;
}

BracketErrors bracket_errors(int n, int m, std::uint64_t seed, int degree) {
    constexpr int kTerms = 6;
    GridSpec g = make_grid(n, 1.0, m);
    BracketErrors out;
    auto fits = [n](int p, int q) { return p <= n && q <= n; };
    if (n == 2) {
        const int th[][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
        for (const auto& b : th) {
            PolySection e1 = random_section(seed++, n, 2, 0, degree, kTerms);
            Section ge1 = e1.sample(g);
            PolySection theta = random_section(seed++, n, b[0], b[1], degree, kTerms);
            // [eps1, theta] has bidegree (b0 + 1, b1); dbar needs total degree <= 2 on the grid
            if (b[0] + 1 + b[1] > 2 || b[1] + 1 > n) {
                ++out.skipped;
                continue;
            }
            PolySection exact = oracle::dbar(oracle::bracket(e1, theta));
            PolySection exact_r = oracle::bracket(oracle::dbar(e1), theta) - oracle::bracket(e1, oracle::dbar(theta));
            out.oracle_exact = out.oracle_exact && exact == exact_r;
            Section gt = theta.sample(g);
            Section lhs = dbar(bracket(ge1, gt));
            Section rhs = bracket(dbar(ge1), gt) - bracket(ge1, dbar(gt));
            out.bialgebroid = std::max({out.bialgebroid, scaled_error(lhs, exact, g), scaled_error(rhs, exact, g)});
            ++out.cases;
        }
    }
    const int bi[][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    for (const auto& a : bi)
        for (const auto& b : bi) {
            const int da = a[0] + a[1], db = b[0] + b[1];
            if (!fits(a[0], a[1]) || !fits(b[0], b[1])) continue;
            // grid dbar takes total degree <= 2: the inputs and the bracket
            if (da + db - 1 > 2 || da > 2 || db > 2 || a[1] + 1 > n || b[1] + 1 > n || a[1] + b[1] + 1 > n) {
                ++out.skipped;
                continue;
            }
            if (da == 0 && db == 0) continue;
            PolySection pa = random_section(seed++, n, a[0], a[1], degree, kTerms);
            PolySection pb = random_section(seed++, n, b[0], b[1], degree, kTerms);
            const oracle::QC sign((da - 1) % 2 ? -1 : 1);
            PolySection exact = oracle::dbar(oracle::bracket(pa, pb));
            PolySection exact_r =
                oracle::bracket(oracle::dbar(pa), pb) + sign * oracle::bracket(pa, oracle::dbar(pb));
            out.oracle_exact = out.oracle_exact && exact == exact_r;
            Section sa = pa.sample(g), sb = pb.sample(g);
            Section lhs = dbar(bracket(sa, sb));
            Section rhs = bracket(dbar(sa), sb) + cd((da - 1) % 2 ? -1.0 : 1.0) * bracket(sa, dbar(sb));
            out.derivation = std::max({out.derivation, scaled_error(lhs, exact, g), scaled_error(rhs, exact, g)});
            ++out.cases;
        }
    return out;
}

double mc_block_error(int n, int m, std::uint64_t seed, int count) {
    GridSpec g = make_grid(n, 1.0, m);
    double worst = 0;
    for (int i = 0; i < count; ++i) {
        PolySection pe = random_deformation(seed + 10 * i, n, 3);
        MCResidual r = mc_residual(from_section(pe.sample(g)));
        PolySection exact = oracle::mc(pe);
        const Section* blocks[4] = {&r.c30, &r.c21, &r.c12, &r.c03};
        for (int b = 0; b < 4; ++b) {
            if (3 - b > n || b > n) continue;
            worst = std::max(worst, scaled_error(*blocks[b], exact.part(3 - b, b), g));
        }
    }
    return worst;
}

std::vector<LinearizationPair> linearization_pairs(int m2, int m1, double dt) {
    std::vector<LinearizationPair> out;
    const FlowParams p{8, 0};
    auto run = [&](const std::string& name, const Deformation& eps, const GenVectorField& v) {
        GenVectorField w = v;
        w *= dt;
        Deformation a = act_on_deformation(gen_flow(w, p), eps, p).eps;
        Deformation fd = (1.0 / dt) * (a - restrict_deformation(eps, a.g.r));
        Deformation vel = restrict_deformation(deformation_velocity(eps, v), a.g.r);
        Deformation alg = restrict_deformation(from_section(deformed_differential(eps, to_section(v))), a.g.r);
        out.push_back({name, rel(fd, vel), rel(fd, alg)});
    };
    {
        GridSpec g = make_grid(2, 1.0, m2);
        Field z1 = coord_z(g, 0), z2 = coord_z(g, 1), zb1 = coord_zbar(g, 0), zb2 = coord_zbar(g, 1);
        GenVectorField v(g);
        v.X[0] = 0.1 * z1 * zb2;
        v.X[1] = 0.1 * zb1 * zb1;
        v.xi[0] = 0.1 * z2 * zb1;
        v.xi[1] = 0.1 * z1 * zb2 * zb2;
        run("trivial deformation, mixed field (n=2)", Deformation(g), v);
        Deformation beta(g);
        beta.eps1[0] = 0.5 * (z1 + z2 * z2);
        run("poisson bivector, mixed field (n=2)", beta, v);
    }
    {
        GridSpec g = make_grid(1, 1.0, m1);
        Field z = coord_z(g, 0), zb = coord_zbar(g, 0);
        Deformation mu(g);
        mu.eps2[0] = 0.05 * z + Field(g, 0.05);
        GenVectorField v(g);
        v.X[0] = 0.1 * z * zb + Field(g, 0.05);
        v.xi[0] = 0.1 * zb * z * z;
        run("beltrami, mixed field (n=1)", mu, v);
    }
    return out;
}

ScalingErrors scaling_errors(int m) {
    ScalingErrors out;
    // dilation on a half-size domain keeps node values, so the laws are exact
    GridSpec gh = make_grid(2, 0.5, m);
    Deformation e(gh);
    e.eps1[0] = coord_z(gh, 0) * coord_zbar(gh, 1) + Field(gh, cd(0.3, 0.1));
    e.eps2[1] = coord_z(gh, 0) * coord_zbar(gh, 1);
    e.eps2[2] = coord_zbar(gh, 0) * coord_zbar(gh, 0) * coord_z(gh, 1);
    e.eps3[0] = coord_zbar(gh, 0) * coord_zbar(gh, 0);
    const double t = 2.0;
    Deformation d = dilate(e, t);
    Deformation expect(d.g);
    for (std::size_t c = 0; c < e.eps1.size(); ++c) expect.eps1[c].v = (t * t * e.eps1[c]).v;
    for (std::size_t c = 0; c < e.eps2.size(); ++c) expect.eps2[c].v = e.eps2[c].v;
    for (std::size_t c = 0; c < e.eps3.size(); ++c) expect.eps3[c].v = (1.0 / (t * t) * e.eps3[c]).v;
    out.dilation = rel(d, expect);
    for (int k = 0; k <= 3; ++k) {
        Field a = e.eps3[0], b = d.eps3[0];
        for (int j = 0; j < k; ++j) {
            a = diff(a, 1);
            b = diff(b, 1);
        }
        const double want = std::pow(t, -2 - k) * a.sup();
        out.derivative_law = std::max(out.derivative_law, std::abs(b.sup() - want) / std::max(want, 1e-300));
    }

    GridSpec g = make_grid(2, 1.0, m);
    Deformation s = named_scenario("g2").sample(g);
    s.eps2[1] += 0.01 * coord_z(g, 1) * coord_zbar(g, 0);
    const double u = 0.3;
    Deformation l = lambda_transform(s, u);
    Deformation lexp = s;
    for (Field& f : lexp.eps1) f *= u;
    for (Field& f : lexp.eps3) f *= 1.0 / u;
    out.lambda = rel(l, lexp);

    // Maurer-Cartan blocks scale by (u^2, u, 1, 1/u)
    Deformation ne = from_section(random_deformation(31, 2, 3).sample(g));
    MCResidual m0 = mc_residual(ne), m1 = mc_residual(lambda_transform(ne, u));
    const double f[4] = {u * u, u, 1.0, 1.0 / u};
    const Section* b0[4] = {&m0.c30, &m0.c21, &m0.c12, &m0.c03};
    const Section* b1[4] = {&m1.c30, &m1.c21, &m1.c12, &m1.c03};
    for (int b = 0; b < 4; ++b) {
        Section want = cd(f[b]) * *b0[b];
        out.mc_invariance = std::max(out.mc_invariance, (*b1[b] - want).sup() / std::max(want.sup(), 1e-300));
    }

    GenDiffeo bonly(g);
    bonly.B[pair_index(0, 3, 4)] = Field(g, 0.02);
    bonly.B[pair_index(1, 2, 4)] = 0.01 * real_part(coord_z(g, 0));
    GenDiffeo b4 = lambda_on_diffeo(bonly, 4.0);
    for (std::size_t c = 0; c < b4.B.size(); ++c)
        out.lambda_diffeo = std::max(out.lambda_diffeo, (b4.B[c] - 0.25 * bonly.B[c]).sup() / 0.02);
    for (const Field& x : b4.disp) out.lambda_diffeo = std::max(out.lambda_diffeo, x.sup());

    GenVectorField v(g);
    v.X[0] = 0.03 * coord_zbar(g, 1) * coord_z(g, 0);
    v.X[1] = 0.02 * coord_z(g, 0) * coord_z(g, 0);
    v.xi[0] = 0.05 * coord_z(g, 1) * coord_zbar(g, 0);
    v.xi[1] = 0.04 * coord_z(g, 0) * coord_z(g, 1);
    const FlowParams fp{8, 0};
    GenDiffeo F = gen_flow(v, fp);
    for (double tt : {4.0, 0.3}) {
        GenDiffeo Ft = lambda_on_diffeo(F, tt);
        out.conjugation = std::max(out.conjugation, rel(act_on_deformation(Ft, lambda_transform(s, tt), fp).eps,
                                                        lambda_transform(act_on_deformation(F, s, fp).eps, tt)));
        out.conjugation_printed =
            std::max(out.conjugation_printed, rel(act_on_deformation(F, lambda_transform(s, tt), fp).eps,
                                                  lambda_transform(act_on_deformation(Ft, s, fp).eps, tt)));
    }

    Deformation z(gh);
    z.eps1[0] = coord_z(gh, 0);
    z.eps2[2] = 0.1 * coord_zbar(gh, 1);
    z.eps3[0] = 0.05 * coord_z(gh, 1) * coord_zbar(gh, 0);
    Deformation r1 = rescale_R(z, 0.5), r2 = lambda_transform(dilate(z, 2.0), 0.25);
    out.rescale_bitwise = r1.g.same_lattice(r2.g);
    auto f1 = r1.fields(), f2 = r2.fields();
    for (std::size_t c = 0; c < f1.size(); ++c) out.rescale_bitwise = out.rescale_bitwise && f1[c]->v == f2[c]->v;
    return out;
}

Deformation test_perturbation(const GridSpec& g, bool with_closed) {
    Field z1 = coord_z(g, 0), z2 = coord_z(g, 1), zb1 = coord_zbar(g, 0), zb2 = coord_zbar(g, 1);
    Deformation beta(g);
    beta.eps1[0] = z1;
    GenVectorField u(g);
    u.X[0] = z1 * zb2 + zb1 * zb1;
    u.X[1] = z2 * zb1;
    u.xi[0] = z2 * zb1 * zb2;
    u.xi[1] = z1 * z1 * zb2 + zb1;
    Deformation eta = from_section(deformed_differential(beta, to_section(u)));
    if (with_closed) {
        eta.eps1[0] += z2 * z2;
        eta.eps3[0] += zb1 + zb2 * zb2;
    }
    return eta;
}

double infinitesimal_remainder(const Deformation& eta, double s) {
    Deformation beta(eta.g);
    beta.eps1[0] = coord_z(eta.g, 0);
    Deformation e = beta + s * eta;
    Section V = to_section(correction_field(e));
    Section r = to_section(e) + dbar(V) + bracket(to_section(beta), V);
    return zeta(from_section(r.part(2, 0) + r.part(1, 1) + r.part(0, 2))).sup();
}

SmoothingConstants smoothing_constants(int m, int count) {
    GridSpec g = make_grid(1, 1.0, m);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const int pq[3][2] = {{1, 0}, {2, 1}, {3, 1}};
    SmoothingConstants out;
    for (int i = 0; i < count; ++i) {
        const cd a(u(rng), u(rng)), b(u(rng), u(rng));
        Field f = sample(g, [&](const double* x) {
            const cd z(x[0], x[1]);
            return std::exp(a * z) + std::sin(b * std::conj(z));
        });
        for (double t : {2.0, 4.0, 8.0, 16.0})
            for (int k = 0; k < 3; ++k) {
                auto d = smoothing_defect(f, t, pq[k][0], pq[k][1]);
                if (!d) continue;
                out.growth[k] = std::max(out.growth[k], d->growth);
                out.approx[k] = std::max(out.approx[k], d->approximation);
            }
    }
    return out;
}

std::vector<Check> run_identity_suites(const Options& o) {
    std::vector<Check> out;
    GridSpec g1 = make_grid(1, 1.0, o.m1), g2 = make_grid(2, 1.0, o.m2);
    // the homotopy error is first order in h at worst; anchored at 5e-3 for m = 65
    const double tol_p = 5e-3 * g1.h / (2.0 / 64);
    out.push_back(make("chain homotopy dbar P + P dbar = Id (n=1)", homotopy_residual(o.m1), tol_p));

    const std::uint64_t bs = o.seed ? o.seed : 900, ms = o.seed ? o.seed + 1 : 77;
    BracketErrors b2 = bracket_errors(2, o.m2, bs), b1 = bracket_errors(1, o.m1, bs);
    out.push_back(make("bialgebroid identity, grid vs exact (n=2)", b2.bialgebroid, h4_tolerance(g2)));
    out.push_back(make("derivation property, grid vs exact (n=2)", b2.derivation, h4_tolerance(g2),
                       std::to_string(b2.cases) + " cases"));
    out.push_back(make("derivation property, grid vs exact (n=1)", b1.derivation, h4_tolerance(g1),
                       std::to_string(b1.cases) + " cases"));
    out.push_back(make("exact bracket identities hold in the oracle", (b1.oracle_exact && b2.oracle_exact) ? 0 : 1, 0));
    out.push_back(make("maurer-cartan blocks, grid vs exact (n=2)", mc_block_error(2, o.m2, ms), h4_tolerance(g2)));

    ScalingErrors s = scaling_errors(9);
    out.push_back(make("dilation componentwise scaling", s.dilation, 1e-12));
    out.push_back(make("dilation derivative law", s.derivative_law, 1e-12));
    out.push_back(make("lambda transform componentwise scaling", s.lambda, 1e-12));
    out.push_back(make("lambda transform scales maurer-cartan blocks", s.mc_invariance, 1e-12));
    out.push_back(make("lambda on generalized diffeomorphisms", s.lambda_diffeo, 1e-12));
    std::ostringstream det;
    det << "printed composition order differs by " << s.conjugation_printed;
    out.push_back(make("lambda conjugation of the action", s.conjugation, 1e-12, det.str()));
    out.push_back(make("rescaling orders agree bitwise", s.rescale_bitwise ? 0 : 1, 0));

    for (const LinearizationPair& p : linearization_pairs(o.m2, o.m1)) {
        std::ostringstream d;
        d << "L*-only formula differs by " << p.formula_err;
        out.push_back(make("flow linearization: " + p.name, p.velocity_err, 1e-2, d.str()));
    }

    for (const std::string& name : scenario_names()) {
        Scenario sc = named_scenario(name);
        GridSpec g = sc.n == 1 ? g1 : g2;
        Deformation e = sc.sample(g);
        MCResidual r = mc_residual(e);
        const double mc = *std::max_element(r.norms, r.norms + 4);
        if (sc.integrable)
            out.push_back(make("scenario " + name + " is integrable", mc, h4_tolerance(g, 1.0) * std::max(1.0, e.sup())));
        if (sc.normal_form)
            out.push_back(make("scenario " + name + " is a normal form", zeta(e).sup(), 1e-10));
    }
    return out;
}

std::string report_json(const std::vector<Check>& checks) {
    nlohmann::json j;
    j["schema"] = 1;
    bool all = true;
    nlohmann::json rows = nlohmann::json::array();
    for (const Check& c : checks) {
        rows.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tol}, {"pass", c.pass},
                        {"detail", c.detail}});
        all = all && c.pass;
    }
    j["checks"] = rows;
    j["pass"] = all;
    return j.dump(2);
}

}  // namespace gcn::verify
