#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gcn/cauchy.hpp"
#include "gcn/normalizer.hpp"
#include "gcn/scenario.hpp"

using namespace gcn;

namespace {

double rel(const Deformation& a, const Deformation& b) { return (a - b).sup() / std::max(b.sup(), 1e-300); }

bool bitwise_equal(const Deformation& a, const Deformation& b) {
    if (!a.g.same_lattice(b.g)) return false;
    auto fa = a.fields(), fb = b.fields();
    for (std::size_t c = 0; c < fa.size(); ++c)
        if (fa[c]->v != fb[c]->v) return false;
    return true;
}

Deformation poisson(const GridSpec& g) {
    Deformation e(g);
    e.eps1[0] = coord_z(g, 0);
    return e;
}

GenDiffeo test_flow(const GridSpec& g) {
    GenVectorField v(g);
    v.X[0] = 0.03 * coord_zbar(g, 1) * coord_z(g, 0);
    v.X[1] = 0.02 * coord_z(g, 0) * coord_z(g, 0);
    v.xi[0] = 0.05 * coord_z(g, 1) * coord_zbar(g, 0);
    v.xi[1] = 0.04 * coord_z(g, 0) * coord_z(g, 1);
    return gen_flow(v, {8, 0});
}

}  // namespace

TEST_CASE("correction field") {
    GridSpec g = make_grid(2, 1.0, 13);
    GenVectorField v0 = correction_field(poisson(g));
    CHECK(v0.sup() == 0.0);

    const cd c(0.02, -0.01);
    Deformation e(g);
    e.eps3[0] = Field(g, c);
    GenVectorField v = correction_field(e);
    Field expect = cauchy_transform(Field(g, c), 1);
    CHECK((v.xi[0] - expect).sup() < 1e-14);
    CHECK(v.xi[1].sup() == 0.0);
    for (const Field& x : v.X) CHECK(x.sup() == 0.0);
}

TEST_CASE("infinitesimal normalization leaves a quadratic remainder") {
    GridSpec g = make_grid(2, 1.0, 13);
    Field z1 = coord_z(g, 0), z2 = coord_z(g, 1), zb1 = coord_zbar(g, 0), zb2 = coord_zbar(g, 1);
    Deformation beta = poisson(g);
    GenVectorField u(g);
    u.X[0] = z1 * zb2 + zb1 * zb1;
    u.X[1] = z2 * zb1;
    u.xi[0] = z2 * zb1 * zb2;
    u.xi[1] = z1 * z1 * zb2 + zb1;
    Deformation exact = from_section(deformed_differential(beta, to_section(u)));
    Deformation closed(g);
    closed.eps1[0] = z2 * z2;
    closed.eps3[0] = zb1 + zb2 * zb2;

    auto remainder = [&](const Deformation& eta, double s) {
        Deformation e = beta + s * eta;
        Section V = to_section(correction_field(e));
        Section r = to_section(e) + dbar(V) + bracket(to_section(beta), V);
        return zeta(from_section(r.part(2, 0) + r.part(1, 1) + r.part(0, 2))).sup();
    };
    // exact perturbations are removed to all orders
    for (double s : {1e-2, 5e-3}) CHECK(remainder(exact, s) < 1e-9);
    double prev = 0;
    for (double s : {1e-2, 5e-3, 2.5e-3}) {
        const double r = remainder(exact + closed, s);
        CHECK(r > 0);
        if (prev > 0) CHECK(prev / r == doctest::Approx(4.0).epsilon(0.05));
        prev = r;
    }
}

TEST_CASE("one step on a normal form is the identity") {
    GridSpec g = make_grid(2, 1.0, 9);
    SCIParams p;
    StepResult s = iterate_once(poisson(g), 4.0, p);
    for (const Field& f : s.phi.disp) CHECK(f.sup() < 1e-12);
    for (const Field& f : s.phi.B) CHECK(f.sup() < 1e-12);
    CHECK(zeta(s.eps).sup() < 1e-12);
}

TEST_CASE("normalize stops immediately on a normal form") {
    GridSpec g = make_grid(2, 1.0, 9);
    SCIParams p;
    NormalizeResult r = normalize(poisson(g), p);
    CHECK(r.reason == Termination::converged);
    CHECK(r.effective_steps == 0);
    CHECK(r.certificate.ok);
    CHECK((r.eps - poisson(g)).sup() == 0.0);
    REQUIRE(r.trace.rows.size() == 1);
}

TEST_CASE("beltrami deformations normalize to zero") {
    GridSpec g = make_grid(1, 1.0, 33);
    SCIParams p;
    NormalizeResult r = normalize(named_scenario("beltrami").sample(g), p);
    CHECK(r.reason == Termination::converged);
    CHECK(r.eps.sup() < 1e-4);
    CHECK(r.certificate.ok);
    CHECK(r.eps.g.r >= 0.5);
}

TEST_CASE("smallness gate") {
    GridSpec g = make_grid(2, 1.0, 9);
    SCIParams p;
    Deformation big = 5.0 * poisson(g);
    std::string why;
    CHECK_FALSE(passes_gate(big, p, &why));
    CHECK_FALSE(why.empty());
    NormalizeResult r = normalize(big, p);
    CHECK(r.reason == Termination::gate);
    CHECK(std::string(to_string(r.reason)) == "gate");
    CHECK(passes_gate(poisson(g), p));
}

TEST_CASE("a correction step contracts the scrambled scenario") {
    GridSpec g = make_grid(2, 1.0, 11);
    Deformation e = named_scenario("g2").sample(g);
    SCIParams p;
    StepResult s = iterate_once(e, p.t0, p);
    CHECK(zeta(s.eps).sup() < 0.5 * zeta(e).sup());
}

TEST_CASE("dilation") {
    GridSpec g = make_grid(2, 0.5, 9);
    Deformation e(g);
    e.eps1[0] = Field(g, cd(0.3, 0.1));
    e.eps2[1] = coord_z(g, 0) * coord_zbar(g, 1);
    e.eps3[0] = coord_zbar(g, 0) * coord_zbar(g, 0);
    CHECK(bitwise_equal(dilate(e, 1.0), e));
    Deformation d = dilate(e, 2.0);
    CHECK(d.g.r == 1.0);
    CHECK((d.eps1[0] - Field(d.g, cd(1.2, 0.4))).sup() < 1e-15);
    CHECK(d.eps2[1].v == e.eps2[1].v);
    // derivative law for a monomial two-form coefficient
    for (int k = 0; k <= 2; ++k) {
        Field a = e.eps3[0], b = d.eps3[0];
        for (int j = 0; j < k; ++j) {
            a = diff(a, 0);
            b = diff(b, 0);
        }
        CHECK(b.sup() == doctest::Approx(std::pow(2.0, -2 - k) * a.sup()).epsilon(1e-12));
    }
    CHECK_THROWS_AS(dilate(e, 0.0), DomainError);
}

TEST_CASE("lambda transforms") {
    GridSpec g = make_grid(2, 1.0, 9);
    Deformation e = named_scenario("g2").sample(g);
    CHECK(bitwise_equal(lambda_transform(e, 1.0), e));
    CHECK(rel(lambda_transform(poisson(g), 3.0), 3.0 * poisson(g)) < 1e-15);
    Deformation l = lambda_transform(e, 0.25);
    CHECK((l.eps3[0] - 4.0 * e.eps3[0]).sup() < 1e-15);
    MCResidual m1 = mc_residual(l);
    for (int c = 0; c < 4; ++c) CHECK(m1.norms[c] < 1e-6);
    Deformation broken = e;
    broken.eps3[0] = broken.eps3[0] + 0.01 * coord_z(g, 0);
    CHECK(mc_residual(lambda_transform(broken, 0.25)).norms[2] > 1e-3);

    GenDiffeo b(g);
    b.B[pair_index(0, 3, 4)] = Field(g, 0.02);
    GenDiffeo b4 = lambda_on_diffeo(b, 4.0);
    CHECK((b4.B[pair_index(0, 3, 4)] - Field(g, 0.005)).sup() < 1e-18);
    for (const Field& f : b4.disp) CHECK(f.sup() == 0.0);
}

TEST_CASE("conjugation by lambda") {
    GridSpec g = make_grid(2, 1.0, 9);
    Deformation e = named_scenario("g2").sample(g);
    e.eps2[1] += 0.01 * coord_z(g, 1) * coord_zbar(g, 0);
    GenDiffeo F = test_flow(g);
    for (double t : {4.0, 0.3}) {
        GenDiffeo Ft = lambda_on_diffeo(F, t);
        Deformation lhs = act_on_deformation(Ft, lambda_transform(e, t)).eps;
        Deformation rhs = lambda_transform(act_on_deformation(F, e).eps, t);
        CHECK(rel(lhs, rhs) < 1e-12);
        Deformation printed_l = act_on_deformation(F, lambda_transform(e, t)).eps;
        Deformation printed_r = lambda_transform(act_on_deformation(Ft, e).eps, t);
        MESSAGE("t = " << t << ": Phi o lambda vs lambda o (lambda . Phi) differ by " << rel(printed_l, printed_r));
    }
}

TEST_CASE("rescaling") {
    GridSpec g = make_grid(2, 0.5, 9);
    CHECK(rescale_R(Deformation(g), 0.5).sup() == 0.0);
    Deformation e(g);
    e.eps1[0] = coord_z(g, 0);
    e.eps2[2] = 0.1 * coord_zbar(g, 1);
    e.eps3[0] = 0.05 * coord_z(g, 1);
    const double t = 0.5;
    Deformation a = rescale_R(e, t);
    Deformation b = lambda_transform(dilate(e, 1.0 / t), t * t);
    CHECK(bitwise_equal(a, b));
    CHECK(a.sup() <= e.sup());
    MESSAGE("|R_t e|_0 / |e|_0 at t = 1/2: " << a.sup() / e.sup());
    GridSpec g1 = make_grid(2, 1.0, 9);
    Deformation e1(g1);
    e1.eps1[0] = coord_z(g1, 0);
    e1.eps2[2] = 0.1 * coord_zbar(g1, 1);
    Deformation a1 = rescale_R(e1, t);
    CHECK(a1.g.r == 1.0);
    CHECK(a1.sup() == doctest::Approx(t * e1.sup()).epsilon(1e-12));
    Deformation off = e;
    off.eps1[0] = off.eps1[0] + Field(g, 0.1);
    CHECK_THROWS_AS(rescale_R(off, t), DomainError);
}

TEST_CASE("trace csv round trip") {
    IterationTrace tr;
    TraceRow r;
    r.d = 0;
    r.t = 4;
    r.r = 1;
    r.zeta[0] = 1.0 / 3;
    r.zeta[1] = 2e-5;
    r.zeta[2] = 7.5e-300;
    r.eps_k0 = 1.25;
    tr.rows.push_back(r);
    r.d = 1;
    r.t = 8;
    r.r = 0.9;
    tr.rows.push_back(r);
    IterationTrace back = IterationTrace::parse_csv(tr.csv());
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0].zeta[0] == tr.rows[0].zeta[0]);
    CHECK(back.rows[0].zeta[2] == tr.rows[0].zeta[2]);
    CHECK(back.rows[1].r == 0.9);
    CHECK(back.csv() == tr.csv());

    CHECK_THROWS_AS(IterationTrace::parse_csv(""), DomainError);
    CHECK_THROWS_AS(IterationTrace::parse_csv("a,b\n1,2\n"), DomainError);
    CHECK_THROWS_AS(IterationTrace::parse_csv(std::string(IterationTrace::header()) + "\n1,2,3\n"), DomainError);
    CHECK_THROWS_AS(IterationTrace::parse_csv(std::string(IterationTrace::header()) + "\n"), DomainError);
}

TEST_CASE("traces are reproducible") {
    GridSpec g = make_grid(1, 1.0, 17);
    Deformation e = named_scenario("beltrami").sample(g);
    SCIParams p;
    NormalizeResult a = normalize(e, p), b = normalize(e, p);
    CHECK(a.trace.csv() == b.trace.csv());
    CHECK(summary_json(a, p) == summary_json(b, p));
    for (const TraceRow& row : a.trace.rows) CHECK(row.wall_ms == 0.0);
}

TEST_CASE("exponent fit") {
    CHECK(fit_exponent({1e-2, 1e-4, 1e-8}) == doctest::Approx(2.0));
    CHECK(fit_exponent({1e-2}) == 0.0);
}
