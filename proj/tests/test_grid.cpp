#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gcn/flow.hpp"
#include "gcn/section.hpp"
#include "gcn/spline.hpp"

using namespace gcn;

TEST_CASE("make_grid") {
    GridSpec a = make_grid(1, 1.0, 9);
    CHECK(a.size() == 81);
    CHECK(a.h == doctest::Approx(0.25));
    GridSpec b = make_grid(2, 0.5, 9);
    CHECK(b.size() == 6561);
    CHECK(b.h == doctest::Approx(0.125));
    CHECK_THROWS_AS(make_grid(1, 1.0, 8), DomainError);
    CHECK_THROWS_AS(make_grid(3, 1.0, 9), DomainError);
    CHECK_THROWS_AS(make_grid(1, 1.5, 9), DomainError);
    auto p = b.point(b.origin());
    for (int a2 = 0; a2 < 4; ++a2) CHECK(p[a2] == 0.0);
}

TEST_CASE("restriction") {
    GridSpec g = make_grid(1, 1.0, 33);
    Field c(g, cd(2.0, -1.0));
    Field rc = restrict_to(c, 0.5);
    CHECK((rc - Field(rc.g, cd(2.0, -1.0))).sup() < 1e-14);

    Field z2 = coord_z(g, 0) * coord_z(g, 0);
    Field rz = restrict_to(z2, 0.5);
    Field exact = coord_z(rz.g, 0) * coord_z(rz.g, 0);
    CHECK((rz - exact).sup() < 1e-12);

    Deformation e(make_grid(2, 1.0, 13));
    e.eps2[1] = sample(e.g, [](const double* x) { return cd(std::sin(3 * x[0]) * x[3], std::cos(x[1] * x[2])); });
    Deformation re = restrict_to(e, 0.5);
    const double tol = std::pow(e.g.h, 4) * 10;
    CHECK(re.sup() <= e.sup() + tol);
    CHECK(re.g.r == 0.5);

    GenDiffeo f(make_grid(1, 1.0, 17));
    f.B[0] = Field(f.g, 0.3);
    GenDiffeo rf = restrict_to(f, 0.25);
    CHECK(std::abs(rf.B[0][7] - cd(0.3)) < 1e-14);
    CHECK_THROWS_AS(restrict_to(c, 1.5), DomainError);
}

TEST_CASE("ck norms") {
    GridSpec g = make_grid(1, 1.0, 33);
    CHECK(ck_norm(Field(g, cd(3, 4)), 2) == doctest::Approx(5.0));
    Field x = real_part(coord_z(g, 0));
    CHECK(ck_norm(x, 1) == doctest::Approx(1.0).epsilon(1e-12));
    GridSpec g1 = make_grid(1, 1.0, 65);
    Field s = sample(g1, [](const double* p) { return cd(std::sin(2 * p[0])); });
    CHECK(ck_norm(s, 3) == doctest::Approx(8.0).epsilon(2e-3));
    double prev = 0;
    for (int k = 0; k <= 4; ++k) {
        const double v = ck_norm(s, k);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("diffeomorphism norms") {
    GridSpec g = make_grid(1, 1.0, 33);
    GenDiffeo id(g);
    for (int k = 0; k <= 3; ++k) CHECK(diffeo_norm(id, k) == 0.0);
    GenDiffeo b(g);
    b.B[0] = Field(g, 0.2);
    CHECK(diffeo_norm(b, 2) == doctest::Approx(0.2));
    GenDiffeo q(g);
    Field x = real_part(coord_z(g, 0));
    q.disp[0] = 0.01 * x * x;
    CHECK(diffeo_norm(q, 1) == doctest::Approx(0.02).epsilon(1e-10));
}

TEST_CASE("graded pieces") {
    GridSpec g = make_grid(2, 1.0, 9);
    Deformation zero(g);
    Graded z = decompose(zero);
    CHECK(z.eps1.sup() == 0.0);
    CHECK(z.eps2.sup() == 0.0);
    CHECK(z.eps3.sup() == 0.0);

    Deformation mu(g);
    mu.eps2[0] = 0.1 * coord_zbar(g, 1);
    Graded m = decompose(mu);
    CHECK(m.eps1.sup() == 0.0);
    CHECK(m.eps3.sup() == 0.0);
    CHECK((m.eps2 - mu).sup() == 0.0);

    Deformation one(make_grid(1, 1.0, 9));
    CHECK(one.eps1.empty());
    CHECK(one.eps3.empty());

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    Deformation e(g);
    for (Field* f : e.fields_mut())
        for (cd& v : f->v) v = cd(u(rng), u(rng));
    Deformation back = recompose(decompose(e));
    for (std::size_t c = 0; c < e.fields().size(); ++c) CHECK(back.fields()[c]->v == e.fields()[c]->v);
    Deformation ze = zeta(e);
    Deformation zz = zeta(ze);
    for (std::size_t c = 0; c < ze.fields().size(); ++c) CHECK(zz.fields()[c]->v == ze.fields()[c]->v);
    CHECK(ze.eps1[0].sup() == 0.0);
    for (int k = 0; k <= 2; ++k) CHECK(ck_norm(ze.fields(), k) <= ck_norm(e.fields(), k));
    Deformation lin = zeta(e + 2.0 * mu) - zeta(e) - 2.0 * zeta(mu);
    CHECK(lin.sup() < 1e-15);
}

TEST_CASE("interpolation") {
    GridSpec g = make_grid(1, 1.0, 17);
    Field f = sample(g, [](const double* x) { return cd(std::exp(x[0]) * x[1], x[0] * x[0]); });
    auto p = g.point(40);
    CHECK(interpolate(f, p.data()) == f[40]);
    Field lin = sample(g, [](const double* x) { return cd(2 * x[0] - x[1] + 0.5, x[1]); });
    const double mid[2] = {0.5 * g.h - 1, 0.3};
    CHECK(std::abs(interpolate(lin, mid) - cd(2 * mid[0] - mid[1] + 0.5, mid[1])) < 1e-13);
    Field z3 = coord_z(g, 0) * coord_z(g, 0) * coord_z(g, 0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int i = 0; i < 20; ++i) {
        const double x[2] = {u(rng), u(rng)};
        const cd z(x[0], x[1]);
        CHECK(std::abs(interpolate(z3, x) - z * z * z) < std::pow(g.h, 3));
    }
}

TEST_CASE("interpolation inequality ratio is bounded on the analytic corpus") {
    GridSpec g = make_grid(1, 1.0, 65);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const cd a(u(rng), u(rng)), b(u(rng), u(rng));
        Field f = sample(g, [&](const double* x) {
            const cd z(x[0], x[1]);
            return std::exp(a * z) + std::sin(b * std::conj(z));
        });
        double nk[5];
        for (int k = 0; k <= 4; ++k) nk[k] = ck_norm(f, k);
        for (int l = 0; l <= 4; ++l)
            for (int m = l; m <= 4; ++m)
                for (int n = m; n <= 4; ++n) {
                    if (n == l) continue;
                    const double ratio =
                        std::pow(nk[m], n - l) / (std::pow(nk[n], m - l) * std::pow(nk[l], n - m));
                    worst = std::max(worst, ratio);
                }
    }
    MESSAGE("interpolation inequality bound on the corpus: " << worst);
    CHECK(std::isfinite(worst));
    CHECK(worst < 10.0);
}

TEST_CASE("snapshot round trip") {
    GridSpec g = make_grid(2, 0.75, 9);
    Deformation e(g);
    e.eps1[0] = sample(g, [](const double* x) { return cd(std::sin(x[0]) / 3, x[3] * x[2]); });
    e.eps3[0] = Field(g, cd(1.0 / 7, -2.0 / 3));
    std::stringstream ss;
    save_snapshot(ss, e.fields());
    std::vector<Field> back = load_snapshot(ss);
    REQUIRE(back.size() == e.fields().size());
    CHECK(back[0].g.same_lattice(g));
    for (std::size_t c = 0; c < back.size(); ++c) CHECK(back[c].v == e.fields()[c]->v);

    std::stringstream bad1("gcnorm-snapshot 2\n1 1 9 1\n");
    CHECK_THROWS_AS(load_snapshot(bad1), DomainError);
    std::stringstream bad2("gcnorm-snapshot 1\n1 1 9 1\n0 0\n");
    CHECK_THROWS_AS(load_snapshot(bad2), DomainError);
    std::stringstream bad3("gcnorm-snapshot 1\n1 1 8 1\n");
    CHECK_THROWS_AS(load_snapshot(bad3), DomainError);
}
