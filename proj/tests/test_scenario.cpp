#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gcn/calculus.hpp"
#include "gcn/scenario.hpp"

using namespace gcn;
using oracle::Poly;
using oracle::QC;
using oracle::Rational;

TEST_CASE("holomorphic poisson structures are normal forms") {
    Scenario s = named_scenario("poisson");
    CHECK(s.integrable);
    CHECK(s.normal_form);
    CHECK(oracle::mc(s.seed).is_zero());
    GridSpec g = make_grid(2, 1.0, 9);
    Deformation e = s.sample(g);
    CHECK(zeta(e).sup() == 0.0);
    CHECK((e.eps1[0] - coord_z(g, 0)).sup() < 1e-15);
    CHECK(is_normal_form(e, 1e-10).ok);

    Scenario q = named_scenario("poisson_sq");
    CHECK(q.name == "poisson_sq");
    CHECK(is_normal_form(q.sample(g), 1e-10).ok);

    CHECK_THROWS_AS(gen_holomorphic_poisson(2, Poly::zbar(0)), DomainError);
    CHECK_THROWS_AS(gen_holomorphic_poisson(1, Poly::z(0)), DomainError);
}

TEST_CASE("gauge scrambling with a constant-plus-linear two-form") {
    Scenario s = named_scenario("g2");
    CHECK(s.integrable);
    CHECK_FALSE(s.normal_form);
    REQUIRE(s.scrambler.B.size() == 6);
    GridSpec g = make_grid(2, 1.0, 9);
    Deformation e = s.sample(g);
    // the (0,2) part of B: dx -> dzbar / 2, dy -> i dzbar / 2
    Field b02 = sample(g, [](const double* x) { return cd(0, 1e-2 * (1 + x[1]) / 4); });
    CHECK((e.eps3[0] - b02).sup() < 5e-4);
    CHECK(zeta(e).sup() > 1e-3);
    MCResidual r = mc_residual(e);
    for (double v : r.norms) CHECK(v < 1e-6);
    CHECK_FALSE(is_normal_form(e, 1e-6).ok);
}

TEST_CASE("identity scrambler leaves the seed alone") {
    Scenario base = named_scenario("poisson");
    Scrambler id;
    id.B.assign(6, Poly());
    Scenario s = gen_gauge_scrambled(base, id);
    CHECK(s.scrambler.is_trivial());
    CHECK(s.normal_form);
    GridSpec g = make_grid(2, 1.0, 9);
    CHECK((s.sample(g) - base.sample(g)).sup() == 0.0);
}

TEST_CASE("scrambler validation") {
    Scenario base = named_scenario("poisson");
    Scrambler bad;
    bad.B.assign(6, Poly());
    // y1 dx1 ^ dy2 is not closed
    bad.B[pair_index(0, 3, 4)] = QC(Rational(1, 100)) * real_y(0);
    CHECK_THROWS_AS(gen_gauge_scrambled(base, bad), DomainError);

    Scrambler complex_b;
    complex_b.B.assign(6, Poly());
    complex_b.B[pair_index(0, 1, 4)] = Poly::constant(QC(0, Rational(1, 100)));
    CHECK_THROWS_AS(gen_gauge_scrambled(base, complex_b), DomainError);

    Scrambler big;
    big.B.assign(6, Poly());
    big.B[pair_index(0, 1, 4)] = Poly::constant(QC(1));
    CHECK_THROWS_AS(gen_gauge_scrambled(base, big), DomainError);

    Scrambler short_b;
    short_b.B.assign(3, Poly());
    CHECK_THROWS_AS(gen_gauge_scrambled(base, short_b), DomainError);

    Scrambler two_form_v;
    two_form_v.v = oracle::PolySection(2);
    two_form_v.v.add(0b0011u, Poly::constant(QC(Rational(1, 100))));
    CHECK_THROWS_AS(gen_gauge_scrambled(base, two_form_v), DomainError);

    CHECK_THROWS_AS(named_scenario("nonesuch"), DomainError);
}

TEST_CASE("beltrami scenarios") {
    Scenario b = named_scenario("beltrami");
    CHECK(b.n == 1);
    CHECK(b.integrable);
    CHECK_FALSE(b.normal_form);
    CHECK(named_scenario("beltrami", 0.0).normal_form);

    Scenario v = gen_beltrami(1, QC(Rational(1, 20)) * Poly::zbar(0));
    CHECK(v.integrable);
    GridSpec g = make_grid(1, 1.0, 33);
    CHECK(mc_residual(v.sample(g)).norms[1] < 1e-10);

    CHECK_THROWS_AS(gen_beltrami(1, Poly::constant(QC(1))), DomainError);
    CHECK_THROWS_AS(gen_beltrami(2, Poly()), DomainError);
}

TEST_CASE("recipes round trip through json") {
    for (const std::string& name : scenario_names()) {
        Scenario s = named_scenario(name);
        Scenario back = scenario_from_json(scenario_to_json(s));
        CHECK(back.name == s.name);
        CHECK(back.n == s.n);
        CHECK(back.seed == s.seed);
        CHECK(back.scrambler.B == s.scrambler.B);
        CHECK(back.scrambler.v == s.scrambler.v);
        CHECK(back.integrable == s.integrable);
        CHECK(back.normal_form == s.normal_form);
    }
    CHECK_THROWS_AS(scenario_from_json("{"), DomainError);
    CHECK_THROWS_AS(scenario_from_json(R"({"schema": 2})"), DomainError);
    CHECK_THROWS_AS(scenario_from_json(R"({"schema": 1, "name": "x"})"), DomainError);
}
