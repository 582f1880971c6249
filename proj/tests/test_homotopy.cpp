#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gcn/calculus.hpp"
#include "gcn/cauchy.hpp"
#include "gcn/corpus.hpp"

using namespace gcn;

TEST_CASE("cauchy transform of zero and of simple fields") {
    GridSpec g = make_grid(1, 1.0, 33);
    CHECK(cauchy_transform(Field(g), 0).sup() == 0.0);
    Field one(g, 1.0);
    CHECK((dzbar(cauchy_transform(one, 0), 0) - one).sup() < 1e-6);
    Field zz = coord_z(g, 0) * coord_zbar(g, 0);
    CHECK((dzbar(cauchy_transform(zz, 0), 0) - zz).sup() < 1e-4);
}

TEST_CASE("transform is linear") {
    GridSpec g = make_grid(1, 1.0, 17);
    Field a = coord_z(g, 0) * coord_z(g, 0), b = coord_zbar(g, 0);
    Field lhs = cauchy_transform(a + cd(0, 2) * b, 0);
    Field rhs = cauchy_transform(a, 0) + cd(0, 2) * cauchy_transform(b, 0);
    CHECK((lhs - rhs).sup() < 1e-12 * rhs.sup());
}

TEST_CASE("homotopy of a constant one-form") {
    GridSpec g = make_grid(1, 1.0, 33);
    Section s(g);
    s.at(0b10u) = Field(g, 1.0);
    Section p = homotopy_P(s);
    CHECK((dbar(p) - s).sup() < 1e-6);
    CHECK(homotopy_P(Section(g)).sup() == 0.0);
}

TEST_CASE("constant two-form at n = 2") {
    GridSpec g = make_grid(2, 1.0, 13);
    Section s(g);
    s.at(0b1100u) = Field(g, cd(0.5, 0.25));
    Section p = homotopy_P(s);
    // P(c dzbar_1 ^ dzbar_2) = -(T_2 c) dzbar_1
    Field expect = -1.0 * cauchy_transform(Field(g, cd(0.5, 0.25)), 1);
    CHECK((p.get(0b0100u) - expect).sup() < 1e-14);
    CHECK(p.get(0b1000u).sup() == 0.0);
    CHECK((dbar(p) - s).sup() < 1e-5);
}

TEST_CASE("closed forms are inverted") {
    GridSpec g = make_grid(2, 1.0, 13);
    Field z1 = coord_z(g, 0), zb1 = coord_zbar(g, 0), zb2 = coord_zbar(g, 1);
    Section f = scalar_section(z1 * zb2 * zb2 + zb1 * zb1 * coord_z(g, 1));
    Section u = dbar(f);
    CHECK((dbar(homotopy_P(u)) - u).sup() < 1e-4);
}

TEST_CASE("chain homotopy on the corpus") {
    double prev = 0;
    for (int m : {17, 33}) {
        GridSpec g = make_grid(1, 1.0, m);
        double worst = 0;
        for (int contra : {0, 1})
            for (const auto& ps : section_corpus(1, contra, 1, 3, 5)) {
                Section s = ps.sample(g);
                Section r = dbar(homotopy_P(s)) + homotopy_P(dbar(s)) - s;
                worst = std::max(worst, r.sup());
            }
        CHECK(worst < 5e-3);
        if (prev > 0) CHECK(prev / worst > 1.8);
        prev = worst;
    }
    GridSpec g2 = make_grid(2, 1.0, 13);
    for (int cov : {1, 2})
        for (const auto& ps : section_corpus(2, 0, cov, 2, 3)) {
            Section s = ps.sample(g2);
            Section r = dbar(homotopy_P(s)) + homotopy_P(dbar(s)) - s;
            CHECK(r.sup() < 5e-2 * std::max(1.0, s.sup()));
        }
}

TEST_CASE("boundedness ratio is recorded") {
    GridSpec g = make_grid(1, 1.0, 33);
    double worst = 0;
    for (const auto& ps : section_corpus(1, 0, 1, 3, 10)) {
        Section s = ps.sample(g);
        Section p = homotopy_P(s);
        for (int k = 0; k <= 3; ++k) worst = std::max(worst, p.ck(k) / s.ck(k));
    }
    MESSAGE("|P s|_k / |s|_k over the corpus: " << worst);
    CHECK(std::isfinite(worst));
    CHECK(worst < 10.0);
}
