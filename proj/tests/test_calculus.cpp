#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gcn/calculus.hpp"
#include "gcn/corpus.hpp"
#include "test_util.hpp"

using namespace gcn;
using oracle::Poly;
using oracle::PolySection;
using oracle::QC;
using oracle::Rational;

namespace {

PolySection one(int n, Mask s, const Poly& p) {
    PolySection out(n);
    out.add(s, p);
    return out;
}

}  // namespace

TEST_CASE("wirtinger derivatives") {
    GridSpec g = make_grid(1, 1.0, 33);
    Field z = coord_z(g, 0), zb = coord_zbar(g, 0);
    CHECK(dzbar(z, 0).sup() < 1e-12);
    CHECK((dzbar(zb, 0) - Field(g, 1.0)).sup() < 1e-12);
    Field r2 = z * zb;
    CHECK((dz(r2, 0) - zb).sup() < 1e-12);
}

TEST_CASE("dbar examples") {
    GridSpec g = make_grid(2, 1.0, 17);
    // holomorphic bivector z1 d1^d2
    Section beta(g);
    beta.c.emplace(0b0011u, coord_z(g, 0));
    CHECK(dbar(beta).sup() < 1e-12);
    // zbar_1 dzbar_2 -> dzbar_1 ^ dzbar_2
    Section s(g);
    s.c.emplace(0b1000u, coord_zbar(g, 0));
    Section d = dbar(s);
    CHECK((d.get(0b1100u) - Field(g, 1.0)).sup() < 1e-12);
    // dbar o dbar = 0; differences along distinct axes commute, so only roundoff remains
    auto p = random_section(11, 2, 1, 0, 6);
    Section ps = p.sample(g);
    CHECK(dbar(dbar(ps)).sup() < 1e-9 * std::max(1.0, ps.sup()));
}

TEST_CASE("oracle bracket examples") {
    const int n = 2;
    Poly z1 = Poly::z(0), z2 = Poly::z(1);
    // [d1, z1 d2] = d2
    CHECK(oracle::bracket(one(n, 0b01, Poly::constant(1)), one(n, 0b10, z1)) == one(n, 0b10, Poly::constant(1)));
    // [dzbar1, dzbar2] = 0
    CHECK(oracle::bracket(one(n, 0b0100, Poly::constant(1)), one(n, 0b1000, Poly::constant(1))).is_zero());
    // [f d1, g d2] = f d1(g) d2 - g d2(f) d1
    Poly f = z1 * z2 + Poly::zbar(0), g = z2 * z2 * z1;
    PolySection lhs = oracle::bracket(one(n, 0b01, f), one(n, 0b10, g));
    PolySection rhs = one(n, 0b10, f * g.d_z(0)) - one(n, 0b01, g * f.d_z(1));
    CHECK(lhs == rhs);
    // [d1^d2, f] = -d1(f) d2 + d2(f) d1
    PolySection bf = oracle::bracket(one(n, 0b11, Poly::constant(1)), one(n, 0, f));
    CHECK(bf == one(n, 0b10, -f.d_z(0)) + one(n, 0b01, f.d_z(1)));
    // [beta, beta] vanishes for a bivector in two dimensions
    PolySection beta = one(n, 0b11, z1 * z2 + Poly::zbar(1));
    CHECK(oracle::bracket(beta, beta).is_zero());
    // [d1, dzbar1] = 0
    CHECK(oracle::bracket(one(n, 0b0001, Poly::constant(1)), one(n, 0b0100, Poly::constant(1))).is_zero());
}

TEST_CASE("grid bracket agrees with oracle on the corpus") {
    const int n = 2;
    GridSpec g = make_grid(n, 1.0, 17);
    const std::pair<int, int> bds[] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    std::uint64_t seed = 1;
    for (auto a : bds)
        for (auto b : bds) {
            if (a.first + a.second + b.first + b.second - 1 > 3) continue;
            auto pa = random_section(seed++, n, a.first, a.second, 3);
            auto pb = random_section(seed++, n, b.first, b.second, 3);
            PolySection exact = oracle::bracket(pa, pb);
            Section grid = bracket(pa.sample(g), pb.sample(g));
            double scale = std::max(1.0, exact.sample(g).sup());
            INFO("bidegrees ", a.first, a.second, " ", b.first, b.second);
            CHECK(testutil::section_error(grid, exact) < 1e-9 * scale);
        }
}

TEST_CASE("graded antisymmetry and Leibniz in exact arithmetic") {
    const int n = 2;
    const std::pair<int, int> bds[] = {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    std::uint64_t seed = 100;
    for (auto a : bds)
        for (auto b : bds) {
            const int p = a.first + a.second, q = b.first + b.second;
            auto pa = random_section(seed++, n, a.first, a.second, 2, 2);
            auto pb = random_section(seed++, n, b.first, b.second, 2, 2);
            PolySection ab = oracle::bracket(pa, pb), ba = oracle::bracket(pb, pa);
            const int sign = (((p - 1) * (q - 1)) & 1) ? 1 : -1;
            CHECK(ab == QC(sign) * ba);
        }
    // Leibniz: [P, Q ^ R] = [P, Q] ^ R + (-1)^{(|P|-1)|Q|} Q ^ [P, R]
    for (int trial = 0; trial < 6; ++trial) {
        auto P = random_section(200 + trial, n, 1, trial % 2, 2, 2);
        auto Q = random_section(300 + trial, n, trial % 2, 1 - trial % 2, 2, 2);
        auto R = random_section(400 + trial, n, 1, 0, 2, 2);
        const int p = 1 + trial % 2, q = 1;
        PolySection lhs = oracle::bracket(P, oracle::wedge(Q, R));
        PolySection rhs = oracle::wedge(oracle::bracket(P, Q), R);
        const int s = (((p - 1) * q) & 1) ? -1 : 1;
        rhs = rhs + QC(s) * oracle::wedge(Q, oracle::bracket(P, R));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("derivation property holds exactly in the oracle") {
    const int n = 2;
    const std::pair<int, int> left[] = {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    const std::pair<int, int> right[] = {{0, 0}, {1, 0}, {0, 1}};
    std::uint64_t seed = 500;
    for (auto a : left)
        for (auto b : right) {
            auto pa = random_section(seed++, n, a.first, a.second, 3);
            auto pb = random_section(seed++, n, b.first, b.second, 3);
            const int deg_a = a.first + a.second;
            PolySection lhs = oracle::dbar(oracle::bracket(pa, pb));
            const int sign = ((deg_a - 1) & 1) ? -1 : 1;
            PolySection rhs = oracle::bracket(oracle::dbar(pa), pb) + QC(sign) * oracle::bracket(pa, oracle::dbar(pb));
            CHECK(lhs == rhs);
        }
}

TEST_CASE("courant bracket examples") {
    GridSpec g = make_grid(1, 1.0, 17);
    RealPair u(g), v(g);
    // X = d/dx, eta = x dy -> L_X eta = dy
    u.X[0] = Field(g, 1.0);
    v.xi[1] = real_part(coord_z(g, 0));
    RealPair w = courant_bracket(u, v);
    CHECK(w.X[0].sup() + w.X[1].sup() < 1e-12);
    CHECK(w.xi[0].sup() < 1e-12);
    CHECK((w.xi[1] - Field(g, 1.0)).sup() < 1e-12);
    // constants bracket to zero
    RealPair c(g);
    c.X[1] = Field(g, 2.0);
    c.xi[0] = Field(g, 3.0);
    RealPair cc = courant_bracket(c, c);
    for (int a = 0; a < 2; ++a) CHECK(cc.X[a].sup() + cc.xi[a].sup() < 1e-12);
    // [u, u] = d(xi(X)) for the Dorfman bracket
    RealPair s(g);
    Field x = real_part(coord_z(g, 0)), y = imag_part(coord_z(g, 0));
    s.X[0] = y * y;
    s.X[1] = x;
    s.xi[0] = x * y;
    s.xi[1] = x * x;
    RealPair ss = courant_bracket(s, s);
    Field pairing = s.X[0] * s.xi[0] + s.X[1] * s.xi[1];
    CHECK(ss.X[0].sup() + ss.X[1].sup() < 1e-12);
    CHECK((ss.xi[0] - diff(pairing, 0)).sup() < 1e-10);
    CHECK((ss.xi[1] - diff(pairing, 1)).sup() < 1e-10);
}

TEST_CASE("maurer-cartan residual examples") {
    GridSpec g = make_grid(2, 1.0, 17);
    Deformation beta(g);
    beta.eps1[0] = coord_z(g, 0);
    MCResidual r = mc_residual(beta);
    for (double v : r.norms) CHECK(v < 1e-12);

    GridSpec g1 = make_grid(1, 1.0, 17);
    Deformation mu(g1);
    mu.eps2[0] = Field(g1, 0.05);
    MCResidual r1 = mc_residual(mu);
    for (double v : r1.norms) CHECK(v == 0.0);

    // mixed z1 d1 (x) dzbar1 at n = 2 against the oracle
    PolySection e(2);
    e.add(0b0101u, Poly::z(0));
    e.add(0b1010u, Poly::zbar(0));
    PolySection exact = oracle::mc(e);
    Deformation eg = from_section(e.sample(g));
    MCResidual rg = mc_residual(eg);
    Section all = rg.c30 + rg.c21 + rg.c12 + rg.c03;
    CHECK(testutil::section_error(all, exact) < 1e-10);
    CHECK(!exact.part(1, 2).is_zero());
}

TEST_CASE("normal form test") {
    GridSpec g = make_grid(2, 1.0, 17);
    Deformation beta(g);
    beta.eps1[0] = coord_z(g, 0) + coord_z(g, 1) * coord_z(g, 1);
    CHECK(is_normal_form(beta, 1e-8).ok);
    Deformation mixed = beta;
    mixed.eps2[1] = Field(g, 1e-3);
    CHECK(!is_normal_form(mixed, 1e-8).ok);
    Deformation nh(g);
    nh.eps1[0] = coord_zbar(g, 0);
    auto rep = is_normal_form(nh, 1e-8);
    CHECK(!rep.ok);
    CHECK(rep.dbar_eps1 == doctest::Approx(1.0));
}

TEST_CASE("deformed differential") {
    GridSpec g = make_grid(2, 1.0, 17);
    Deformation zero(g);
    Section f = scalar_section(coord_zbar(g, 1) * coord_z(g, 0));
    CHECK((deformed_differential(zero, f) - dbar(f)).sup() < 1e-12);
    // beta = d1^d2 on a function gives the hamiltonian vector field
    Deformation beta(g);
    beta.eps1[0] = Field(g, 1.0);
    Section df = deformed_differential(beta, f);
    Field fz1 = dz(f.get(0), 0), fz2 = dz(f.get(0), 1);
    CHECK((df.get(0b01u) - fz2).sup() < 1e-10);
    CHECK((df.get(0b10u) + fz1).sup() < 1e-10);
}
