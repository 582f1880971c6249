#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gcn/smoothing.hpp"

using namespace gcn;

namespace {

std::vector<Field> analytic_corpus(const GridSpec& g, int count = 20) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<Field> out;
    for (int i = 0; i < count; ++i) {
        const cd a(u(rng), u(rng)), b(u(rng), u(rng));
        out.push_back(sample(g, [&](const double* x) {
            const cd z(x[0], x[1]);
            return std::exp(a * z) + std::sin(b * std::conj(z));
        }));
    }
    return out;
}

}  // namespace

TEST_CASE("spectral basis round trip") {
    const SpectralBasis& b = spectral_basis(33);
    std::vector<double> f(33);
    for (int i = 0; i < 33; ++i) f[i] = std::sin(0.3 * i) + 0.01 * i * i;
    auto back = b.inverse(b.forward(f));
    for (int i = 0; i < 33; ++i) CHECK(back[i] == doctest::Approx(f[i]).epsilon(1e-12));
}

TEST_CASE("low degree and constant fields pass unchanged") {
    GridSpec g = make_grid(1, 1.0, 33);
    Field c(g, cd(1.5, -2.0));
    CHECK((smooth(c, 2.5) - c).sup() < 1e-13);
    Field p = sample(g, [](const double* x) { return cd(x[0] * x[0] * x[0] - x[1], x[0] * x[1] * x[1]); });
    CHECK((smooth(p, 3.2) - p).sup() < 1e-12);
    CHECK((smooth(p, 40.0) - p).sup() == 0.0);
}

TEST_CASE("high modes are removed") {
    GridSpec g = make_grid(1, 1.0, 33);
    const SpectralBasis& b = spectral_basis(33);
    auto mode = b.orthogonal_mode(9);
    Field f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = mode[g.unravel(i)[0]];
    CHECK(smooth(f, 6.0).sup() < 1e-12);
    auto d = smoothing_defect(f, 6.0, 1, 0);
    REQUIRE(d.has_value());
    CHECK(d->growth < 1e-10);
    CHECK_THROWS_AS(smooth(f, 1.0), DomainError);
    CHECK_FALSE(smoothing_defect(Field(g), 4.0, 1, 0).has_value());
}

TEST_CASE("smoothing is a linear projection") {
    GridSpec g = make_grid(2, 1.0, 9);
    Field f = sample(g, [](const double* x) { return cd(std::exp(x[0] * x[3]), std::cos(2 * x[1] - x[2])); });
    Field h = sample(g, [](const double* x) { return cd(x[0] * x[1] * x[2] * x[3], 0); });
    Field s = smooth(f, 3.0);
    CHECK((smooth(s, 3.0) - s).sup() < 1e-12);
    CHECK((smooth(f + cd(0, 3) * h, 3.0) - s - cd(0, 3) * smooth(h, 3.0)).sup() < 1e-12);
}

TEST_CASE("smooth fields converge for large t") {
    GridSpec g = make_grid(1, 1.0, 65);
    Field f = analytic_corpus(g, 1)[0];
    auto d = smoothing_defect(f, 30.0, 2, 0);
    REQUIRE(d.has_value());
    CHECK(d->approximation < 1e-6);
}

TEST_CASE("smoothing constants are stable across grids") {
    const int pq[3][2] = {{1, 0}, {2, 1}, {3, 1}};
    double G[2][3] = {}, A[2][3] = {};
    const int ms[2] = {33, 65};
    for (int gi = 0; gi < 2; ++gi) {
        GridSpec g = make_grid(1, 1.0, ms[gi]);
        for (const Field& f : analytic_corpus(g))
            for (double t : {2.0, 4.0, 8.0, 16.0})
                for (int k = 0; k < 3; ++k) {
                    auto d = smoothing_defect(f, t, pq[k][0], pq[k][1]);
                    REQUIRE(d.has_value());
                    G[gi][k] = std::max(G[gi][k], d->growth);
                    A[gi][k] = std::max(A[gi][k], d->approximation);
                }
    }
    for (int k = 0; k < 3; ++k) {
        MESSAGE("(p,q) = (" << pq[k][0] << "," << pq[k][1] << "): growth " << G[0][k] << " / " << G[1][k]
                            << ", approximation " << A[0][k] << " / " << A[1][k]);
        CHECK(std::abs(G[1][k] / G[0][k] - 1) <= 0.2);
        CHECK(std::abs(A[1][k] / A[0][k] - 1) <= 0.2);
    }
}
