#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcn {

using cd = std::complex<double>;

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Tensor lattice on the product of squares [-r,r]^2 in each complex coordinate.
// Real axes are ordered (x1, y1, x2, y2); the last axis varies fastest.
struct GridSpec {
    int n = 1;
    double r = 1.0;
    int m = 9;
    double h = 0.25;

    int dims() const { return 2 * n; }
    std::size_t size() const;
    std::size_t stride(int axis) const;
    double coord(int i) const { return -r + h * i; }
    std::array<int, 4> unravel(std::size_t idx) const;
    std::size_t ravel(const std::array<int, 4>& ij) const;
    // real coordinates of a node
    std::array<double, 4> point(std::size_t idx) const;
    std::size_t origin() const;
    bool same_lattice(const GridSpec& o) const;
};

GridSpec make_grid(int n, double r, int m);

// Scalar complex field sampled on a GridSpec.
struct Field {
    GridSpec g;
    std::vector<cd> v;

    Field() = default;
    explicit Field(const GridSpec& grid, cd value = 0.0) : g(grid), v(grid.size(), value) {}

    std::size_t size() const { return v.size(); }
    cd& operator[](std::size_t i) { return v[i]; }
    const cd& operator[](std::size_t i) const { return v[i]; }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(cd s);
    double sup() const;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cd s, Field a);
Field operator*(const Field& a, const Field& b);
Field operator-(Field a);
Field conj(Field a);
Field real_part(Field a);
Field imag_part(Field a);

// Samples f(x) where x holds the 2n real coordinates.
Field sample(const GridSpec& g, const std::function<cd(const double*)>& f);

// Complex coordinate z_i (i zero-based) and its conjugate as fields.
Field coord_z(const GridSpec& g, int i);
Field coord_zbar(const GridSpec& g, int i);

// Fourth-order finite difference along one real axis (one-sided near the ends).
Field diff(const Field& f, int axis);
// Wirtinger derivatives d/dz_i and d/dzbar_i.
Field dz(const Field& f, int i);
Field dzbar(const Field& f, int i);

inline constexpr int kMaxNormDegree = 5;

// Sup over nodes of all real partial derivatives of order <= k.
double ck_norm(const Field& f, int k, int kmax = kMaxNormDegree);
double ck_norm(const std::vector<const Field*>& comps, int k, int kmax = kMaxNormDegree);

// Text snapshot: a "gcnorm-snapshot 1" line, then "n r m components", then one
// "re im" line per node for each component in turn (row-major node order).
void save_snapshot(std::ostream& os, const std::vector<const Field*>& comps);
std::vector<Field> load_snapshot(std::istream& is);

}  // namespace gcn
