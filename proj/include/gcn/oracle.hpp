#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>

#include "gcn/section.hpp"

namespace gcn::oracle {

using Rational = boost::multiprecision::cpp_rational;

// Gaussian rational a + b i.
struct QC {
    Rational re, im;

    QC() = default;
    QC(Rational a, Rational b = 0) : re(std::move(a)), im(std::move(b)) {}
    QC(long a) : re(a), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }
    cd to_complex() const;
};

QC operator+(const QC& a, const QC& b);
QC operator-(const QC& a, const QC& b);
QC operator-(const QC& a);
QC operator*(const QC& a, const QC& b);
bool operator==(const QC& a, const QC& b);

// Exponents of (z_1, z_2, zbar_1, zbar_2).
using Monomial = std::array<int, 4>;

// Polynomial in z and zbar with exact Gaussian-rational coefficients.
class Poly {
public:
    Poly() = default;
    static Poly constant(const QC& c);
    static Poly z(int i);
    static Poly zbar(int i);
    static Poly monomial(const Monomial& e, const QC& c);

    const std::map<Monomial, QC>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int degree() const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly operator-() const;
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const QC& s, const Poly& a);
    friend bool operator==(const Poly& a, const Poly& b) { return a.t_ == b.t_; }

    Poly d_z(int i) const;
    Poly d_zbar(int i) const;
    // also d/dx = d_z + d_zbar and d/dy = i (d_z - d_zbar)
    Poly d_real(int axis) const;
    cd eval(const double* x) const;
    Field sample(const GridSpec& g) const;
    std::string str() const;

private:
    void add_term(const Monomial& e, const QC& c);
    std::map<Monomial, QC> t_;
};

// Exact section of the exterior algebra of L* over polynomial coefficients.
struct PolySection {
    int n = 1;
    std::map<Mask, Poly> c;

    PolySection() = default;
    explicit PolySection(int dim) : n(dim) {}

    void add(Mask s, const Poly& p);
    bool is_zero() const;
    PolySection part(int contra, int cov) const;
    Section sample(const GridSpec& g) const;
    friend PolySection operator+(PolySection a, const PolySection& b);
    friend PolySection operator-(PolySection a, const PolySection& b);
    friend PolySection operator*(const QC& s, PolySection a);
    friend bool operator==(const PolySection& a, const PolySection& b);
};

PolySection wedge(const PolySection& a, const PolySection& b);
PolySection dbar(const PolySection& s);
// Schouten-type bracket evaluated through the decomposable-wedge expansion
// sum (-1)^{i+j} [X_i, Y_j] ^ (remaining factors) over the restricted Courant
// bracket of degree-one sections.
PolySection bracket(const PolySection& a, const PolySection& b);
// dbar(eps) + 1/2 [eps, eps]
PolySection mc(const PolySection& eps);

}  // namespace gcn::oracle
