#pragma once

#include <map>
#include <vector>

#include "gcn/grid.hpp"

namespace gcn {

// Basis of the exterior algebra of L* = T_{1,0} + T*_{0,1}: generator a < n is
// d/dz_a, generator n + j is dzbar_j. A basis k-vector is a bitmask of 2n bits
// with generators wedged in increasing order.
using Mask = unsigned;

int popcount(Mask s);
// (contravariant, covariant) degree of a basis element
std::pair<int, int> bidegree(Mask s, int n);
// sign of g_A ^ g_B relative to the sorted basis element; 0 when they overlap
int wedge_sign(Mask a, Mask b);

// Graded section of the exterior algebra of L*: coefficient field per basis mask.
struct Section {
    GridSpec g;
    std::map<Mask, Field> c;

    Section() = default;
    explicit Section(const GridSpec& grid) : g(grid) {}

    Field get(Mask s) const;
    Field& at(Mask s);  // creates a zero component if absent
    void add(Mask s, const Field& f, cd scale = 1.0);

    Section& operator+=(const Section& o);
    Section& operator-=(const Section& o);
    Section& operator*=(cd s);

    Section part(int contra, int cov) const;
    double sup() const;
    double ck(int k) const;
    std::vector<const Field*> fields() const;
};

Section operator+(Section a, const Section& b);
Section operator-(Section a, const Section& b);
Section operator*(cd s, Section a);

// Graded pieces of a deformation: bivector, mixed, two-form.
struct Deformation {
    GridSpec g;
    std::vector<Field> eps1;  // index pair_index(i, j), i < j, coefficient of d_i ^ d_j
    std::vector<Field> eps2;  // index i * n + j, coefficient of d_i (x) dzbar_j
    std::vector<Field> eps3;  // index pair_index(i, j), coefficient of dzbar_i ^ dzbar_j

    Deformation() = default;
    explicit Deformation(const GridSpec& grid);

    Deformation& operator+=(const Deformation& o);
    Deformation& operator-=(const Deformation& o);
    Deformation& operator*=(cd s);

    std::vector<const Field*> fields() const;
    std::vector<Field*> fields_mut();
    double sup() const;
    double ck(int k) const;
};

Deformation operator+(Deformation a, const Deformation& b);
Deformation operator-(Deformation a, const Deformation& b);
Deformation operator*(cd s, Deformation a);

int pair_count(int n);
int pair_index(int i, int j, int n);

Section to_section(const Deformation& e);
Deformation from_section(const Section& s);

struct Graded {
    Deformation eps1, eps2, eps3;
};
Graded decompose(const Deformation& e);
Deformation recompose(const Graded& parts);
// non-bivector part
Deformation zeta(const Deformation& e);

// Section of L*: vector part on d/dz_i and form part on dzbar_i.
struct GenVectorField {
    GridSpec g;
    std::vector<Field> X;
    std::vector<Field> xi;

    GenVectorField() = default;
    explicit GenVectorField(const GridSpec& grid);

    GenVectorField& operator+=(const GenVectorField& o);
    GenVectorField& operator*=(cd s);
    std::vector<const Field*> fields() const;
    std::vector<Field*> fields_mut();
    double sup() const;
    double ck(int k) const;
};

Section to_section(const GenVectorField& v);
GenVectorField vector_from_section(const Section& s);

Section scalar_section(const Field& f);

}  // namespace gcn
