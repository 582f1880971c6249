#pragma once

#include <cstdint>
#include <vector>

#include "gcn/oracle.hpp"

namespace gcn {

// Deterministic polynomial corpus. Coefficients are small Gaussian rationals
// drawn from a fixed-seed mt19937_64 stream, so every run sees the same fields.
oracle::Poly random_poly(std::uint64_t seed, int n, int degree, int terms = 4);

// Section with one random polynomial per basis element of the given bidegree.
oracle::PolySection random_section(std::uint64_t seed, int n, int contra, int cov, int degree, int terms = 3);

// The committed corpus: 20 sections per bidegree.
std::vector<oracle::PolySection> section_corpus(int n, int contra, int cov, int degree = 3, int count = 20);

}  // namespace gcn
