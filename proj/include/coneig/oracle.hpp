#pragma once

#include <cstdint>
#include <vector>

#include "coneig/dense.hpp"

namespace coneig::oracle {

/// Exhaustive list of the simple cycles of the digraph of nonzero entries,
/// with their geometric mean weights. Reference for the spectral solvers;
/// refuses n > 8.
struct CycleList {
  struct Cycle {
    std::vector<std::size_t> nodes;
    double mean;
  };
  std::vector<Cycle> cycles;

  double max_mean() const {
    double m = 0.0;
    for (const auto& c : cycles) m = std::max(m, c.mean);
    return m;
  }
};

CycleList enumerate_cycles(const TropicalMatrix& a);

/// Brute-force eigenvector search for one positive eigenvalue: enumerates
/// support subsets and row-maximum assignments, solves each assignment's
/// multiplicative constraints in the log image, and keeps every candidate
/// that verifies against the full system. Results are scaled to max entry 1
/// and deduplicated. n <= 4.
std::vector<TropicalVector> saturation_eigensolve(const TropicalMatrix& a, double lambda);

/// Seeded family {p_1(A), ..., p_m(A)} of polynomials (degree <= 3,
/// nonnegative coefficients) of one random base matrix, evaluated in the
/// domain's arithmetic; members commute by construction. n <= 8, m <= 5.
template <Domain D>
std::vector<Matrix<D>> random_commuting_family(std::uint64_t seed, std::size_t n, std::size_t m);

}  // namespace coneig::oracle
