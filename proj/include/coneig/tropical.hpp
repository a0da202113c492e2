#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "coneig/max_cone.hpp"

namespace coneig {

/// How an eigenpair was produced; carried for audit.
enum class SolveMethod { KleeneStar, Induced, ConePower, Power, Classical, Lifted };

constexpr std::string_view method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::KleeneStar: return "kleene-star";
    case SolveMethod::Induced: return "induced";
    case SolveMethod::ConePower: return "cone-power";
    case SolveMethod::Power: return "power";
    case SolveMethod::Classical: return "classical";
    case SolveMethod::Lifted: return "lifted";
  }
  return "?";
}

/// Eigenvalue, nonzero eigenvector, achieved residual and provenance.
template <Domain D>
struct EigenPair {
  scalar_t<D> lambda;
  Vector<D> vector;
  double residual;
  SolveMethod method;
};

/// Witness for a max cycle mean: a simple cycle (0-based node indices) whose
/// geometric mean of arc weights equals the reported value. Empty cycle means
/// the digraph is acyclic and the mean is 0.
struct SpectralCertificate {
  std::vector<std::size_t> cycle;
  double mean = 0.0;
};

/// Maximum geometric cycle mean over simple cycles of the digraph of nonzero
/// entries, with a witness cycle. Computed in the logarithmic image per
/// strongly connected component (Karp); the reported mean is recomputed from
/// the witness cycle.
std::pair<double, SpectralCertificate> max_cycle_mean(const TropicalMatrix& a);

/// I (+) A (+) A^2 (+) ... (+) A^(n-1). Throws divergence_error when the max
/// cycle mean exceeds 1 (the closure would be unbounded).
TropicalMatrix kleene_star(const TropicalMatrix& a, double tol);

/// Cone of all eigenvectors for the top eigenvalue (the max cycle mean,
/// required positive): columns of the star of the rescaled matrix indexed by
/// critical nodes. Throws input_error when the cycle mean is 0.
MaxCone principal_eigencone(const TropicalMatrix& a, double tol);

/// Generators of the full eigencone {x : A (x) x = lambda x} for one
/// eigenvalue; empty when lambda is not in the spectrum. lambda = 0 yields
/// indicators of zero columns.
std::vector<TropicalVector> eigencone_generators(const TropicalMatrix& a, double lambda,
                                                 double tol);

struct SpectrumEntry {
  double lambda;
  TropicalVector witness;
};

/// Every eigenvalue of A, each verified by an explicitly constructed and
/// substituted eigenvector. Sorted descending, duplicate-free.
std::vector<SpectrumEntry> tropical_spectrum_witnessed(const TropicalMatrix& a, double tol);
std::vector<double> tropical_spectrum(const TropicalMatrix& a, double tol);

/// An eigenpair of A inside an invariant finitely generated cone: solves on
/// the induced matrix and maps back through the generators. Succeeds for
/// every invariant cone (the induced spectrum is never empty).
EigenPair<Domain::MaxTimes> eigenvector_in_cone(const MaxCone& w, const TropicalMatrix& a,
                                                double tol);

/// Outcome of cone_power_iteration when no nonzero limit was reached.
struct ConePowerTrace {
  double alpha1 = 0.0;
  std::size_t iterations = 0;
  TropicalVector limit;
  bool converged_to_zero = false;
};

/// Power iteration from the greatest slice point of the cone, scaled by the
/// first iterate's max entry. Iterates decrease componentwise. Returns an
/// eigenpair when the limit is nonzero; on cones that are not minimal the
/// limit may be zero, reported via the trace.
std::variant<EigenPair<Domain::MaxTimes>, ConePowerTrace> cone_power_iteration(
    const MaxCone& w, const TropicalMatrix& a, std::size_t max_iter, double tol);

}  // namespace coneig
