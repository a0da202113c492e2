#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "coneig/dense.hpp"
#include "coneig/tropical.hpp"

namespace coneig {

using ComplexMatrix = Matrix<Domain::Complex>;
using ComplexVector = Vector<Domain::Complex>;
using NonnegMatrix = Matrix<Domain::NonnegReal>;
using NonnegVector = Vector<Domain::NonnegReal>;

/// Monic polynomial, coefficients ascending (coeffs[k] multiplies z^k,
/// coeffs.back() == 1).
struct PolyCoeffs {
  std::vector<std::complex<double>> coeffs;
  std::size_t degree() const { return coeffs.size() - 1; }
  std::complex<double> eval(std::complex<double> z) const;
};

/// Characteristic polynomial of a square matrix by the Faddeev-LeVerrier
/// recurrence.
PolyCoeffs char_poly(const ComplexMatrix& a);
PolyCoeffs char_poly(const NonnegMatrix& a);

/// All complex roots with multiplicity by Durand-Kerner iteration from the
/// standard staggered start. Each returned root r satisfies
/// |p(r)| <= tol * (1 + |r|)^deg; otherwise throws iteration_error carrying
/// the best iterates.
std::vector<std::complex<double>> poly_roots(const PolyCoeffs& p, double tol = 1e-9,
                                             std::size_t max_iter = 10000);

/// One verified eigenpair per distinct characteristic root where the
/// nullspace of (A - lambda I) is resolvable at the rank tolerance.
/// Ordered by descending |lambda|. Desk scale: n <= 16.
std::vector<EigenPair<Domain::Complex>> eigenpairs_complex(const ComplexMatrix& a,
                                                           double tol = 1e-9);

/// Dominant eigenpair of a nonzero nonnegative matrix by power iteration from
/// the all-ones start; on oscillation the iteration is restarted once on the
/// averaged map (I + A/rho)/2, which damps peripheral eigenvalues.
EigenPair<Domain::NonnegReal> perron_eigenpair(const NonnegMatrix& a, double tol = 1e-9,
                                               std::size_t max_iter = 10000);

/// Eigenpair of A inside the column span of g (complex case; columns must be
/// independent and the span invariant) or inside the convex cone generated by
/// the columns of g (nonnegative case; invariance checked by nonnegative
/// least squares, result verified against A directly).
EigenPair<Domain::Complex> eigenvector_in_subspace(const ComplexMatrix& g,
                                                   const ComplexMatrix& a, double tol = 1e-9);
EigenPair<Domain::NonnegReal> eigenvector_in_subspace(const NonnegMatrix& g,
                                                      const NonnegMatrix& a, double tol = 1e-9,
                                                      std::size_t max_iter = 10000);

// Building blocks shared with the semigroup engine.

/// Basis of {x : M x = 0}; pivot magnitudes below rank_tol times the largest
/// matrix entry count as zero.
std::vector<ComplexVector> nullspace(const ComplexMatrix& m, double rank_tol = 1e-8);

/// B minimizing ||G B - A G|| columnwise (normal equations), plus the
/// relative restriction residual max|G B - A G| / max(1, max|A G|).
std::pair<ComplexMatrix, double> complex_restriction(const ComplexMatrix& g,
                                                     const ComplexMatrix& a);

/// Nonnegative B with G B ~= A G by nonnegative least squares per column,
/// plus the relative restriction residual.
std::pair<NonnegMatrix, double> nonneg_restriction(const NonnegMatrix& g, const NonnegMatrix& a);

/// Modified Gram-Schmidt; drops columns whose remainder falls below rank_tol
/// times the original column scale. Throws input_error when nothing is left.
ComplexMatrix orthonormalize_columns(const ComplexMatrix& m, double rank_tol = 1e-10);

ComplexMatrix to_complex(const NonnegMatrix& a);
ComplexVector to_complex(const NonnegVector& v);

}  // namespace coneig
