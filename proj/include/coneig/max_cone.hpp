#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "coneig/dense.hpp"

namespace coneig {

/// Finitely generated max cone: the set of componentwise maxima of scaled
/// generator columns. Generator columns are nonzero; the denoted cone is
/// closed.
class MaxCone {
 public:
  /// Generators are the columns of g. Throws if any column is zero.
  explicit MaxCone(TropicalMatrix g);

  static MaxCone orthant(std::size_t n);
  static MaxCone ray(const TropicalVector& v);
  /// Builds a cone from columns, dropping zero ones. Empty result -> nullopt.
  static std::optional<MaxCone> from_columns(const std::vector<TropicalVector>& cols);

  std::size_t ambient_dim() const { return gens_.rows(); }
  std::size_t generator_count() const { return gens_.cols(); }
  TropicalVector generator(std::size_t j) const { return gens_.col(j); }
  const TropicalMatrix& generators() const { return gens_; }

  /// Drops every generator that already lies in the cone of the others.
  MaxCone reduced(double tol) const;

 private:
  TropicalMatrix gens_;
};

/// Greatest element of the cone below y (componentwise), i.e. the canonical
/// nonlinear projection onto the cone.
TropicalVector project(const MaxCone& w, const TropicalVector& y);

/// x lies in the cone iff the projection fixes it (within tol).
bool member(const MaxCone& w, const TropicalVector& x, double tol);

/// AW is contained in W; by max-linearity it is enough to test generators.
bool is_invariant(const MaxCone& w, const TropicalMatrix& a, double tol);

/// Representation B of the action of A on the cone's generators:
/// G (x) B = A (x) G exactly when the cone is invariant. Throws
/// invariance_error when that identity fails beyond tol.
TropicalMatrix induced_matrix(const MaxCone& w, const TropicalMatrix& a, double tol);

/// Greatest point of the slice {x in W : max_i x_i = 1}: the max of the
/// sup-normalized generators.
TropicalVector greatest_slice_point(const MaxCone& w);

/// An ordinary (not max) convex combination of slice points of the cone.
/// Basepoints are generators rescaled to ordinary coordinate-sum 1.
struct SliceSample {
  TropicalVector point;
  std::vector<double> weights;
  std::vector<TropicalVector> basepoints;
};

SliceSample convex_sample(const MaxCone& w, std::span<const double> weights,
                          std::span<const std::size_t> indices, double tol);

/// One step of the normalize-project-apply map on the convex slice:
/// project x onto the cone, rescale to coordinate-sum 1, apply A, rescale
/// again. Fixed points in the slice are eigenvectors of A.
TropicalVector gamma_pi_step(const MaxCone& w, const TropicalMatrix& a,
                             const TropicalVector& x, double tol);

}  // namespace coneig
