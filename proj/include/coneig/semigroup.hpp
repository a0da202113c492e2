#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "coneig/classical.hpp"
#include "coneig/dense.hpp"
#include "coneig/tropical.hpp"

namespace coneig {

/// A finitely generated matrix semigroup plus the working bounds of the
/// closure computation.
template <Domain D>
struct SemigroupSpec {
  std::vector<Matrix<D>> generators;
  std::size_t closure_cap = 512;  // max distinct elements kept
  std::size_t word_cap = 12;      // max witness word length explored
  std::size_t quasi_bound = 8;    // deepest layer searched by classify
  double tol = 1e-9;
};

/// Breadth-first closure of the generators under products. Each element
/// keeps one witness word (generator indices) of minimum length.
template <Domain D>
struct SemigroupClosure {
  std::vector<Matrix<D>> elements;
  std::vector<std::vector<std::size_t>> words;
  std::vector<std::size_t> min_length;
  bool truncated = false;
};

enum class ClassKind { Commutative, Nilpotent, Quasinilpotent, Unknown };

struct Classification {
  ClassKind kind = ClassKind::Unknown;
  std::size_t index = 0;   // the k of nilpotent(k) / quasinilpotent(k)
  bool truncated = false;  // verdict carries a caveat when the closure was cut
};

std::string classification_label(const Classification& c);

/// A common eigenvector with one eigenvalue and verification residual per
/// generator, plus an audit trail of the solver steps.
template <Domain D>
struct CommonEigenReport {
  Vector<D> vector;
  std::vector<scalar_t<D>> lambdas;
  std::vector<double> residuals;
  Classification classification;
  std::vector<std::string> pathway;
};

template <Domain D>
SemigroupClosure<D> closure(const SemigroupSpec<D>& spec);

/// Elements whose minimum witness word length is at least k: the k-th layer
/// of the product filtration. Layers are nested downward.
template <Domain D>
std::vector<Matrix<D>> layer_k(const SemigroupClosure<D>& c, std::size_t k);

template <Domain D>
bool is_commutative(const std::vector<Matrix<D>>& ms, double tol);

template <Domain D>
Classification classify(const SemigroupSpec<D>& spec, const SemigroupClosure<D>& c);
template <Domain D>
Classification classify(const SemigroupSpec<D>& spec);

/// Common eigenvector of pairwise commuting generators inside the invariant
/// cone/subspace spanned by the columns of v_gens, by sequential eigenspace
/// refinement with backtracking over eigenvalue choices. The result is
/// verified against every generator.
template <Domain D>
CommonEigenReport<D> common_eigenvector_commutative(const std::vector<Matrix<D>>& gens,
                                                    const Matrix<D>& v_gens, double tol);

/// Given a common eigenvector of the upper layer, produces one for the layer
/// below: reuses u when some upper eigenvalue is nonzero, otherwise pushes u
/// through a lower-layer element that does not annihilate it. Output is
/// verified against the lower layer.
template <Domain D>
Vector<D> lift_eigenvector(const Vector<D>& u, const std::vector<Matrix<D>>& upper,
                           const std::vector<Matrix<D>>& lower, double tol);

/// Full pipeline: classify, solve on the commutative (or zero) layer, then
/// lift back to the generators. Throws when classification is unknown within
/// the configured bounds.
template <Domain D>
CommonEigenReport<D> common_eigenvector(const SemigroupSpec<D>& spec);

/// Same pipeline with the solve layer forced to t, regardless of where the
/// classification would start. Diagnostic knob; preconditions on layer t
/// still apply.
template <Domain D>
CommonEigenReport<D> common_eigenvector_at_layer(const SemigroupSpec<D>& spec, std::size_t t);

}  // namespace coneig
