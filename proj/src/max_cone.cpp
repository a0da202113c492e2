#include "coneig/max_cone.hpp"

#include <cmath>
#include <numeric>

namespace coneig {

namespace {

double ordinary_sum(const TropicalVector& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

MaxCone::MaxCone(TropicalMatrix g) : gens_(std::move(g)) {
  for (std::size_t j = 0; j < gens_.cols(); ++j) {
    bool nonzero = false;
    for (std::size_t i = 0; i < gens_.rows(); ++i)
      if (gens_(i, j) != 0.0) nonzero = true;
    if (!nonzero) throw input_error("max cone generator column is zero");
  }
}

MaxCone MaxCone::orthant(std::size_t n) { return MaxCone(TropicalMatrix::identity(n)); }

MaxCone MaxCone::ray(const TropicalVector& v) {
  return MaxCone(TropicalMatrix::from_columns({v}));
}

std::optional<MaxCone> MaxCone::from_columns(const std::vector<TropicalVector>& cols) {
  std::vector<TropicalVector> kept;
  for (const auto& c : cols)
    if (!is_zero(c)) kept.push_back(c);
  if (kept.empty()) return std::nullopt;
  return MaxCone(TropicalMatrix::from_columns(kept));
}

MaxCone MaxCone::reduced(double tol) const {
  std::vector<TropicalVector> kept;
  for (std::size_t j = 0; j < gens_.cols(); ++j) kept.push_back(gens_.col(j));
  for (std::size_t j = 0; j < kept.size() && kept.size() > 1;) {
    std::vector<TropicalVector> others;
    for (std::size_t k = 0; k < kept.size(); ++k)
      if (k != j) others.push_back(kept[k]);
    if (member(MaxCone(TropicalMatrix::from_columns(others)), kept[j], tol))
      kept.erase(kept.begin() + j);
    else
      ++j;
  }
  return MaxCone(TropicalMatrix::from_columns(kept));
}

TropicalVector project(const MaxCone& w, const TropicalVector& y) {
  if (y.size() != w.ambient_dim()) throw dimension_error("project: length mismatch");
  TropicalVector out(y.size());
  for (std::size_t j = 0; j < w.generator_count(); ++j) {
    TropicalVector g = w.generator(j);
    double r = residual(y, g);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], r * g[i]);
  }
  return out;
}

bool member(const MaxCone& w, const TropicalVector& x, double tol) {
  if (x.size() != w.ambient_dim()) return false;
  return approx_eq(project(w, x), x, tol);
}

bool is_invariant(const MaxCone& w, const TropicalMatrix& a, double tol) {
  if (!a.square() || a.rows() != w.ambient_dim())
    throw dimension_error("is_invariant: operator shape mismatch");
  for (std::size_t j = 0; j < w.generator_count(); ++j)
    if (!member(w, mat_vec(a, w.generator(j)), tol)) return false;
  return true;
}

TropicalMatrix induced_matrix(const MaxCone& w, const TropicalMatrix& a, double tol) {
  if (!a.square() || a.rows() != w.ambient_dim())
    throw dimension_error("induced_matrix: operator shape mismatch");
  const std::size_t m = w.generator_count();
  TropicalMatrix b(m, m);
  TropicalMatrix image(a.rows(), m);
  for (std::size_t j = 0; j < m; ++j) {
    TropicalVector aj = mat_vec(a, w.generator(j));
    for (std::size_t i = 0; i < a.rows(); ++i) image(i, j) = aj[i];
    for (std::size_t k = 0; k < m; ++k) b(k, j) = residual(aj, w.generator(k));
  }
  // G (x) B reproduces A (x) G iff every generator image is in the cone.
  if (!approx_eq(mat_mul(w.generators(), b), image, tol))
    throw invariance_error("induced_matrix: cone is not invariant under the operator");
  return b;
}

TropicalVector greatest_slice_point(const MaxCone& w) {
  TropicalVector out(w.ambient_dim());
  for (std::size_t j = 0; j < w.generator_count(); ++j) {
    TropicalVector g = w.generator(j);
    double norm = max_abs(g);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], g[i] / norm);
  }
  return out;
}

SliceSample convex_sample(const MaxCone& w, std::span<const double> weights,
                          std::span<const std::size_t> indices, double tol) {
  if (weights.size() != indices.size() || weights.empty())
    throw input_error("convex_sample: need matching nonempty weights and indices");
  double total = 0.0;
  for (double mu : weights) {
    if (!(mu >= 0.0)) throw input_error("convex_sample: negative weight");
    total += mu;
  }
  if (std::abs(total - 1.0) > tol) throw input_error("convex_sample: weights must sum to 1");

  SliceSample s{TropicalVector(w.ambient_dim()), {weights.begin(), weights.end()}, {}};
  std::vector<double> acc(w.ambient_dim(), 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= w.generator_count()) throw input_error("convex_sample: index out of range");
    TropicalVector g = w.generator(indices[k]);
    double sum = ordinary_sum(g);
    TropicalVector base(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) base[i] = g[i] / sum;
    for (std::size_t i = 0; i < g.size(); ++i) acc[i] += weights[k] * base[i];
    s.basepoints.push_back(base);
  }
  s.point = TropicalVector::from(std::move(acc));
  return s;
}

TropicalVector gamma_pi_step(const MaxCone& w, const TropicalMatrix& a,
                             const TropicalVector& x, double tol) {
  TropicalVector p = project(w, x);
  double ps = ordinary_sum(p);
  if (ps <= tol * std::max(1.0, max_abs(x)))
    throw input_error("gamma_pi_step: projection vanished; point is outside the convex slice");
  TropicalVector pi(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) pi[i] = p[i] / ps;
  TropicalVector q = mat_vec(a, pi);
  double qs = ordinary_sum(q);
  if (qs <= tol)
    throw divergence_error(
        "gamma_pi_step: operator annihilates the projected point; "
        "a zero-eigenvalue eigenvector exists instead");
  TropicalVector out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = q[i] / qs;
  return out;
}

}  // namespace coneig
