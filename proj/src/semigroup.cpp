#include "coneig/semigroup.hpp"

#include <algorithm>
#include <complex>
#include <optional>

#include "coneig/max_cone.hpp"

namespace coneig {

std::string classification_label(const Classification& c) {
  switch (c.kind) {
    case ClassKind::Commutative: return "commutative";
    case ClassKind::Nilpotent: return "nilpotent(" + std::to_string(c.index) + ")";
    case ClassKind::Quasinilpotent: return "quasinilpotent(" + std::to_string(c.index) + ")";
    case ClassKind::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

template <Domain D>
void check_generators(const std::vector<Matrix<D>>& gens) {
  if (gens.empty()) throw input_error("semigroup: no generators");
  const std::size_t n = gens.front().rows();
  for (const auto& g : gens)
    if (!g.square() || g.rows() != n)
      throw dimension_error("semigroup: generators must be square and equally sized");
}

/// Best-fit eigenvalue of v under a, plus the verification residual.
template <Domain D>
std::pair<scalar_t<D>, double> fit_eigenvalue(const Matrix<D>& a, const Vector<D>& v) {
  if constexpr (D == Domain::Complex) {
    Vector<D> av = mat_vec(a, v);
    std::complex<double> num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      num += std::conj(v[i]) * av[i];
      den += std::norm(v[i]);
    }
    std::complex<double> lam = num / den;
    return {lam, eigen_residual(a, lam, v)};
  } else {
    Vector<D> av = mat_vec(a, v);
    std::size_t j = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[j]) j = i;
    double lam = av[j] / v[j];
    return {lam, eigen_residual(a, lam, v)};
  }
}

// --- per-domain refinement steps ------------------------------------------
//
// One refinement step takes the current invariant cone/subspace, restricts
// the next generator to it, and offers one successor state per eigenvalue of
// the restriction (top eigenvalue first). A step returns nullopt when the
// state is not invariant under the generator, which makes the search
// backtrack to another eigenvalue choice higher up.

template <Domain D>
struct Refine;

template <>
struct Refine<Domain::MaxTimes> {
  using State = MaxCone;
  static State initial(const TropicalMatrix& vgens, double tol) {
    return MaxCone(vgens).reduced(tol);
  }
  static bool invariant(const State& w, const TropicalMatrix& a, double tol) {
    return is_invariant(w, a, tol);
  }
  static std::optional<std::vector<std::pair<double, State>>> step(const State& w,
                                                                   const TropicalMatrix& a,
                                                                   double tol) {
    std::optional<TropicalMatrix> b;
    try {
      b = induced_matrix(w, a, tol);
    } catch (const invariance_error&) {
      return std::nullopt;
    }
    std::vector<std::pair<double, State>> out;
    for (double lam : tropical_spectrum(*b, tol)) {
      std::vector<TropicalVector> cols;
      for (const auto& u : eigencone_generators(*b, lam, tol))
        cols.push_back(mat_vec(w.generators(), u));
      if (auto cone = MaxCone::from_columns(cols)) out.emplace_back(lam, cone->reduced(tol));
    }
    return out;
  }
  static TropicalVector pick(const State& w) { return greatest_slice_point(w); }
};

template <>
struct Refine<Domain::Complex> {
  using State = ComplexMatrix;  // orthonormal basis of the current subspace
  static State initial(const ComplexMatrix& vgens, double) {
    return orthonormalize_columns(vgens);
  }
  static bool invariant(const State& g, const ComplexMatrix& a, double tol) {
    return complex_restriction(g, a).second <= tol;
  }
  static std::optional<std::vector<std::pair<std::complex<double>, State>>> step(
      const State& g, const ComplexMatrix& a, double tol) {
    auto [b, resid] = complex_restriction(g, a);
    if (resid > tol) return std::nullopt;
    std::vector<EigenPair<Domain::Complex>> pairs;
    try {
      pairs = eigenpairs_complex(b, tol);
    } catch (const iteration_error&) {
      return std::nullopt;
    }
    std::vector<std::complex<double>> lams;
    for (const auto& p : pairs) {
      bool dup = false;
      for (auto l : lams)
        if (approx_eq(l, p.lambda, 1e-8)) dup = true;
      if (!dup) lams.push_back(p.lambda);
    }
    std::vector<std::pair<std::complex<double>, State>> out;
    for (auto lam : lams) {
      ComplexMatrix shifted = b;
      for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) -= lam;
      auto basis = nullspace(shifted);
      if (basis.empty()) continue;
      try {
        out.emplace_back(lam,
                         orthonormalize_columns(mat_mul(g, ComplexMatrix::from_columns(basis))));
      } catch (const input_error&) {
      }
    }
    return out;
  }
  static ComplexVector pick(const State& g) { return g.col(0); }
};

template <>
struct Refine<Domain::NonnegReal> {
  using State = NonnegMatrix;  // cone generator columns
  static State initial(const NonnegMatrix& vgens, double) { return vgens; }
  static bool invariant(const State& g, const NonnegMatrix& a, double tol) {
    return nonneg_restriction(g, a).second <= tol;
  }
  static std::optional<std::vector<std::pair<double, State>>> step(const State& g,
                                                                   const NonnegMatrix& a,
                                                                   double tol) {
    auto [b, resid] = nonneg_restriction(g, a);
    if (resid > tol) return std::nullopt;
    const std::size_t m = b.rows();
    std::vector<std::pair<double, State>> out;
    double diag = 0.0;
    for (std::size_t i = 0; i < m; ++i) diag = std::max(diag, b(i, i));
    bool scalar_like = true;
    for (std::size_t i = 0; i < m && scalar_like; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (!approx_eq(b(i, j), i == j ? diag : 0.0, tol)) scalar_like = false;
    if (scalar_like) {
      // The restriction acts as a scalar; the whole cone is the eigenspace.
      out.emplace_back(diag, g);
      return out;
    }
    try {
      auto pair = perron_eigenpair(b, tol, 10000);
      NonnegVector x = mat_vec(g, pair.vector);
      if (max_abs(x) > 0.0) out.emplace_back(pair.lambda, NonnegMatrix::from_columns({x}));
    } catch (const iteration_error&) {
    }
    return out;
  }
  static NonnegVector pick(const State& g) { return g.col(0); }
};

template <Domain D>
struct RefinementSearch {
  const std::vector<Matrix<D>>& gens;
  double tol;
  std::size_t budget = 4096;

  std::optional<Vector<D>> run(const typename Refine<D>::State& state, std::size_t level) {
    if (budget == 0)
      throw verification_error("common eigenvector search: refinement budget exhausted");
    --budget;
    if (level == gens.size()) {
      Vector<D> v = Refine<D>::pick(state);
      for (const auto& a : gens)
        if (fit_eigenvalue(a, v).second > tol) return std::nullopt;
      return v;
    }
    auto cands = Refine<D>::step(state, gens[level], tol);
    if (!cands) return std::nullopt;
    for (auto& [lam, st] : *cands)
      if (auto r = run(st, level + 1)) return r;
    return std::nullopt;
  }
};

/// Nonzero vector annihilated by every listed matrix, when one exists.
/// In the two ordered domains a nonnegative combination vanishes only if
/// every term does, so the common kernel is spanned by indicators of columns
/// that are zero in every matrix.
template <Domain D>
std::optional<Vector<D>> common_kernel_vector(const std::vector<Matrix<D>>& ms, std::size_t n,
                                              double tol) {
  if constexpr (D == Domain::Complex) {
    if (ms.empty()) return Vector<D>::unit(n, 0);
    ComplexMatrix stacked(ms.size() * n, n);
    for (std::size_t k = 0; k < ms.size(); ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) stacked(k * n + i, j) = ms[k](i, j);
    auto basis = nullspace(stacked);
    if (basis.empty()) return std::nullopt;
    return basis.front();
  } else {
    Vector<D> u(n);
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      bool zero_col = true;
      for (const auto& m : ms)
        for (std::size_t i = 0; i < n; ++i)
          if (std::abs(m(i, j)) > tol) zero_col = false;
      if (zero_col) {
        u[j] = 1.0;
        any = true;
      }
    }
    if (!any) return std::nullopt;
    return u;
  }
}

}  // namespace

template <Domain D>
SemigroupClosure<D> closure(const SemigroupSpec<D>& spec) {
  check_generators(spec.generators);
  if (spec.closure_cap < 1 || spec.word_cap < 1 || spec.quasi_bound < 1)
    throw input_error("semigroup: caps must be at least 1");
  if (spec.closure_cap < spec.generators.size())
    throw input_error("semigroup: closure cap smaller than the generator count");

  SemigroupClosure<D> c;
  auto find = [&](const Matrix<D>& m) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < c.elements.size(); ++i)
      if (approx_eq(c.elements[i], m, spec.tol)) return i;
    return std::nullopt;
  };

  std::vector<std::size_t> frontier;
  for (std::size_t g = 0; g < spec.generators.size(); ++g) {
    if (find(spec.generators[g])) continue;
    c.elements.push_back(spec.generators[g]);
    c.words.push_back({g});
    c.min_length.push_back(1);
    frontier.push_back(c.elements.size() - 1);
  }

  std::size_t len = 1;
  bool cap_hit = false;
  while (!frontier.empty() && len < spec.word_cap && !cap_hit) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (std::size_t g = 0; g < spec.generators.size() && !cap_hit; ++g) {
        Matrix<D> prod = mat_mul(c.elements[idx], spec.generators[g]);
        if (find(prod)) continue;
        if (c.elements.size() >= spec.closure_cap) {
          cap_hit = true;
          break;
        }
        c.elements.push_back(std::move(prod));
        std::vector<std::size_t> word = c.words[idx];
        word.push_back(g);
        c.words.push_back(std::move(word));
        c.min_length.push_back(len + 1);
        next.push_back(c.elements.size() - 1);
      }
      if (cap_hit) break;
    }
    frontier = std::move(next);
    ++len;
  }
  c.truncated = cap_hit || !frontier.empty();
  return c;
}

template <Domain D>
std::vector<Matrix<D>> layer_k(const SemigroupClosure<D>& c, std::size_t k) {
  if (k < 1) throw input_error("layer_k: k must be at least 1");
  std::vector<Matrix<D>> out;
  for (std::size_t i = 0; i < c.elements.size(); ++i)
    if (c.min_length[i] >= k) out.push_back(c.elements[i]);
  return out;
}

template <Domain D>
bool is_commutative(const std::vector<Matrix<D>>& ms, double tol) {
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if (!approx_eq(mat_mul(ms[i], ms[j]), mat_mul(ms[j], ms[i]), tol)) return false;
  return true;
}

template <Domain D>
Classification classify(const SemigroupSpec<D>& spec, const SemigroupClosure<D>& c) {
  if (is_commutative(c.elements, spec.tol)) return {ClassKind::Commutative, 0, c.truncated};
  auto all_zero = [&](const std::vector<Matrix<D>>& ms) {
    for (const auto& m : ms)
      if (max_abs(m) > spec.tol) return false;
    return true;
  };
  for (std::size_t k = 2; k <= spec.quasi_bound; ++k)
    if (all_zero(layer_k(c, k))) return {ClassKind::Nilpotent, k, c.truncated};
  for (std::size_t k = 2; k <= spec.quasi_bound; ++k)
    if (is_commutative(layer_k(c, k), spec.tol))
      return {ClassKind::Quasinilpotent, k, c.truncated};
  return {ClassKind::Unknown, 0, c.truncated};
}

template <Domain D>
Classification classify(const SemigroupSpec<D>& spec) {
  return classify(spec, closure(spec));
}

template <Domain D>
CommonEigenReport<D> common_eigenvector_commutative(const std::vector<Matrix<D>>& gens,
                                                    const Matrix<D>& v_gens, double tol) {
  check_generators(gens);
  if (!is_commutative(gens, tol))
    throw input_error("common_eigenvector_commutative: generators do not commute");
  typename Refine<D>::State state = Refine<D>::initial(v_gens, tol);
  for (const auto& g : gens)
    if (!Refine<D>::invariant(state, g, tol))
      throw invariance_error(
          "common_eigenvector_commutative: starting cone/subspace is not invariant");

  RefinementSearch<D> search{gens, tol};
  auto v = search.run(state, 0);
  if (!v)
    throw verification_error(
        "common_eigenvector_commutative: no eigenvalue branch produced a verifiable "
        "common eigenvector");

  CommonEigenReport<D> rep{*v, {}, {}, {ClassKind::Commutative, 0, false}, {}};
  for (const auto& a : gens) {
    auto [lam, r] = fit_eigenvalue(a, *v);
    rep.lambdas.push_back(lam);
    rep.residuals.push_back(r);
  }
  rep.pathway.push_back("refined eigenspaces over " + std::to_string(gens.size()) +
                        " commuting generators");
  return rep;
}

template <Domain D>
Vector<D> lift_eigenvector(const Vector<D>& u, const std::vector<Matrix<D>>& upper,
                           const std::vector<Matrix<D>>& lower, double tol) {
  for (const auto& m : upper)
    if (fit_eigenvalue(m, u).second > tol)
      throw input_error("lift_eigenvector: input is not a common eigenvector of the layer");

  Vector<D> result = u;
  bool nonzero_upper = false;
  for (const auto& m : upper)
    if (abs_of(fit_eigenvalue(m, u).first) > tol) nonzero_upper = true;

  if (!nonzero_upper) {
    // Everything one layer up annihilates u. If some lower element keeps it
    // alive, its image is annihilated by the whole lower layer, because
    // those products land back in the upper layer.
    double best = 0.0;
    std::optional<Vector<D>> moved;
    for (const auto& b : lower) {
      Vector<D> bu = mat_vec(b, u);
      double norm = max_abs(bu);
      if (norm > tol * std::max(1.0, max_abs(u)) && norm > best) {
        best = norm;
        moved = bu;
      }
    }
    if (moved) result = *moved;
  }

  for (const auto& b : lower)
    if (fit_eigenvalue(b, result).second > tol)
      throw verification_error("lift_eigenvector: lifted vector failed verification");
  return result;
}

namespace {

template <Domain D>
CommonEigenReport<D> run_pipeline(const SemigroupSpec<D>& spec, const SemigroupClosure<D>& c,
                                  Classification cls, std::size_t t, bool forced) {
  const std::size_t n = spec.generators.front().rows();
  std::vector<std::string> pathway;
  pathway.push_back("classified " + classification_label(cls) +
                    (cls.truncated ? " (closure truncated)" : ""));

  CommonEigenReport<D> rep = [&] {
    if (t == 0) {
      // Commutative semigroups are solved directly on the generators.
      auto r = common_eigenvector_commutative(spec.generators, Matrix<D>::identity(n), spec.tol);
      pathway.push_back(r.pathway.front());
      return r;
    }
    pathway.push_back((forced ? "forced solve on layer " : "solve on layer ") +
                      std::to_string(t));
    std::vector<Matrix<D>> lt = layer_k(c, t);
    bool all_zero = true;
    for (const auto& m : lt)
      if (max_abs(m) > spec.tol) all_zero = false;

    Vector<D> u(n);
    if (all_zero) {
      auto k = common_kernel_vector(lt, n, spec.tol);
      if (!k)
        throw verification_error("common_eigenvector: zero layer admits no kernel vector");
      u = *k;
      pathway.push_back("layer is zero; started from a kernel vector");
    } else {
      if (!is_commutative(lt, spec.tol))
        throw input_error("common_eigenvector: solve layer is not commutative");
      auto r = common_eigenvector_commutative(lt, Matrix<D>::identity(n), spec.tol);
      u = r.vector;
      pathway.push_back("solved " + std::to_string(lt.size()) + " layer elements");
    }

    for (std::size_t j = t; j >= 2; --j) {
      u = lift_eigenvector(u, layer_k(c, j), layer_k(c, j - 1), spec.tol);
      pathway.push_back("lifted to layer " + std::to_string(j - 1));
    }

    CommonEigenReport<D> out{u, {}, {}, cls, {}};
    return out;
  }();

  rep.classification = cls;
  rep.lambdas.clear();
  rep.residuals.clear();
  for (const auto& a : spec.generators) {
    auto [lam, r] = fit_eigenvalue(a, rep.vector);
    if (r > spec.tol)
      throw verification_error("common_eigenvector: final vector failed verification");
    rep.lambdas.push_back(lam);
    rep.residuals.push_back(r);
  }
  rep.pathway = std::move(pathway);
  rep.pathway.push_back("verified against all generators");
  return rep;
}

}  // namespace

template <Domain D>
CommonEigenReport<D> common_eigenvector(const SemigroupSpec<D>& spec) {
  SemigroupClosure<D> c = closure(spec);
  Classification cls = classify(spec, c);
  switch (cls.kind) {
    case ClassKind::Commutative:
      return run_pipeline(spec, c, cls, 0, false);
    case ClassKind::Nilpotent:
    case ClassKind::Quasinilpotent:
      return run_pipeline(spec, c, cls, cls.index, false);
    case ClassKind::Unknown:
      break;
  }
  throw error(std::string("common_eigenvector: classification unknown within configured caps") +
              (cls.truncated ? " (closure truncated; raise the caps)" : ""));
}

template <Domain D>
CommonEigenReport<D> common_eigenvector_at_layer(const SemigroupSpec<D>& spec, std::size_t t) {
  if (t < 1) throw input_error("common_eigenvector_at_layer: layer must be at least 1");
  SemigroupClosure<D> c = closure(spec);
  Classification cls = classify(spec, c);
  return run_pipeline(spec, c, cls, t, true);
}

#define CONEIG_INSTANTIATE(D)                                                                  \
  template SemigroupClosure<D> closure<D>(const SemigroupSpec<D>&);                            \
  template std::vector<Matrix<D>> layer_k<D>(const SemigroupClosure<D>&, std::size_t);        \
  template bool is_commutative<D>(const std::vector<Matrix<D>>&, double);                      \
  template Classification classify<D>(const SemigroupSpec<D>&, const SemigroupClosure<D>&);    \
  template Classification classify<D>(const SemigroupSpec<D>&);                                \
  template CommonEigenReport<D> common_eigenvector_commutative<D>(                             \
      const std::vector<Matrix<D>>&, const Matrix<D>&, double);                                \
  template Vector<D> lift_eigenvector<D>(const Vector<D>&, const std::vector<Matrix<D>>&,     \
                                         const std::vector<Matrix<D>>&, double);               \
  template CommonEigenReport<D> common_eigenvector<D>(const SemigroupSpec<D>&);                \
  template CommonEigenReport<D> common_eigenvector_at_layer<D>(const SemigroupSpec<D>&,        \
                                                               std::size_t);

CONEIG_INSTANTIATE(Domain::Complex)
CONEIG_INSTANTIATE(Domain::NonnegReal)
CONEIG_INSTANTIATE(Domain::MaxTimes)

#undef CONEIG_INSTANTIATE

}  // namespace coneig
