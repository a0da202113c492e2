#include "coneig/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace coneig {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Strongly connected components of the digraph of nonzero entries
// (arc i -> j iff a(i,j) != 0). Node lists come out sorted.
std::vector<std::vector<std::size_t>> scc_partition(const TropicalMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> onstack(n, false);
  std::vector<std::size_t> stk;
  std::vector<std::vector<std::size_t>> comps;
  int counter = 0;

  auto dfs = [&](auto&& self, std::size_t v) -> void {
    index[v] = low[v] = counter++;
    stk.push_back(v);
    onstack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (a(v, w) == 0.0) continue;
      if (index[w] < 0) {
        self(self, w);
        low[v] = std::min(low[v], low[w]);
      } else if (onstack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      comps.emplace_back();
      while (true) {
        std::size_t w = stk.back();
        stk.pop_back();
        onstack[w] = false;
        comps.back().push_back(w);
        if (w == v) break;
      }
      std::sort(comps.back().begin(), comps.back().end());
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) dfs(dfs, v);
  return comps;
}

// Geometric mean of the arc weights around a cycle, evaluated as
// exp2(sum of log2 weights / length). On power-of-two entries the exponent
// arithmetic is exact, so equal rational means always produce the same
// double.
double cycle_mean(const TropicalMatrix& a, const std::vector<std::size_t>& cyc) {
  double s = 0.0;
  for (std::size_t t = 0; t < cyc.size(); ++t)
    s += std::log2(a(cyc[t], cyc[(t + 1) % cyc.size()]));
  return std::exp2(s / static_cast<double>(cyc.size()));
}

// Karp's max mean cycle recurrence on one strongly connected node set,
// in the log image. Returns a witness cycle (global indices); every cycle
// on the recurrence's optimal walk attains the component's max mean, so the
// first simple cycle on that walk is a valid witness. nullopt when the set
// carries no cycle (single node without a self-loop).
std::optional<std::vector<std::size_t>> karp_witness_cycle(const TropicalMatrix& a,
                                                           const std::vector<std::size_t>& nodes) {
  const std::size_t m = nodes.size();
  std::vector<std::vector<double>> w(m, std::vector<double>(m, kNegInf));
  bool any_arc = false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (a(nodes[i], nodes[j]) != 0.0) {
        w[i][j] = std::log2(a(nodes[i], nodes[j]));
        any_arc = true;
      }
  if (!any_arc) return std::nullopt;

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::vector<double>> d(m + 1, std::vector<double>(m, kNegInf));
  std::vector<std::vector<std::size_t>> par(m + 1, std::vector<std::size_t>(m, kNone));
  d[0][0] = 0.0;
  for (std::size_t k = 1; k <= m; ++k)
    for (std::size_t v = 0; v < m; ++v)
      for (std::size_t u = 0; u < m; ++u) {
        if (w[u][v] == kNegInf || d[k - 1][u] == kNegInf) continue;
        double cand = d[k - 1][u] + w[u][v];
        if (cand > d[k][v]) {
          d[k][v] = cand;
          par[k][v] = u;
        }
      }

  double best = kNegInf;
  std::size_t bestv = kNone;
  for (std::size_t v = 0; v < m; ++v) {
    if (d[m][v] == kNegInf) continue;
    double minq = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      if (d[k][v] == kNegInf) continue;
      minq = std::min(minq, (d[m][v] - d[k][v]) / static_cast<double>(m - k));
    }
    if (minq > best) {
      best = minq;
      bestv = v;
    }
  }
  if (bestv == kNone) return std::nullopt;

  std::vector<std::size_t> walk(m + 1);
  walk[m] = bestv;
  for (std::size_t k = m; k > 0; --k) walk[k - 1] = par[k][walk[k]];

  // First repeated vertex on the walk closes a simple cycle.
  std::vector<std::size_t> first(m, kNone);
  for (std::size_t idx = 0; idx <= m; ++idx) {
    std::size_t v = walk[idx];
    if (first[v] != kNone) {
      std::vector<std::size_t> cyc;
      for (std::size_t t = first[v]; t < idx; ++t) cyc.push_back(nodes[walk[t]]);
      return cyc;
    }
    first[v] = idx;
  }
  return std::nullopt;  // unreachable: m+1 visits among m vertices
}

TropicalMatrix submatrix(const TropicalMatrix& a, const std::vector<std::size_t>& nodes) {
  TropicalMatrix s(nodes.size(), nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) s(i, j) = a(nodes[i], nodes[j]);
  return s;
}

TropicalVector embed(const TropicalVector& v, const std::vector<std::size_t>& nodes,
                     std::size_t n) {
  TropicalVector out(n);
  for (std::size_t i = 0; i < nodes.size(); ++i) out[nodes[i]] = v[i];
  return out;
}

// Nodes from which the target set is reachable (target included).
std::vector<std::size_t> reaching_set(const TropicalMatrix& a,
                                      const std::vector<std::size_t>& target) {
  const std::size_t n = a.rows();
  std::vector<bool> in(n, false);
  std::vector<std::size_t> queue = target;
  for (std::size_t v : target) in[v] = true;
  while (!queue.empty()) {
    std::size_t v = queue.back();
    queue.pop_back();
    for (std::size_t u = 0; u < n; ++u)
      if (!in[u] && a(u, v) != 0.0) {
        in[u] = true;
        queue.push_back(u);
      }
  }
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < n; ++v)
    if (in[v]) out.push_back(v);
  return out;
}

std::vector<std::size_t> zero_columns(const TropicalMatrix& a) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    bool zero = true;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (a(i, j) != 0.0) zero = false;
    if (zero) out.push_back(j);
  }
  return out;
}

}  // namespace

std::pair<double, SpectralCertificate> max_cycle_mean(const TropicalMatrix& a) {
  if (!a.square()) throw dimension_error("max_cycle_mean: matrix must be square");
  std::optional<std::vector<std::size_t>> best;
  double best_mean = 0.0;
  for (const auto& comp : scc_partition(a)) {
    auto cyc = karp_witness_cycle(a, comp);
    if (!cyc) continue;
    double mean = cycle_mean(a, *cyc);
    if (!best || mean > best_mean) {
      best = cyc;
      best_mean = mean;
    }
  }
  if (!best) return {0.0, SpectralCertificate{}};
  return {best_mean, SpectralCertificate{*best, best_mean}};
}

TropicalMatrix kleene_star(const TropicalMatrix& a, double tol) {
  if (!a.square()) throw dimension_error("kleene_star: matrix must be square");
  double lam = max_cycle_mean(a).first;
  if (lam > 1.0 && !approx_eq(lam, 1.0, tol))
    throw divergence_error("kleene_star: cycle mean exceeds 1, closure diverges");
  const std::size_t n = a.rows();
  TropicalMatrix star = TropicalMatrix::identity(n);
  TropicalMatrix p = TropicalMatrix::identity(n);
  for (std::size_t t = 1; t < n; ++t) {
    p = mat_mul(p, a);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) star(i, j) = std::max(star(i, j), p(i, j));
  }
  return star;
}

MaxCone principal_eigencone(const TropicalMatrix& a, double tol) {
  if (!a.square()) throw dimension_error("principal_eigencone: matrix must be square");
  double lam = max_cycle_mean(a).first;
  if (lam <= 0.0)
    throw input_error("principal_eigencone: cycle mean is zero; use the kernel path");
  const std::size_t n = a.rows();
  TropicalMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = a(i, j) / lam;
  TropicalMatrix star = kleene_star(b, tol);
  TropicalMatrix plus = mat_mul(b, star);
  std::vector<TropicalVector> gens;
  for (std::size_t i = 0; i < n; ++i)
    if (approx_eq(plus(i, i), 1.0, tol)) gens.push_back(star.col(i));
  auto cone = MaxCone::from_columns(gens);
  if (!cone) throw verification_error("principal_eigencone: no critical node found");
  return cone->reduced(tol);
}

std::vector<TropicalVector> eigencone_generators(const TropicalMatrix& a, double lambda,
                                                 double tol) {
  if (!a.square()) throw dimension_error("eigencone_generators: matrix must be square");
  const std::size_t n = a.rows();
  std::vector<TropicalVector> gens;
  if (lambda <= 0.0) {
    for (std::size_t j : zero_columns(a)) gens.push_back(TropicalVector::unit(n, j));
    return gens;
  }
  for (const auto& comp : scc_partition(a)) {
    auto cyc = karp_witness_cycle(a, comp);
    if (!cyc || !approx_eq(cycle_mean(a, *cyc), lambda, tol)) continue;
    // The support of any eigenvector containing this component is closed
    // under predecessors, so the relevant submatrix sits on everything that
    // reaches it. A dominating upstream cycle rules the eigenvalue out.
    std::vector<std::size_t> support = reaching_set(a, comp);
    TropicalMatrix sub = submatrix(a, support);
    if (!approx_eq(max_cycle_mean(sub).first, lambda, tol)) continue;
    MaxCone local = principal_eigencone(sub, tol);
    for (std::size_t j = 0; j < local.generator_count(); ++j)
      gens.push_back(embed(local.generator(j), support, n));
  }
  if (gens.size() > 1) {
    MaxCone reduced = MaxCone(TropicalMatrix::from_columns(gens)).reduced(tol);
    gens.clear();
    for (std::size_t j = 0; j < reduced.generator_count(); ++j)
      gens.push_back(reduced.generator(j));
  }
  return gens;
}

std::vector<SpectrumEntry> tropical_spectrum_witnessed(const TropicalMatrix& a, double tol) {
  if (!a.square()) throw dimension_error("tropical_spectrum: matrix must be square");
  std::vector<double> candidates;
  for (const auto& comp : scc_partition(a)) {
    auto cyc = karp_witness_cycle(a, comp);
    if (cyc) candidates.push_back(cycle_mean(a, *cyc));
  }
  std::sort(candidates.begin(), candidates.end(), std::greater<>());
  std::vector<SpectrumEntry> out;
  for (double lam : candidates) {
    if (!out.empty() && approx_eq(out.back().lambda, lam, tol)) continue;
    auto gens = eigencone_generators(a, lam, tol);
    if (gens.empty()) continue;
    if (eigen_residual(a, lam, gens.front()) <= tol)
      out.push_back({lam, gens.front()});
  }
  auto kernel = eigencone_generators(a, 0.0, tol);
  if (!kernel.empty()) out.push_back({0.0, kernel.front()});
  return out;
}

std::vector<double> tropical_spectrum(const TropicalMatrix& a, double tol) {
  std::vector<double> out;
  for (const auto& e : tropical_spectrum_witnessed(a, tol)) out.push_back(e.lambda);
  return out;
}

EigenPair<Domain::MaxTimes> eigenvector_in_cone(const MaxCone& w, const TropicalMatrix& a,
                                                double tol) {
  TropicalMatrix b = induced_matrix(w, a, tol);
  for (const auto& entry : tropical_spectrum_witnessed(b, tol)) {
    for (const auto& u : eigencone_generators(b, entry.lambda, tol)) {
      TropicalVector x = mat_vec(w.generators(), u);
      if (is_zero(x)) continue;
      double r = eigen_residual(a, entry.lambda, x);
      if (r <= tol)
        return {entry.lambda, x, r, SolveMethod::Induced};
    }
  }
  throw verification_error(
      "eigenvector_in_cone: no induced eigenvalue verified against the operator");
}

std::variant<EigenPair<Domain::MaxTimes>, ConePowerTrace> cone_power_iteration(
    const MaxCone& w, const TropicalMatrix& a, std::size_t max_iter, double tol) {
  if (!is_invariant(w, a, tol))
    throw invariance_error("cone_power_iteration: cone is not invariant");
  for (std::size_t j = 0; j < w.generator_count(); ++j)
    if (is_zero(mat_vec(a, w.generator(j))))
      throw input_error(
          "cone_power_iteration: operator annihilates a generator; "
          "a zero-eigenvalue eigenvector exists instead");

  TropicalVector v = greatest_slice_point(w);
  const double alpha1 = max_abs(mat_vec(a, v));
  TropicalVector u = v;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    TropicalVector au = mat_vec(a, u);
    TropicalVector next(u.size());
    double diff = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      next[i] = au[i] / alpha1;
      diff = std::max(diff, std::abs(next[i] - u[i]));
    }
    double norm = max_abs(u);
    if (norm > tol && alpha1 * diff <= tol * norm)
      return EigenPair<Domain::MaxTimes>{alpha1, u, eigen_residual(a, alpha1, u),
                                         SolveMethod::ConePower};
    if (max_abs(next) <= tol) return ConePowerTrace{alpha1, it, next, true};
    u = next;
  }
  return ConePowerTrace{alpha1, max_iter, u, false};
}

}  // namespace coneig
