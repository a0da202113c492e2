#include "coneig/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace coneig::oracle {

namespace {

double mean_of(const TropicalMatrix& a, const std::vector<std::size_t>& cyc) {
  double s = 0.0;
  for (std::size_t t = 0; t < cyc.size(); ++t)
    s += std::log2(a(cyc[t], cyc[(t + 1) % cyc.size()]));
  return std::exp2(s / static_cast<double>(cyc.size()));
}

}  // namespace

CycleList enumerate_cycles(const TropicalMatrix& a) {
  if (!a.square()) throw dimension_error("enumerate_cycles: matrix must be square");
  const std::size_t n = a.rows();
  if (n > 8) throw input_error("enumerate_cycles: refuses n > 8");

  CycleList out;
  std::vector<std::size_t> path;
  std::vector<bool> onpath(n, false);

  // Cycles are listed once each, rooted at their smallest node.
  auto dfs = [&](auto&& self, std::size_t root, std::size_t v) -> void {
    path.push_back(v);
    onpath[v] = true;
    for (std::size_t w = root; w < n; ++w) {
      if (a(v, w) == 0.0) continue;
      if (w == root) {
        out.cycles.push_back({path, mean_of(a, path)});
      } else if (!onpath[w]) {
        self(self, root, w);
      }
    }
    onpath[v] = false;
    path.pop_back();
  };
  for (std::size_t root = 0; root < n; ++root) dfs(dfs, root, root);
  return out;
}

std::vector<TropicalVector> saturation_eigensolve(const TropicalMatrix& a, double lambda) {
  if (!a.square()) throw dimension_error("saturation_eigensolve: matrix must be square");
  const std::size_t n = a.rows();
  if (n > 4) throw input_error("saturation_eigensolve: refuses n > 4");
  if (!(lambda > 0.0)) throw input_error("saturation_eigensolve: needs a positive eigenvalue");

  const double log_lam = std::log2(lambda);
  const double tol = 1e-9;
  std::vector<TropicalVector> found;

  auto record = [&](const TropicalVector& x) {
    double norm = max_abs(x);
    if (norm == 0.0) return;
    TropicalVector scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = x[i] / norm;
    for (const auto& y : found)
      if (approx_eq(y, scaled, tol)) return;
    found.push_back(scaled);
  };

  auto verify = [&](const TropicalVector& x) {
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row = std::max(row, a(i, j) * x[j]);
      if (!approx_eq(row, lambda * x[i], tol)) return false;
    }
    return true;
  };

  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) support.push_back(i);
    const std::size_t k = support.size();

    // Every row of the support picks the column attaining its maximum.
    std::vector<std::size_t> choice(k, 0);
    while (true) {
      bool feasible = true;
      for (std::size_t t = 0; t < k && feasible; ++t)
        if (a(support[t], support[choice[t]]) == 0.0) feasible = false;

      if (feasible) {
        // x_i = a(i, sigma(i)) x_sigma(i) / lambda, solved in the log image.
        // Each weak component of the assignment graph contains one cycle;
        // values propagate from it, one free scale per component.
        std::vector<double> lx(k);
        std::vector<bool> set(k, false);
        bool consistent = true;
        for (std::size_t start = 0; start < k && consistent; ++start) {
          if (set[start]) continue;
          std::vector<std::size_t> chain;
          std::vector<int> pos(k, -1);
          std::size_t cur = start;
          while (pos[cur] < 0 && !set[cur]) {
            pos[cur] = static_cast<int>(chain.size());
            chain.push_back(cur);
            cur = choice[cur];
          }
          auto arc = [&](std::size_t t) {
            return std::log2(a(support[t], support[choice[t]])) - log_lam;
          };
          if (!set[cur]) {
            // Found a fresh cycle: chain[pos[cur]..] closes on cur.
            double total = 0.0;
            for (std::size_t t = static_cast<std::size_t>(pos[cur]); t < chain.size(); ++t)
              total += arc(chain[t]);
            if (std::abs(total) > 1e-9) {
              consistent = false;
              break;
            }
            set[cur] = true;
            lx[cur] = 0.0;
          }
          // Walk the chain backwards; each node hangs off its successor.
          for (std::size_t t = chain.size(); t-- > 0;) {
            std::size_t i = chain[t];
            if (set[i]) continue;
            lx[i] = arc(i) + lx[choice[i]];
            set[i] = true;
          }
        }

        if (consistent) {
          TropicalVector x(n);
          for (std::size_t t = 0; t < k; ++t) x[support[t]] = std::exp2(lx[t]);
          if (verify(x)) record(x);
        }
      }

      std::size_t t = 0;
      while (t < k && ++choice[t] == k) choice[t++] = 0;
      if (t == k) break;
    }
  }
  return found;
}

namespace {

struct Draw {
  std::mt19937_64 rng;
  explicit Draw(std::uint64_t seed) : rng(seed) {}
  double unit() { return static_cast<double>(rng() >> 11) * 0x1p-53; }
  std::uint64_t below(std::uint64_t k) { return rng() % k; }
  // Dyadic grid value in [lo/8, hi/8].
  double dyadic(int lo, int hi) { return static_cast<double>(lo + static_cast<int>(below(hi - lo + 1))) / 8.0; }
};

template <Domain D>
Matrix<D> eval_poly(const Matrix<D>& a, const std::vector<double>& coeff) {
  const std::size_t n = a.rows();
  Matrix<D> acc(n, n);
  Matrix<D> pw = Matrix<D>::identity(n);
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    if (k > 0) pw = mat_mul(pw, a);
    auto c = static_cast<scalar_t<D>>(coeff[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        acc(i, j) = domain_traits<D>::add(acc(i, j), domain_traits<D>::mul(c, pw(i, j)));
  }
  return acc;
}

// Plain Gauss-Jordan inverse, local to the fixture generator.
bool invert(std::vector<std::vector<std::complex<double>>>& m,
            std::vector<std::vector<std::complex<double>>>& inv) {
  const std::size_t n = m.size();
  inv.assign(n, std::vector<std::complex<double>>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) < 1e-9) return false;
    std::swap(m[piv], m[c]);
    std::swap(inv[piv], inv[c]);
    std::complex<double> d = m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      std::complex<double> f = m[r][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return true;
}

template <Domain D>
Matrix<D> random_base(Draw& draw, std::size_t n) {
  if constexpr (D == Domain::Complex) {
    // Diagonalizable by construction: P diag(d) P^-1 with an integer P.
    while (true) {
      std::vector<std::vector<std::complex<double>>> p(n, std::vector<std::complex<double>>(n));
      for (auto& row : p)
        for (auto& e : row)
          e = {static_cast<double>(static_cast<int>(draw.below(5))) - 2.0,
               static_cast<double>(static_cast<int>(draw.below(5))) - 2.0};
      std::vector<std::complex<double>> diag(n);
      for (auto& d : diag)
        d = {(static_cast<double>(static_cast<int>(draw.below(13))) - 6.0) / 4.0,
             (static_cast<double>(static_cast<int>(draw.below(13))) - 6.0) / 4.0};
      auto work = p;
      std::vector<std::vector<std::complex<double>>> pinv;
      if (!invert(work, pinv)) continue;
      Matrix<D> a(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          std::complex<double> s = 0.0;
          for (std::size_t k = 0; k < n; ++k) s += p[i][k] * diag[k] * pinv[k][j];
          a(i, j) = s;
        }
      return a;
    }
  } else if constexpr (D == Domain::NonnegReal) {
    // Strictly positive, keeping the dominant eigenvalue simple.
    Matrix<D> a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = draw.dyadic(1, 24);
    return a;
  } else {
    Matrix<D> a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        a(i, j) = draw.unit() < 0.25 ? 0.0 : draw.dyadic(1, 24);
    return a;
  }
}

}  // namespace

template <Domain D>
std::vector<Matrix<D>> random_commuting_family(std::uint64_t seed, std::size_t n, std::size_t m) {
  if (n > 8 || m > 5) throw input_error("random_commuting_family: refuses n > 8 or m > 5");
  Draw draw(seed);
  Matrix<D> base = random_base<D>(draw, n);
  std::vector<Matrix<D>> family;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t deg = draw.below(4);
    std::vector<double> coeff(deg + 1);
    for (auto& c : coeff) c = draw.unit() < 0.2 ? 0.0 : draw.dyadic(1, 16);
    family.push_back(eval_poly(base, coeff));
  }
  return family;
}

template std::vector<Matrix<Domain::Complex>> random_commuting_family<Domain::Complex>(
    std::uint64_t, std::size_t, std::size_t);
template std::vector<Matrix<Domain::NonnegReal>> random_commuting_family<Domain::NonnegReal>(
    std::uint64_t, std::size_t, std::size_t);
template std::vector<Matrix<Domain::MaxTimes>> random_commuting_family<Domain::MaxTimes>(
    std::uint64_t, std::size_t, std::size_t);

}  // namespace coneig::oracle
