#include "coneig/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coneig {

namespace {

using cd = std::complex<double>;

cd trace(const ComplexMatrix& m) {
  cd t = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

// PLU solve of a dense complex system. When clamp > 0, pivots smaller in
// magnitude are replaced by clamp, which keeps near-singular solves usable
// for inverse iteration.
ComplexVector plu_solve(ComplexMatrix m, ComplexVector rhs, double clamp) {
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
      std::swap(rhs[c], rhs[piv]);
    }
    if (std::abs(m(c, c)) < clamp) m(c, c) = clamp;
    if (m(c, c) == cd(0.0)) throw input_error("plu_solve: singular matrix");
    for (std::size_t r = c + 1; r < n; ++r) {
      cd f = m(r, c) / m(c, c);
      if (f == cd(0.0)) continue;
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
      rhs[r] -= f * rhs[c];
    }
  }
  ComplexVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    cd s = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
    x[i] = s / m(i, i);
  }
  return x;
}

double l2_norm(const ComplexVector& v) {
  double s = 0.0;
  for (auto e : v) s += std::norm(e);
  return std::sqrt(s);
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = std::conj(m(i, j));
  return t;
}

}  // namespace

cd PolyCoeffs::eval(cd z) const {
  cd acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

PolyCoeffs char_poly(const ComplexMatrix& a) {
  if (!a.square()) throw dimension_error("char_poly: matrix must be square");
  const std::size_t n = a.rows();
  PolyCoeffs p;
  p.coeffs.assign(n + 1, cd(0.0));
  p.coeffs[n] = 1.0;
  ComplexMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = mat_mul(a, m);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += p.coeffs[n - k + 1];
    p.coeffs[n - k] = -trace(mat_mul(a, m)) / static_cast<double>(k);
  }
  // The last step folds into the recurrence: coeffs[0] already set above.
  return p;
}

PolyCoeffs char_poly(const NonnegMatrix& a) { return char_poly(to_complex(a)); }

std::vector<cd> poly_roots(const PolyCoeffs& p, double tol, std::size_t max_iter) {
  const std::size_t deg = p.degree();
  if (deg < 1) throw input_error("poly_roots: degree must be at least 1");
  if (std::abs(p.coeffs.back() - cd(1.0)) > 1e-12)
    throw input_error("poly_roots: polynomial must be monic");

  std::vector<cd> z(deg);
  cd seed(0.4, 0.9);
  cd cur(1.0, 0.0);
  for (std::size_t k = 0; k < deg; ++k) {
    z[k] = cur;
    cur *= seed;
  }

  auto acceptable = [&](const std::vector<cd>& r) {
    for (cd root : r)
      if (std::abs(p.eval(root)) > tol * std::pow(1.0 + std::abs(root), static_cast<double>(deg)))
        return false;
    return true;
  };

  for (std::size_t it = 0; it < max_iter; ++it) {
    double worst = 0.0;
    for (std::size_t k = 0; k < deg; ++k) {
      cd denom = 1.0;
      for (std::size_t j = 0; j < deg; ++j)
        if (j != k) denom *= z[k] - z[j];
      if (denom == cd(0.0)) {
        z[k] += cd(1e-8, 1e-8);
        worst = 1.0;
        continue;
      }
      cd delta = p.eval(z[k]) / denom;
      z[k] -= delta;
      worst = std::max(worst, std::abs(delta) / (1.0 + std::abs(z[k])));
    }
    if (worst <= 1e-14) break;
  }

  if (!acceptable(z))
    throw iteration_error("poly_roots: iteration did not reach the residual target", z);
  return z;
}

std::vector<ComplexVector> nullspace(const ComplexMatrix& m, double rank_tol) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const double thr = rank_tol * std::max(max_abs(m), 1e-300);
  ComplexMatrix r = m;
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  std::vector<bool> free_col(cols, false);
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t best = row;
    for (std::size_t i = row; i < rows; ++i)
      if (std::abs(r(i, c)) > std::abs(r(best, c))) best = i;
    if (row >= rows || std::abs(r(best, c)) <= thr) {
      free_col[c] = true;
      continue;
    }
    if (best != row)
      for (std::size_t j = 0; j < cols; ++j) std::swap(r(row, j), r(best, j));
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row) continue;
      cd f = r(i, c) / r(row, c);
      if (f == cd(0.0)) continue;
      for (std::size_t j = 0; j < cols; ++j) r(i, j) -= f * r(row, j);
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::vector<ComplexVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (!free_col[f]) continue;
    ComplexVector x(cols);
    x[f] = 1.0;
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
      x[pivot_col[k]] = -r(k, f) / r(k, pivot_col[k]);
    double norm = l2_norm(x);
    for (std::size_t i = 0; i < cols; ++i) x[i] /= norm;
    basis.push_back(x);
  }
  return basis;
}

std::vector<EigenPair<Domain::Complex>> eigenpairs_complex(const ComplexMatrix& a, double tol) {
  if (!a.square()) throw dimension_error("eigenpairs_complex: matrix must be square");
  const std::size_t n = a.rows();
  if (n > 16) throw input_error("eigenpairs_complex: desk scale is n <= 16");

  std::vector<cd> roots = poly_roots(char_poly(a), tol);
  double scale = 1.0;
  for (cd r : roots) scale = std::max(scale, std::abs(r));

  // Cluster the root list; multiple roots come back as a fuzzy cluster.
  std::vector<cd> reps;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    cd sum = 0.0;
    std::size_t count = 0;
    std::vector<std::size_t> stack{i};
    used[i] = true;
    while (!stack.empty()) {
      std::size_t k = stack.back();
      stack.pop_back();
      sum += roots[k];
      ++count;
      for (std::size_t j = 0; j < roots.size(); ++j)
        if (!used[j] && std::abs(roots[j] - roots[k]) <= 1e-4 * scale) {
          used[j] = true;
          stack.push_back(j);
        }
    }
    reps.push_back(sum / static_cast<double>(count));
  }
  std::sort(reps.begin(), reps.end(),
            [](cd x, cd y) { return std::abs(x) > std::abs(y); });

  std::vector<EigenPair<Domain::Complex>> pairs;
  const double clamp = 1e-13 * std::max(1.0, max_abs(a));
  for (cd lam0 : reps) {
    // Polish the eigenvalue with a few inverse-iteration / Rayleigh rounds so
    // the rank decision below sees a sharp shift.
    cd lam = lam0;
    ComplexVector v(n, cd(1.0, 0.0));
    {
      double norm = l2_norm(v);
      for (std::size_t i = 0; i < n; ++i) v[i] /= norm;
    }
    for (int round = 0; round < 6; ++round) {
      ComplexMatrix shifted = a;
      for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lam;
      ComplexVector w(n);
      try {
        w = plu_solve(shifted, v, clamp);
      } catch (const input_error&) {
        break;
      }
      double norm = l2_norm(w);
      if (!(norm > 0.0) || !std::isfinite(norm)) break;
      for (std::size_t i = 0; i < n; ++i) w[i] /= norm;
      ComplexVector aw = mat_vec(a, w);
      cd rayleigh = 0.0;
      for (std::size_t i = 0; i < n; ++i) rayleigh += std::conj(w[i]) * aw[i];
      v = w;
      if (std::abs(rayleigh - lam) <= 1e-15 * scale) {
        lam = rayleigh;
        break;
      }
      lam = rayleigh;
    }

    ComplexMatrix shifted = a;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lam;
    bool got = false;
    for (const auto& b : nullspace(shifted)) {
      double r = eigen_residual(a, lam, b);
      if (r <= tol) {
        pairs.push_back({lam, b, r, SolveMethod::Classical});
        got = true;
      }
    }
    if (!got) {
      double r = eigen_residual(a, lam, v);
      if (r <= tol) pairs.push_back({lam, v, r, SolveMethod::Classical});
    }
  }
  return pairs;
}

EigenPair<Domain::NonnegReal> perron_eigenpair(const NonnegMatrix& a, double tol,
                                               std::size_t max_iter) {
  if (!a.square()) throw dimension_error("perron_eigenpair: matrix must be square");
  const std::size_t n = a.rows();
  if (max_abs(a) == 0.0) throw input_error("perron_eigenpair: zero matrix");

  auto l1 = [](const NonnegVector& v) { return std::accumulate(v.begin(), v.end(), 0.0); };

  NonnegVector x(n, 1.0 / static_cast<double>(n));
  auto run = [&](bool averaged) -> std::optional<EigenPair<Domain::NonnegReal>> {
    for (std::size_t it = 0; it < max_iter; ++it) {
      NonnegVector ax = mat_vec(a, x);
      double s = l1(ax);
      if (s == 0.0) return EigenPair<Domain::NonnegReal>{0.0, x, 0.0, SolveMethod::Power};
      double rho = s / l1(x);
      double r = eigen_residual(a, rho, x);
      if (r <= tol) return EigenPair<Domain::NonnegReal>{rho, x, r, SolveMethod::Power};
      NonnegVector next(n);
      if (averaged) {
        for (std::size_t i = 0; i < n; ++i) next[i] = 0.5 * (x[i] + ax[i] / rho);
      } else {
        next = ax;
      }
      double ns = l1(next);
      for (std::size_t i = 0; i < n; ++i) next[i] /= ns;
      x = next;
    }
    return std::nullopt;
  };

  if (auto hit = run(false)) return *hit;
  // Plain iteration can cycle on imprimitive matrices; averaging successive
  // iterates damps the peripheral spectrum.
  if (auto hit = run(true)) return *hit;
  std::vector<cd> best(x.begin(), x.end());
  throw iteration_error(
      "perron_eigenpair: no convergence (averaged restart included); "
      "matrix may be severely imprimitive",
      best);
}

std::pair<ComplexMatrix, double> complex_restriction(const ComplexMatrix& g,
                                                     const ComplexMatrix& a) {
  if (a.cols() != g.rows()) throw dimension_error("complex_restriction: shape mismatch");
  ComplexMatrix ag = mat_mul(a, g);
  ComplexMatrix gh = adjoint(g);
  ComplexMatrix gram = mat_mul(gh, g);
  ComplexMatrix rhs = mat_mul(gh, ag);
  const std::size_t k = g.cols();
  ComplexMatrix b(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    ComplexVector col = plu_solve(gram, rhs.col(j), 0.0);
    for (std::size_t i = 0; i < k; ++i) b(i, j) = col[i];
  }
  ComplexMatrix gb = mat_mul(g, b);
  double num = 0.0;
  for (std::size_t i = 0; i < gb.entries().size(); ++i)
    num = std::max(num, std::abs(gb.entries()[i] - ag.entries()[i]));
  return {b, num / std::max(1.0, max_abs(ag))};
}

namespace {

// Lawson-Hanson active set; cols are the generator columns.
std::vector<double> nnls_solve(const std::vector<std::vector<double>>& cols,
                               const std::vector<double>& y) {
  const std::size_t m = cols.size(), n = y.size();
  std::vector<double> b(m, 0.0);
  std::vector<bool> passive(m, false);
  double scale = 0.0;
  for (const auto& c : cols)
    for (double e : c) scale = std::max(scale, std::abs(e));
  for (double e : y) scale = std::max(scale, std::abs(e));
  const double eps = 1e-12 * std::max(1.0, scale);

  auto residual_vec = [&] {
    std::vector<double> r = y;
    for (std::size_t j = 0; j < m; ++j)
      if (b[j] != 0.0)
        for (std::size_t i = 0; i < n; ++i) r[i] -= b[j] * cols[j][i];
    return r;
  };

  auto ls_on_passive = [&](std::vector<double>& z) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < m; ++j)
      if (passive[j]) idx.push_back(j);
    const std::size_t k = idx.size();
    std::vector<std::vector<double>> gram(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = 0; q < k; ++q)
        gram[p][q] = std::inner_product(cols[idx[p]].begin(), cols[idx[p]].end(),
                                        cols[idx[q]].begin(), 0.0);
      gram[p][k] = std::inner_product(cols[idx[p]].begin(), cols[idx[p]].end(), y.begin(), 0.0);
    }
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < k; ++r)
        if (std::abs(gram[r][c]) > std::abs(gram[piv][c])) piv = r;
      std::swap(gram[piv], gram[c]);
      if (std::abs(gram[c][c]) < 1e-14 * std::max(1.0, scale * scale)) gram[c][c] = eps;
      for (std::size_t r = c + 1; r < k; ++r) {
        double f = gram[r][c] / gram[c][c];
        for (std::size_t j = c; j <= k; ++j) gram[r][j] -= f * gram[c][j];
      }
    }
    std::vector<double> zz(k);
    for (std::size_t i = k; i-- > 0;) {
      double s = gram[i][k];
      for (std::size_t j = i + 1; j < k; ++j) s -= gram[i][j] * zz[j];
      zz[i] = s / gram[i][i];
    }
    z.assign(m, 0.0);
    for (std::size_t p = 0; p < k; ++p) z[idx[p]] = zz[p];
  };

  for (std::size_t guard = 0; guard < 4 * m + 8; ++guard) {
    std::vector<double> r = residual_vec();
    std::size_t best = m;
    double bestw = eps;
    for (std::size_t j = 0; j < m; ++j) {
      if (passive[j]) continue;
      double w = std::inner_product(cols[j].begin(), cols[j].end(), r.begin(), 0.0);
      if (w > bestw) {
        bestw = w;
        best = j;
      }
    }
    if (best == m) break;
    passive[best] = true;

    for (std::size_t inner = 0; inner < 4 * m + 8; ++inner) {
      std::vector<double> z;
      ls_on_passive(z);
      double zmin = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (passive[j]) zmin = std::min(zmin, z[j]);
      if (zmin > -eps) {
        for (std::size_t j = 0; j < m; ++j) b[j] = passive[j] ? std::max(z[j], 0.0) : 0.0;
        break;
      }
      double alpha = 1.0;
      for (std::size_t j = 0; j < m; ++j)
        if (passive[j] && z[j] <= 0.0 && b[j] - z[j] > 0.0)
          alpha = std::min(alpha, b[j] / (b[j] - z[j]));
      for (std::size_t j = 0; j < m; ++j) {
        if (!passive[j]) continue;
        b[j] += alpha * (z[j] - b[j]);
        if (b[j] <= eps) {
          b[j] = 0.0;
          passive[j] = false;
        }
      }
    }
  }
  return b;
}

}  // namespace

std::pair<NonnegMatrix, double> nonneg_restriction(const NonnegMatrix& g, const NonnegMatrix& a) {
  if (a.cols() != g.rows()) throw dimension_error("nonneg_restriction: shape mismatch");
  const std::size_t n = g.rows(), m = g.cols();
  std::vector<std::vector<double>> cols(m, std::vector<double>(n));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) cols[j][i] = g(i, j);

  NonnegMatrix ag = mat_mul(a, g);
  NonnegMatrix b(m, m);
  double num = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = ag(i, j);
    std::vector<double> bj = nnls_solve(cols, y);
    for (std::size_t i = 0; i < m; ++i) b(i, j) = bj[i];
    for (std::size_t i = 0; i < n; ++i) {
      double fit = 0.0;
      for (std::size_t k = 0; k < m; ++k) fit += g(i, k) * bj[k];
      num = std::max(num, std::abs(fit - y[i]));
    }
  }
  return {b, num / std::max(1.0, max_abs(ag))};
}

ComplexMatrix orthonormalize_columns(const ComplexMatrix& m, double rank_tol) {
  std::vector<ComplexVector> kept;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    ComplexVector v = m.col(j);
    double original = l2_norm(v);
    for (const auto& q : kept) {
      cd proj = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) proj += std::conj(q[i]) * v[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * q[i];
    }
    double rem = l2_norm(v);
    if (rem <= rank_tol * std::max(original, 1.0)) continue;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] /= rem;
    kept.push_back(v);
  }
  if (kept.empty()) throw input_error("orthonormalize_columns: rank zero");
  return ComplexMatrix::from_columns(kept);
}

EigenPair<Domain::Complex> eigenvector_in_subspace(const ComplexMatrix& g,
                                                   const ComplexMatrix& a, double tol) {
  if (!a.square() || a.rows() != g.rows())
    throw dimension_error("eigenvector_in_subspace: shape mismatch");
  auto [b, resid] = complex_restriction(g, a);
  if (resid > tol)
    throw invariance_error("eigenvector_in_subspace: span is not invariant under the operator");
  for (const auto& pair : eigenpairs_complex(b, tol)) {
    ComplexVector x = mat_vec(g, pair.vector);
    if (l2_norm(x) == 0.0) continue;
    double r = eigen_residual(a, pair.lambda, x);
    if (r <= tol) return {pair.lambda, x, r, SolveMethod::Classical};
  }
  throw verification_error("eigenvector_in_subspace: no restricted eigenpair verified");
}

EigenPair<Domain::NonnegReal> eigenvector_in_subspace(const NonnegMatrix& g,
                                                      const NonnegMatrix& a, double tol,
                                                      std::size_t max_iter) {
  if (!a.square() || a.rows() != g.rows())
    throw dimension_error("eigenvector_in_subspace: shape mismatch");
  auto [b, resid] = nonneg_restriction(g, a);
  if (resid > tol)
    throw invariance_error("eigenvector_in_subspace: cone is not invariant under the operator");
  EigenPair<Domain::NonnegReal> pair = perron_eigenpair(b, tol, max_iter);
  NonnegVector x = mat_vec(g, pair.vector);
  if (max_abs(x) == 0.0)
    throw verification_error("eigenvector_in_subspace: mapped eigenvector vanished");
  double r = eigen_residual(a, pair.lambda, x);
  if (r > tol)
    throw verification_error(
        "eigenvector_in_subspace: nonnegative factorization was inexact beyond tolerance");
  return {pair.lambda, x, r, SolveMethod::Classical};
}

ComplexMatrix to_complex(const NonnegMatrix& a) {
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  return c;
}

ComplexVector to_complex(const NonnegVector& v) {
  ComplexVector c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i];
  return c;
}

}  // namespace coneig
