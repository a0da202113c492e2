#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "coneig/errors.hpp"
#include "coneig/scalar.hpp"

namespace coneig {

/// Dense vector over one scalar domain. Entries are validated on
/// construction; the length is fixed afterwards. Values are immutable in
/// spirit: all operations return fresh vectors.
template <Domain D>
class Vector {
 public:
  static constexpr Domain domain = D;
  using scalar = scalar_t<D>;

  explicit Vector(std::size_t n, scalar fill = domain_traits<D>::zero()) : e_(n, fill) {
    if (n == 0) throw dimension_error("vector length must be at least 1");
    check_entries();
  }
  Vector(std::initializer_list<scalar> init) : e_(init) {
    if (e_.empty()) throw dimension_error("vector length must be at least 1");
    check_entries();
  }
  static Vector from(std::vector<scalar> entries) {
    Vector v;
    v.e_ = std::move(entries);
    if (v.e_.empty()) throw dimension_error("vector length must be at least 1");
    v.check_entries();
    return v;
  }
  static Vector unit(std::size_t n, std::size_t i) {
    Vector v(n);
    v.e_.at(i) = domain_traits<D>::one();
    return v;
  }

  std::size_t size() const { return e_.size(); }
  scalar operator[](std::size_t i) const { return e_[i]; }
  scalar& operator[](std::size_t i) { return e_[i]; }
  const std::vector<scalar>& entries() const { return e_; }

  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }

  friend bool operator==(const Vector& a, const Vector& b) = default;

 private:
  Vector() = default;
  void check_entries() const {
    for (scalar s : e_)
      if (!domain_traits<D>::valid(s)) throw input_error("invalid scalar for domain");
  }
  std::vector<scalar> e_;
};

/// Dense row-major matrix over one scalar domain. Desk scale: intended for
/// n <= 64.
template <Domain D>
class Matrix {
 public:
  static constexpr Domain domain = D;
  using scalar = scalar_t<D>;

  Matrix(std::size_t rows, std::size_t cols, scalar fill = domain_traits<D>::zero())
      : rows_(rows), cols_(cols), e_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw dimension_error("matrix must have positive dimensions");
    check_entries();
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<scalar>> rows) {
    if (rows.size() == 0) throw dimension_error("matrix must have positive dimensions");
    std::size_t cols = rows.begin()->size();
    Matrix m(rows.size(), cols);
    std::size_t i = 0;
    for (const auto& r : rows) {
      if (r.size() != cols) throw dimension_error("ragged rows in matrix literal");
      std::size_t j = 0;
      for (scalar s : r) m(i, j++) = s;
      ++i;
    }
    m.check_entries();
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = domain_traits<D>::one();
    return m;
  }

  static Matrix from_columns(const std::vector<Vector<D>>& cols) {
    if (cols.empty()) throw dimension_error("matrix must have positive dimensions");
    std::size_t n = cols.front().size();
    Matrix m(n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != n) throw dimension_error("column length mismatch");
      for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  scalar operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
  scalar& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }

  Vector<D> col(std::size_t j) const {
    std::vector<scalar> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return Vector<D>::from(std::move(c));
  }
  Vector<D> row(std::size_t i) const {
    std::vector<scalar> r(e_.begin() + i * cols_, e_.begin() + (i + 1) * cols_);
    return Vector<D>::from(std::move(r));
  }

  const std::vector<scalar>& entries() const { return e_; }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  void check_entries() const {
    for (scalar s : e_)
      if (!domain_traits<D>::valid(s)) throw input_error("invalid scalar for domain");
  }
  std::size_t rows_, cols_;
  std::vector<scalar> e_;
};

template <Domain D>
Vector<D> mat_vec(const Matrix<D>& a, const Vector<D>& x) {
  if (a.cols() != x.size()) throw dimension_error("mat_vec: shape mismatch");
  std::vector<scalar_t<D>> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    scalar_t<D> acc = domain_traits<D>::mul(a(i, 0), x[0]);
    for (std::size_t j = 1; j < a.cols(); ++j)
      acc = domain_traits<D>::add(acc, domain_traits<D>::mul(a(i, j), x[j]));
    out[i] = acc;
  }
  return Vector<D>::from(std::move(out));
}

template <Domain D>
Matrix<D> mat_mul(const Matrix<D>& a, const Matrix<D>& b) {
  if (a.cols() != b.rows()) throw dimension_error("mat_mul: shape mismatch");
  Matrix<D> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      scalar_t<D> acc = domain_traits<D>::mul(a(i, 0), b(0, j));
      for (std::size_t k = 1; k < a.cols(); ++k)
        acc = domain_traits<D>::add(acc, domain_traits<D>::mul(a(i, k), b(k, j)));
      c(i, j) = acc;
    }
  return c;
}

/// t-fold product; t = 0 yields the identity.
template <Domain D>
Matrix<D> mat_power(const Matrix<D>& a, std::size_t t) {
  if (!a.square()) throw dimension_error("mat_power: matrix must be square");
  Matrix<D> p = Matrix<D>::identity(a.rows());
  for (std::size_t k = 0; k < t; ++k) p = mat_mul(p, a);
  return p;
}

template <Domain D>
Vector<D> scale(scalar_t<D> r, const Vector<D>& x) {
  std::vector<scalar_t<D>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = domain_traits<D>::mul(r, x[i]);
  return Vector<D>::from(std::move(out));
}

template <Domain D>
double max_abs(const Vector<D>& x) {
  double m = 0.0;
  for (auto s : x) m = std::max(m, abs_of(s));
  return m;
}

template <Domain D>
double max_abs(const Matrix<D>& a) {
  double m = 0.0;
  for (auto s : a.entries()) m = std::max(m, abs_of(s));
  return m;
}

template <Domain D>
bool is_zero(const Vector<D>& x) {
  for (auto s : x)
    if (s != domain_traits<D>::zero()) return false;
  return true;
}

template <Domain D>
bool approx_eq(const Vector<D>& a, const Vector<D>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!approx_eq(a[i], b[i], tol)) return false;
  return true;
}

template <Domain D>
bool approx_eq(const Matrix<D>& a, const Matrix<D>& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    if (!approx_eq(a.entries()[i], b.entries()[i], tol)) return false;
  return true;
}

using TropicalVector = Vector<Domain::MaxTimes>;
using TropicalMatrix = Matrix<Domain::MaxTimes>;

// --- order structure; only the two real domains carry one -----------------

template <Domain D>
concept ordered_domain = (D == Domain::NonnegReal || D == Domain::MaxTimes);

template <Domain D>
  requires ordered_domain<D>
bool le(const Vector<D>& x, const Vector<D>& y) {
  if (x.size() != y.size()) throw dimension_error("le: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > y[i]) return false;
  return true;
}

/// Largest lambda with lambda * w <= v componentwise: min over the support
/// of w of v_i / w_i. Coordinates where w_i = 0 impose no constraint.
template <Domain D>
  requires ordered_domain<D>
double residual(const Vector<D>& v, const Vector<D>& w) {
  if (v.size() != w.size()) throw dimension_error("residual: length mismatch");
  bool support = false;
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (w[i] == 0.0) continue;
    double q = v[i] / w[i];
    r = support ? std::min(r, q) : q;
    support = true;
  }
  if (!support) throw input_error("residual: undefined against the zero vector");
  return r;
}

/// Componentwise maximum of a nonempty collection.
template <Domain D>
  requires ordered_domain<D>
Vector<D> sup_of(std::span<const Vector<D>> vs) {
  if (vs.empty()) throw input_error("sup_of: empty collection");
  std::vector<double> out(vs.front().entries());
  for (std::size_t k = 1; k < vs.size(); ++k) {
    if (vs[k].size() != out.size()) throw dimension_error("sup_of: length mismatch");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], vs[k][i]);
  }
  return Vector<D>::from(std::move(out));
}

template <Domain D>
  requires ordered_domain<D>
Vector<D> sup_of(const std::vector<Vector<D>>& vs) {
  return sup_of(std::span<const Vector<D>>(vs));
}

/// Max-norm relative deviation of A x from lambda x, the residual carried by
/// every eigenpair: ||A x - lambda x||_inf / ||x||_inf.
template <Domain D>
double eigen_residual(const Matrix<D>& a, scalar_t<D> lambda, const Vector<D>& x) {
  Vector<D> ax = mat_vec(a, x);
  double num = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    num = std::max(num, abs_of(ax[i] - domain_traits<D>::mul(lambda, x[i])));
  double den = max_abs(x);
  if (den == 0.0) throw input_error("eigen_residual: zero vector");
  return num / den;
}

}  // namespace coneig
