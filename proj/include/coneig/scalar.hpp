#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string_view>
#include <utility>

#include "coneig/errors.hpp"

namespace coneig {

/// The three scalar domains all computations are parameterized over:
/// the complex field, the nonnegative reals with ordinary arithmetic,
/// and the max-times semifield (max as addition, ordinary product).
enum class Domain { Complex, NonnegReal, MaxTimes };

constexpr std::string_view domain_name(Domain d) {
  switch (d) {
    case Domain::Complex: return "complex";
    case Domain::NonnegReal: return "nonneg";
    case Domain::MaxTimes: return "max-times";
  }
  return "?";
}

inline std::optional<Domain> domain_from_name(std::string_view name) {
  if (name == "complex") return Domain::Complex;
  if (name == "nonneg") return Domain::NonnegReal;
  if (name == "max-times") return Domain::MaxTimes;
  return std::nullopt;
}

template <Domain D>
struct domain_traits;

template <>
struct domain_traits<Domain::Complex> {
  using scalar = std::complex<double>;
  static constexpr scalar zero() { return {0.0, 0.0}; }
  static constexpr scalar one() { return {1.0, 0.0}; }
  static scalar add(scalar a, scalar b) { return a + b; }
  static scalar mul(scalar a, scalar b) { return a * b; }
  static bool valid(scalar a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }
};

template <>
struct domain_traits<Domain::NonnegReal> {
  using scalar = double;
  static constexpr scalar zero() { return 0.0; }
  static constexpr scalar one() { return 1.0; }
  static scalar add(scalar a, scalar b) { return a + b; }
  static scalar mul(scalar a, scalar b) { return a * b; }
  static bool valid(scalar a) { return std::isfinite(a) && a >= 0.0; }
};

template <>
struct domain_traits<Domain::MaxTimes> {
  using scalar = double;
  static constexpr scalar zero() { return 0.0; }
  static constexpr scalar one() { return 1.0; }
  static scalar add(scalar a, scalar b) { return std::max(a, b); }
  static scalar mul(scalar a, scalar b) { return a * b; }
  static bool valid(scalar a) { return std::isfinite(a) && a >= 0.0; }
};

template <Domain D>
using scalar_t = typename domain_traits<D>::scalar;

template <Domain D>
scalar_t<D> scalar_add(scalar_t<D> a, scalar_t<D> b) {
  return domain_traits<D>::add(a, b);
}

template <Domain D>
scalar_t<D> scalar_mul(scalar_t<D> a, scalar_t<D> b) {
  return domain_traits<D>::mul(a, b);
}

inline double abs_of(double a) { return std::abs(a); }
inline double abs_of(std::complex<double> a) { return std::abs(a); }

/// Relative equality: |a - b| <= tol * max(1, |a|, |b|). The one tolerance
/// model used throughout the library.
inline bool approx_eq(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool approx_eq(std::complex<double> a, std::complex<double> b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Calls f with the compile-time domain tag matching the runtime value.
template <class F>
decltype(auto) dispatch(Domain d, F&& f) {
  switch (d) {
    case Domain::Complex:
      return std::forward<F>(f)(std::integral_constant<Domain, Domain::Complex>{});
    case Domain::NonnegReal:
      return std::forward<F>(f)(std::integral_constant<Domain, Domain::NonnegReal>{});
    case Domain::MaxTimes:
      return std::forward<F>(f)(std::integral_constant<Domain, Domain::MaxTimes>{});
  }
  throw input_error("unknown scalar domain");
}

}  // namespace coneig
