#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace coneig {

/// Base class for every error raised by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad file, negative entry, domain
/// mismatch between operands, weights not summing to one, ...).
struct input_error : error {
  using error::error;
};

/// Shapes do not line up (non-square matrix, length mismatch, ...).
struct dimension_error : input_error {
  using input_error::input_error;
};

/// A series or closure does not exist for the given data.
struct divergence_error : error {
  using error::error;
};

/// A set claimed to be invariant under an operator is not, beyond tolerance.
struct invariance_error : error {
  using error::error;
};

/// An iterative method ran out of its iteration budget. Carries the best
/// iterates seen so callers can inspect or restart.
struct iteration_error : error {
  std::vector<std::complex<double>> best;

  iteration_error(const std::string& what, std::vector<std::complex<double>> iterates)
      : error(what), best(std::move(iterates)) {}
  explicit iteration_error(const std::string& what) : error(what) {}
};

/// A result that should hold by construction failed its final check.
/// Always a defect (in the input contract or in this library), never
/// silently swallowed.
struct verification_error : error {
  using error::error;
};

}  // namespace coneig
