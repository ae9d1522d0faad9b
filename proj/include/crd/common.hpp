#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Sparse>

namespace crd {

using Index = std::int64_t;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Complex = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";

/// Invalid argument, shape mismatch or violated precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A propagator or solver precondition on the spectrum is violated.
class StabilityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A configured size or memory cap would be exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values produced during time integration.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// base^exp with overflow detection.
inline Index checked_pow(Index base, int exp) {
  if (exp < 0) throw DomainError("checked_pow: negative exponent");
  Index r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<Index>::max() / base)
      throw ResourceLimitError("integer overflow computing " +
                               std::to_string(base) + "^" +
                               std::to_string(exp));
    r *= base;
  }
  return r;
}

}  // namespace crd
