#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace genround {

/// Bad input: malformed matrices, trees, specs or indices. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical pathology (eigensolver failure, bracketing failure). The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MetricViolation {
  not_square,
  not_finite,
  nonzero_diagonal,
  asymmetric,
  nonpositive_distance,
  triangle_inequality,
};

inline const char* to_string(MetricViolation v) {
  switch (v) {
    case MetricViolation::not_square: return "matrix is not square";
    case MetricViolation::not_finite: return "entry is not a finite non-negative real";
    case MetricViolation::nonzero_diagonal: return "diagonal entry is not zero";
    case MetricViolation::asymmetric: return "matrix is asymmetric";
    case MetricViolation::nonpositive_distance: return "off-diagonal distance is not positive";
    case MetricViolation::triangle_inequality: return "triangle inequality fails";
  }
  return "unknown";
}

/// First violated metric invariant. For the triangle inequality the witness (i, j, l)
/// means dist(i, j) > dist(i, l) + dist(l, j); for pairwise violations l repeats j.
class MetricError : public ValidationError {
 public:
  MetricError(MetricViolation kind, std::array<std::size_t, 3> witness)
      : ValidationError(describe(kind, witness)), kind_(kind), witness_(witness) {}

  MetricViolation kind() const noexcept { return kind_; }
  const std::array<std::size_t, 3>& witness() const noexcept { return witness_; }

 private:
  static std::string describe(MetricViolation kind, const std::array<std::size_t, 3>& w) {
    return std::string(to_string(kind)) + " at (" + std::to_string(w[0]) + "," +
           std::to_string(w[1]) + "," + std::to_string(w[2]) + ")";
  }

  MetricViolation kind_;
  std::array<std::size_t, 3> witness_;
};

}  // namespace genround
