#pragma once

// p-negative type, the simplex inequality and the search for the supremal exponent.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "genround/errors.hpp"
#include "genround/metric.hpp"

namespace genround {

/// A configuration [a_1..a_k; b_1..b_k] of point indices; repetitions are allowed.
struct Simplex {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;

  std::size_t order() const noexcept { return a.size(); }

  void validate(std::size_t space_size) const {
    if (a.size() != b.size()) throw ValidationError("simplex sides must have equal length");
    if (a.size() < 2) throw ValidationError("simplex needs k >= 2 points per side");
    for (auto i : a)
      if (i >= space_size) throw ValidationError("simplex index out of range");
    for (auto i : b)
      if (i >= space_size) throw ValidationError("simplex index out of range");
  }

  friend bool operator==(const Simplex&, const Simplex&) = default;
};

struct NegTypeReport {
  double exponent = 0.0;
  bool holds = true;
  bool strict = true;
  /// Largest eigenvalue of the centred power matrix P D_p P.
  double max_form_value = 0.0;
  /// Unit-norm balanced vector: the violating direction when holds is false, a null direction
  /// when holds is true but strictness fails, empty otherwise.
  std::vector<double> witness_eta;
};

struct RoundnessEstimate {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  bool infinite = false;
  std::size_t iterations = 0;
  std::optional<NegTypeReport> failure_certificate;
};

struct RoundnessOptions {
  double tol = 1e-6;
  double p_cap = 64.0;
};

/// Relative eigenvalue threshold of the negative type test.
inline constexpr double kNegTypeEigenTol = 1e-9;

/// Gap, relative to the right-hand side (or 1 if smaller), below which the exhaustive search
/// reports a violating simplex.
inline constexpr double kSimplexViolationTol = 1e-12;

/// Point count above which the exhaustive simplex search refuses to run.
inline constexpr std::size_t kBruteForceMaxPoints = 8;

namespace detail {

inline void check_exponent(double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("exponent must be a finite real >= 0");
}

inline Eigen::MatrixXd power_matrix(const Eigen::MatrixXd& d, double p, double scale = 1.0) {
  Eigen::MatrixXd out = d.unaryExpr([p, scale](double x) { return distance_power(x / scale, p); });
  out.diagonal().setZero();
  return out;
}

// P * A * P with P = I - (1/k) 11^T, computed without forming P.
inline Eigen::MatrixXd double_center(const Eigen::MatrixXd& a) {
  const Eigen::VectorXd row_mean = a.rowwise().mean();
  const Eigen::RowVectorXd col_mean = a.colwise().mean();
  const double grand = a.mean();
  Eigen::MatrixXd m = a;
  m.colwise() -= row_mean;
  m.rowwise() -= col_mean;
  m.array() += grand;
  return 0.5 * (m + m.transpose());
}

inline Eigen::VectorXd centred_unit(Eigen::VectorXd v) {
  v.array() -= v.mean();
  const double n = v.norm();
  if (n > 0.0) v /= n;
  return v;
}

struct CenteredSpectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // empty unless requested
  double scale = 1.0;       // distances were divided by this before exponentiation
  double tol = 0.0;
};

inline CenteredSpectrum centered_spectrum(const FiniteMetricSpace& space, double p, bool vectors) {
  CenteredSpectrum out;
  out.scale = space.diameter();
  const Eigen::MatrixXd dp = power_matrix(space.dist(), p, out.scale);
  out.tol = kNegTypeEigenTol * dp.cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      double_center(dp), vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  out.values = solver.eigenvalues();
  if (vectors) out.vectors = solver.eigenvectors();
  return out;
}

inline bool holds_at(const FiniteMetricSpace& space, double p) {
  if (space.size() < 2) return true;
  const auto spec = centered_spectrum(space, p, false);
  return spec.values(spec.values.size() - 1) <= spec.tol;
}

}  // namespace detail

/// sum_{i,j} d(i,j)^p eta_i eta_j for a balanced eta.
inline double quadratic_form(const FiniteMetricSpace& space, double p, const std::vector<double>& eta) {
  detail::check_exponent(p);
  if (eta.size() != space.size()) throw ValidationError("eta length does not match the space");
  double sum = 0.0;
  double mass = 0.0;
  for (double e : eta) {
    sum += e;
    mass += std::abs(e);
  }
  if (std::abs(sum) > 1e-10 * std::max(1.0, mass)) throw ValidationError("eta entries must sum to zero");
  double q = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i)
    for (std::size_t j = 0; j < eta.size(); ++j)
      if (i != j) q += distance_power(space(i, j), p) * eta[i] * eta[j];
  return q;
}

/// Decides p-negative type by the spectrum of P D_p P: it holds iff no eigenvalue exceeds the
/// tolerance, and is strict iff only the centring direction sits near zero.
inline NegTypeReport negative_type_test(const FiniteMetricSpace& space, double p) {
  detail::check_exponent(p);
  NegTypeReport report;
  report.exponent = p;
  if (space.size() < 2) return report;

  const auto spec = detail::centered_spectrum(space, p, true);
  const Eigen::Index k = spec.values.size();
  const double top = spec.values(k - 1);
  report.holds = top <= spec.tol;
  report.max_form_value = top * std::pow(spec.scale, p);

  Eigen::Index non_negative = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    if (spec.values(i) >= -spec.tol) ++non_negative;
  report.strict = report.holds && non_negative == 1;

  if (!report.holds) {
    const Eigen::VectorXd eta = detail::centred_unit(spec.vectors.col(k - 1));
    report.witness_eta.assign(eta.data(), eta.data() + k);
  } else if (!report.strict) {
    // The null space contains the ones vector; pick the eigenvector furthest from it.
    Eigen::VectorXd best;
    double best_norm = -1.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (spec.values(i) < -spec.tol) continue;
      Eigen::VectorXd v = spec.vectors.col(i);
      v.array() -= v.mean();
      if (v.norm() > best_norm) {
        best_norm = v.norm();
        best = v;
      }
    }
    const Eigen::VectorXd eta = detail::centred_unit(best);
    report.witness_eta.assign(eta.data(), eta.data() + k);
  }
  return report;
}

/// Right side minus left side of the simplex inequality; negative means p is not a
/// generalized roundness exponent.
inline double simplex_gap(const FiniteMetricSpace& space, const Simplex& s, double p) {
  detail::check_exponent(p);
  s.validate(space.size());
  const std::size_t k = s.order();
  double lhs = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      lhs += distance_power(space(s.a[i], s.a[j]), p) + distance_power(space(s.b[i], s.b[j]), p);
  double rhs = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) rhs += distance_power(space(s.a[i], s.b[j]), p);
  return rhs - lhs;
}

namespace detail {

// Sorted index sequences of length k over [0, n) using each index at most max_mult times.
inline std::vector<std::vector<std::size_t>> bounded_multisets(std::size_t n, std::size_t k, std::size_t max_mult) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t used) {
    if (current.size() == k) {
      out.push_back(current);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      const std::size_t run = (i == start) ? used : 0;
      if (run >= max_mult) continue;
      current.push_back(i);
      rec(i, run + 1);
      current.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace detail

/// Exhaustive search for a simplex violating the inequality at exponent p, over every k in
/// [2, k_max] with each point used at most mult_max times per side. Sides are enumerated as
/// sorted multisets and unordered pairs of sides, since the inequality is symmetric under both.
inline std::optional<Simplex> brute_force_simplex_search(const FiniteMetricSpace& space, double p,
                                                         std::size_t k_max, std::size_t mult_max) {
  detail::check_exponent(p);
  if (k_max < 2) throw ValidationError("k_max must be at least 2");
  if (mult_max < 1) throw ValidationError("mult_max must be at least 1");
  if (space.size() > kBruteForceMaxPoints)
    throw ValidationError("exhaustive simplex search is limited to " + std::to_string(kBruteForceMaxPoints) +
                          " points");
  const std::size_t n = space.size();
  const Eigen::MatrixXd dp = detail::power_matrix(space.dist(), p);

  for (std::size_t k = 2; k <= k_max; ++k) {
    const auto sides = detail::bounded_multisets(n, k, mult_max);
    std::vector<double> within(sides.size(), 0.0);
    std::vector<Eigen::VectorXd> counts(sides.size(), Eigen::VectorXd::Zero(Eigen::Index(n)));
    for (std::size_t s = 0; s < sides.size(); ++s) {
      const auto& side = sides[s];
      for (std::size_t i = 0; i < k; ++i) {
        counts[s](Eigen::Index(side[i])) += 1.0;
        for (std::size_t j = i + 1; j < k; ++j) within[s] += dp(Eigen::Index(side[i]), Eigen::Index(side[j]));
      }
    }
    for (std::size_t x = 0; x < sides.size(); ++x) {
      const Eigen::VectorXd row = dp * counts[x];
      for (std::size_t y = x; y < sides.size(); ++y) {
        const double cross = row.dot(counts[y]);
        if (cross - within[x] - within[y] < -kSimplexViolationTol * std::max(1.0, cross)) return Simplex{sides[x], sides[y]};
      }
    }
  }
  return std::nullopt;
}

/// Brackets the supremal negative-type exponent. Exponents form [0, p*] (or [0, inf) for
/// ultrametrics), so the failure is located by doubling from 1 and then bisected.
inline RoundnessEstimate roundness(const FiniteMetricSpace& space, const RoundnessOptions& opts = {}) {
  if (!(opts.tol > 0.0)) throw ValidationError("tol must be positive");
  if (!(opts.p_cap >= 2.0) || !std::isfinite(opts.p_cap)) throw ValidationError("p_cap must be >= 2");

  RoundnessEstimate est;
  if (is_ultrametric(space)) {
    est.infinite = true;
    return est;
  }

  double lower = 0.0;
  double upper = std::numeric_limits<double>::quiet_NaN();
  double p = 1.0;
  while (true) {
    ++est.iterations;
    if (!detail::holds_at(space, p)) {
      upper = p;
      break;
    }
    lower = p;
    if (p >= opts.p_cap) break;
    p = std::min(2.0 * p, opts.p_cap);
  }
  if (std::isnan(upper))
    throw NumericalError("no failing exponent found below p_cap for a non-ultrametric space; raise p_cap");

  while (upper - lower > opts.tol) {
    const double mid = 0.5 * (lower + upper);
    ++est.iterations;
    if (detail::holds_at(space, mid))
      lower = mid;
    else
      upper = mid;
  }
  est.lower = lower;
  est.upper = upper;
  est.failure_certificate = negative_type_test(space, upper);
  if (est.failure_certificate->holds)
    throw NumericalError("eigensolver runs disagree at the bracket endpoint");
  return est;
}

}  // namespace genround
