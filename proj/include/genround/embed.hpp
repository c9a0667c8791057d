#pragma once

// Euclidean realization of the metric transform sqrt(d^p) by double centring, with a
// balanced witness vector when no such realization exists.

#include <cmath>
#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "genround/errors.hpp"
#include "genround/jacobi.hpp"
#include "genround/metric.hpp"
#include "genround/negtype.hpp"

namespace genround {

struct EmbeddingResult {
  /// One row per point, columns in descending eigenvalue order.
  Eigen::MatrixXd coordinates;
  /// All k eigenvalues of G = -1/2 P D_p P, descending.
  std::vector<double> gram_eigenvalues;
  std::size_t affine_rank = 0;
  double max_distance_error = 0.0;
};

/// Proof that sqrt(d^p) has no isometric Euclidean realization: a balanced eta along the most
/// negative Gram eigenvalue, with sum d^p eta_i eta_j > 0.
struct EmbeddingFailure {
  std::vector<double> witness_eta;
  double min_gram_eigenvalue = 0.0;
  double form_value = 0.0;
};

using EmbedOutcome = std::variant<EmbeddingResult, EmbeddingFailure>;

inline constexpr double kGramRankTol = 1e-9;

namespace detail {

inline double max_pair_error(const Eigen::MatrixXd& x, const FiniteMetricSpace& space, double p) {
  double worst = 0.0;
  const Eigen::Index k = x.rows();
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double target = distance_power(space(std::size_t(i), std::size_t(j)), 0.5 * p);
      worst = std::max(worst, std::abs((x.row(i) - x.row(j)).norm() - target));
    }
  return worst;
}

}  // namespace detail

/// Embeds (X, sqrt(d^p)) in R^r, r = affine rank, or returns the failure witness.
inline EmbedOutcome schoenberg_embed(const FiniteMetricSpace& space, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw ValidationError("embedding exponent must be positive");
  const Eigen::Index k = Eigen::Index(space.size());
  Eigen::MatrixXd dp(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) dp(i, j) = distance_power(space(std::size_t(i), std::size_t(j)), p);

  // G = -1/2 P D_p P
  Eigen::MatrixXd g = dp;
  const Eigen::VectorXd row_mean = dp.rowwise().mean();
  const Eigen::RowVectorXd col_mean = dp.colwise().mean();
  g.colwise() -= row_mean;
  g.rowwise() -= col_mean;
  g.array() += dp.mean();
  g *= -0.5;
  g = 0.5 * (g + g.transpose()).eval();

  const SymmetricEigen eig = jacobi_eigen(g);
  const double floor = kGramRankTol * std::max(g.trace(), 0.0) / double(std::max<Eigen::Index>(k, 1));

  if (k > 0 && eig.values(k - 1) < -floor) {
    EmbeddingFailure failure;
    Eigen::VectorXd eta = eig.vectors.col(k - 1);
    eta.array() -= eta.mean();
    eta /= eta.norm();
    failure.witness_eta.assign(eta.data(), eta.data() + k);
    failure.min_gram_eigenvalue = eig.values(k - 1);
    failure.form_value = quadratic_form(space, p, failure.witness_eta);
    return failure;
  }

  EmbeddingResult result;
  result.gram_eigenvalues.assign(eig.values.data(), eig.values.data() + k);
  Eigen::Index rank = 0;
  while (rank < k && eig.values(rank) > floor) ++rank;
  result.affine_rank = std::size_t(rank);
  result.coordinates.resize(k, rank);
  for (Eigen::Index c = 0; c < rank; ++c) result.coordinates.col(c) = eig.vectors.col(c) * std::sqrt(eig.values(c));
  result.max_distance_error = detail::max_pair_error(result.coordinates, space, p);
  return result;
}

/// Recomputes pairwise row distances against dist^{p/2} and the affine rank of the rows.
inline bool verify_embedding(const EmbeddingResult& result, const FiniteMetricSpace& space, double p, double tol) {
  if (std::size_t(result.coordinates.rows()) != space.size()) return false;
  if (detail::max_pair_error(result.coordinates, space, p) > tol) return false;
  if (result.coordinates.cols() == 0) return result.affine_rank == 0;
  Eigen::MatrixXd centred = result.coordinates.rowwise() - result.coordinates.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred);
  const Eigen::VectorXd sq = svd.singularValues().array().square();
  const double floor = kGramRankTol * sq.sum() / double(space.size());
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sq.size(); ++i)
    if (sq(i) > floor) ++rank;
  return rank == result.affine_rank;
}

}  // namespace genround
