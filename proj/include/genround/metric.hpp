#pragma once

// Finite metric spaces, weighted trees and the transforms between them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "genround/errors.hpp"

namespace genround {

/// Absolute slack on triangle and ultrametric comparisons, scaled up for distances above 1.
inline constexpr double kMetricSlack = 1e-12;

inline double metric_slack(double magnitude) { return kMetricSlack * std::max(1.0, magnitude); }

/// d^p with the convention 0^p = 0 for every p >= 0 (coincident points contribute nothing,
/// which makes p = 0 an exponent of every space).
inline double distance_power(double d, double p) { return d == 0.0 ? 0.0 : std::pow(d, p); }

class FiniteMetricSpace;
class WeightedTree;
struct TransformSpec;

FiniteMetricSpace validate_metric(const Eigen::MatrixXd& matrix, std::vector<std::string> labels);
FiniteMetricSpace tree_to_metric(const WeightedTree& tree);
FiniteMetricSpace power_transform(const FiniteMetricSpace& space, const TransformSpec& spec,
                                  bool require_metric);
FiniteMetricSpace restrict(const FiniteMetricSpace& space, std::span<const std::size_t> indices);

/// Immutable labelled distance matrix. Every instance is symmetric with zero diagonal and
/// positive off-diagonal entries; is_metric() is false only for power transforms that were
/// explicitly allowed to break the triangle inequality.
class FiniteMetricSpace {
 public:
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Eigen::MatrixXd& dist() const noexcept { return dist_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_(Eigen::Index(i), Eigen::Index(j)); }
  bool is_metric() const noexcept { return metric_; }
  double diameter() const { return size() == 0 ? 0.0 : dist_.maxCoeff(); }

  /// Same space with every distance multiplied by c > 0.
  FiniteMetricSpace scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("scale factor must be positive");
    return FiniteMetricSpace(labels_, dist_ * c, metric_);
  }

 private:
  FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist, bool metric)
      : labels_(std::move(labels)), dist_(std::move(dist)), metric_(metric) {}

  friend FiniteMetricSpace validate_metric(const Eigen::MatrixXd&, std::vector<std::string>);
  friend FiniteMetricSpace tree_to_metric(const WeightedTree&);
  friend FiniteMetricSpace power_transform(const FiniteMetricSpace&, const TransformSpec&, bool);
  friend FiniteMetricSpace restrict(const FiniteMetricSpace&, std::span<const std::size_t>);

  std::vector<std::string> labels_;
  Eigen::MatrixXd dist_;
  bool metric_ = true;
};

namespace detail {

inline std::vector<std::string> default_labels(std::size_t k) {
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(std::to_string(i));
  return out;
}

// Returns the first triple (i, j, l) with d(i,j) > d(i,l) + d(l,j), scanning i < j then l.
inline bool find_triangle_violation(const Eigen::MatrixXd& d, std::array<std::size_t, 3>& witness) {
  const Eigen::Index k = d.rows();
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double dij = d(i, j);
      const double slack = metric_slack(dij);
      for (Eigen::Index l = 0; l < k; ++l) {
        if (l == i || l == j) continue;
        if (dij > d(i, l) + d(l, j) + slack) {
          witness = {std::size_t(i), std::size_t(j), std::size_t(l)};
          return true;
        }
      }
    }
  }
  return false;
}

// Checks everything except the triangle inequality.
inline void check_dissimilarity(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw MetricError(MetricViolation::not_square, {0, 0, 0});
  const Eigen::Index k = m.rows();
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      if (!std::isfinite(m(i, j)) || m(i, j) < 0.0)
        throw MetricError(MetricViolation::not_finite, {std::size_t(i), std::size_t(j), std::size_t(j)});
  for (Eigen::Index i = 0; i < k; ++i)
    if (m(i, i) != 0.0)
      throw MetricError(MetricViolation::nonzero_diagonal, {std::size_t(i), std::size_t(i), std::size_t(i)});
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      if (m(i, j) != m(j, i))
        throw MetricError(MetricViolation::asymmetric, {std::size_t(i), std::size_t(j), std::size_t(j)});
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      if (!(m(i, j) > 0.0))
        throw MetricError(MetricViolation::nonpositive_distance, {std::size_t(i), std::size_t(j), std::size_t(j)});
}

}  // namespace detail

/// Checks every metric invariant and returns the space, or throws MetricError naming the
/// first violation. Empty labels are replaced by "0", "1", ...
inline FiniteMetricSpace validate_metric(const Eigen::MatrixXd& matrix, std::vector<std::string> labels = {}) {
  detail::check_dissimilarity(matrix);
  if (labels.empty()) labels = detail::default_labels(std::size_t(matrix.rows()));
  if (labels.size() != std::size_t(matrix.rows()))
    throw ValidationError("label count does not match matrix order");
  std::array<std::size_t, 3> witness{};
  if (detail::find_triangle_violation(matrix, witness))
    throw MetricError(MetricViolation::triangle_inequality, witness);
  return FiniteMetricSpace(std::move(labels), matrix, true);
}

inline FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& rows,
                                         std::vector<std::string> labels = {}) {
  const std::size_t k = rows.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    if (rows[i].size() != k) throw MetricError(MetricViolation::not_square, {i, i, i});
    for (std::size_t j = 0; j < k; ++j) m(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
  }
  return validate_metric(m, std::move(labels));
}

struct TreeEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

/// Finite tree with positive edge lengths. Vertex identifiers are opaque strings and keep
/// their input order.
class WeightedTree {
 public:
  WeightedTree() = default;

  WeightedTree(std::vector<std::string> vertices, std::vector<TreeEdge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    validate();
  }

  /// Builds from labelled endpoints.
  static WeightedTree from_labels(std::vector<std::string> vertices,
                                  const std::vector<std::tuple<std::string, std::string, double>>& edges) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < vertices.size(); ++i) index.emplace(vertices[i], i);
    std::vector<TreeEdge> out;
    out.reserve(edges.size());
    for (const auto& [u, v, w] : edges) {
      auto iu = index.find(u);
      auto iv = index.find(v);
      if (iu == index.end() || iv == index.end())
        throw ValidationError("edge endpoint '" + (iu == index.end() ? u : v) + "' is not a vertex");
      out.push_back({iu->second, iv->second, w});
    }
    return WeightedTree(std::move(vertices), std::move(out));
  }

  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<TreeEdge>& edges() const noexcept { return edges_; }

  /// (neighbour, edge index) lists.
  const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adjacency() const noexcept {
    return adjacency_;
  }

  std::vector<double> weights() const {
    std::vector<double> w;
    w.reserve(edges_.size());
    for (const auto& e : edges_) w.push_back(e.weight);
    return w;
  }

  /// Same topology, new edge lengths (one per edge, in edge order).
  WeightedTree with_weights(std::span<const double> weights) const {
    if (weights.size() != edges_.size()) throw ValidationError("weight count does not match edge count");
    std::vector<TreeEdge> e = edges_;
    for (std::size_t i = 0; i < e.size(); ++i) e[i].weight = weights[i];
    return WeightedTree(vertices_, std::move(e));
  }

  std::size_t index_of(std::string_view label) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (vertices_[i] == label) return i;
    throw ValidationError("unknown vertex '" + std::string(label) + "'");
  }

 private:
  void validate() {
    const std::size_t n = vertices_.size();
    if (n == 0) throw ValidationError("tree has no vertices");
    {
      std::vector<std::string> sorted = vertices_;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("duplicate vertex identifier");
    }
    if (edges_.size() != n - 1) throw ValidationError("tree must have exactly |V|-1 edges");
    adjacency_.assign(n, {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& edge = edges_[e];
      if (edge.u >= n || edge.v >= n) throw ValidationError("edge endpoint out of range");
      if (edge.u == edge.v) throw ValidationError("self-loop in tree");
      if (!(edge.weight > 0.0) || !std::isfinite(edge.weight))
        throw ValidationError("edge weights must be finite and strictly positive");
      adjacency_[edge.u].emplace_back(edge.v, e);
      adjacency_[edge.v].emplace_back(edge.u, e);
    }
    // n-1 edges and connected implies acyclic.
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (auto [y, e] : adjacency_[x]) {
        if (!seen[y]) {
          seen[y] = true;
          ++reached;
          stack.push_back(y);
        }
      }
    }
    if (reached != n) throw ValidationError("tree is not connected");
  }

  std::vector<std::string> vertices_;
  std::vector<TreeEdge> edges_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
};

/// Shortest-path metric of a tree, one traversal per source vertex.
inline FiniteMetricSpace tree_to_metric(const WeightedTree& tree) {
  const std::size_t n = tree.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
  std::vector<std::size_t> stack;
  std::vector<std::size_t> parent(n);
  for (std::size_t s = 0; s < n; ++s) {
    stack.assign(1, s);
    parent[s] = s;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (auto [y, e] : tree.adjacency()[x]) {
        if (y == parent[x]) continue;
        parent[y] = x;
        d(Eigen::Index(s), Eigen::Index(y)) = d(Eigen::Index(s), Eigen::Index(x)) + tree.edges()[e].weight;
        stack.push_back(y);
      }
    }
  }
  // Path sums accumulate in different orders from the two ends; keep the matrix exactly symmetric.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d(Eigen::Index(j), Eigen::Index(i)) = d(Eigen::Index(i), Eigen::Index(j));
  return FiniteMetricSpace(tree.vertices(), std::move(d), true);
}

/// Metric transform d -> d^p, or d -> sqrt(d^p) when half is set.
struct TransformSpec {
  double p = 1.0;
  bool half = false;

  double effective_exponent() const { return half ? p / 2.0 : p; }
};

/// Entrywise power of the distance matrix. When require_metric is set the result must satisfy
/// the triangle inequality (guaranteed whenever the effective exponent is at most 1); otherwise
/// a semimetric may be returned with is_metric() == false.
inline FiniteMetricSpace power_transform(const FiniteMetricSpace& space, const TransformSpec& spec,
                                         bool require_metric = true) {
  if (!(spec.p >= 0.0) || !std::isfinite(spec.p)) throw ValidationError("transform exponent must be >= 0");
  const double e = spec.effective_exponent();
  Eigen::MatrixXd out = space.dist().unaryExpr([e](double d) { return distance_power(d, e); });
  if (e == 0.0) out.diagonal().setZero();
  bool metric = space.is_metric() && e <= 1.0;
  if (!metric) {
    std::array<std::size_t, 3> witness{};
    const bool violated = detail::find_triangle_violation(out, witness);
    if (violated && require_metric) throw MetricError(MetricViolation::triangle_inequality, witness);
    metric = !violated;
  }
  return FiniteMetricSpace(space.labels(), std::move(out), metric);
}

/// True iff d(i,j) <= max(d(i,l), d(l,j)) for every triple.
inline bool is_ultrametric(const FiniteMetricSpace& space) {
  const auto& d = space.dist();
  const Eigen::Index k = d.rows();
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double dij = d(i, j);
      const double slack = metric_slack(dij);
      for (Eigen::Index l = 0; l < k; ++l)
        if (l != i && l != j && dij > std::max(d(i, l), d(l, j)) + slack) return false;
    }
  return true;
}

/// Principal submatrix on the chosen points, in the given order.
inline FiniteMetricSpace restrict(const FiniteMetricSpace& space, std::span<const std::size_t> indices) {
  if (indices.empty()) throw ValidationError("restriction needs at least one index");
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("restriction indices must be distinct");
  if (sorted.back() >= space.size()) throw ValidationError("restriction index out of range");
  const auto k = Eigen::Index(indices.size());
  Eigen::MatrixXd sub(k, k);
  std::vector<std::string> labels;
  labels.reserve(indices.size());
  for (Eigen::Index a = 0; a < k; ++a) {
    labels.push_back(space.labels()[indices[std::size_t(a)]]);
    for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = space(indices[std::size_t(a)], indices[std::size_t(b)]);
  }
  return FiniteMetricSpace(std::move(labels), std::move(sub), space.is_metric());
}

inline FiniteMetricSpace restrict(const FiniteMetricSpace& space, std::initializer_list<std::size_t> indices) {
  return restrict(space, std::span<const std::size_t>(indices.begin(), indices.size()));
}

}  // namespace genround
