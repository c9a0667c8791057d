#pragma once

// Comb and spherically symmetric tree constructors, the star-configuration upper bound for
// SSTs, and sampled checks of additive sub-exponentiality.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genround/errors.hpp"
#include "genround/metric.hpp"
#include "genround/negtype.hpp"
#include "genround/weights.hpp"

namespace genround {

struct CombSpec {
  std::uint64_t m = 1;
  WeightFunction weights = WeightFunction::constant(1.0);
};

/// Comb with spine x_s..x_{s+m} and teeth y_s..y_{s+m}, where s = first. The spine edge
/// {x_j, x_{j+1}} and the tooth {x_j, y_j} both carry f(j). first = 1 gives C_m(f); other
/// values give the subtree of C(f) that starts at x_first.
inline WeightedTree build_comb(const CombSpec& spec, std::uint64_t first = 1) {
  if (spec.m < 1) throw ValidationError("comb size m must be at least 1");
  if (first < 1) throw ValidationError("comb vertices start at x_1");
  const std::size_t count = std::size_t(spec.m) + 1;
  std::vector<std::string> vertices;
  vertices.reserve(2 * count);
  for (std::size_t k = 0; k < count; ++k) vertices.push_back("x" + std::to_string(first + k));
  for (std::size_t k = 0; k < count; ++k) vertices.push_back("y" + std::to_string(first + k));
  std::vector<TreeEdge> edges;
  edges.reserve(2 * count - 1);
  for (std::size_t k = 0; k + 1 < count; ++k) edges.push_back({k, k + 1, spec.weights(first + k)});
  for (std::size_t k = 0; k < count; ++k) edges.push_back({k, count + k, spec.weights(first + k)});
  return WeightedTree(std::move(vertices), std::move(edges));
}

struct SSTSpec {
  std::vector<std::uint64_t> degrees;  // d_0 .. d_{n-1}
  std::vector<double> lengths;         // l_0 .. l_{n-1}

  std::size_t depth() const noexcept { return degrees.size(); }

  void validate() const {
    if (degrees.size() != lengths.size()) throw ValidationError("degree and length sequences differ in length");
    if (degrees.empty()) throw ValidationError("SST needs depth at least 1");
    for (auto d : degrees)
      if (d < 1) throw ValidationError("SST degrees must be >= 1");
    for (double l : lengths)
      if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("SST lengths must be positive");
  }

  /// Number of vertices on each level 0..n (saturating at UINT64_MAX).
  std::vector<std::uint64_t> level_sizes() const {
    std::vector<std::uint64_t> sizes{1};
    for (auto d : degrees) {
      const std::uint64_t prev = sizes.back();
      sizes.push_back(prev > UINT64_MAX / d ? UINT64_MAX : prev * d);
    }
    return sizes;
  }

  std::uint64_t vertex_count() const {
    std::uint64_t total = 0;
    for (auto s : level_sizes()) total = (UINT64_MAX - total < s) ? UINT64_MAX : total + s;
    return total;
  }
};

inline constexpr std::uint64_t kDefaultVertexCap = 100000;

/// Rooted SST, vertices laid out level by level: level j occupies a contiguous block and the
/// c-th child of the t-th level-j vertex is the (t d_j + c)-th vertex of level j+1. The root is
/// "v" and children append ".c" to their parent's label.
inline WeightedTree build_sst(const SSTSpec& spec, std::uint64_t vertex_cap = kDefaultVertexCap) {
  spec.validate();
  const auto total = spec.vertex_count();
  if (total > vertex_cap)
    throw ValidationError("SST has " + (total == UINT64_MAX ? std::string("too many") : std::to_string(total)) +
                          " vertices, above the cap of " + std::to_string(vertex_cap));
  const auto sizes = spec.level_sizes();
  std::vector<std::string> vertices{"v"};
  vertices.reserve(std::size_t(total));
  std::vector<TreeEdge> edges;
  edges.reserve(std::size_t(total) - 1);
  std::size_t level_start = 0;
  for (std::size_t j = 0; j < spec.depth(); ++j) {
    const std::size_t next_start = level_start + std::size_t(sizes[j]);
    for (std::size_t t = 0; t < sizes[j]; ++t) {
      const std::size_t parent = level_start + t;
      for (std::uint64_t c = 0; c < spec.degrees[j]; ++c) {
        const std::size_t child = next_start + t * std::size_t(spec.degrees[j]) + std::size_t(c);
        vertices.push_back(vertices[parent] + "." + std::to_string(c));
        edges.push_back({parent, child, spec.lengths[j]});
      }
    }
    level_start = next_start;
  }
  return WeightedTree(std::move(vertices), std::move(edges));
}

struct SstBoundTerm {
  std::size_t k = 0;
  std::uint64_t q = 0;  // d_0 ... d_k
  double bound = 0.0;
};

struct SstBoundReport {
  std::vector<double> partial_sums;  // M_1 .. M_n
  std::size_t m_index = 0;           // largest k with M_k < M_n / 2 (M_0 = 0)
  std::vector<SstBoundTerm> per_k;
  double best = 2.0;
};

/// Upper bounds on the supremal exponent of a finite SST from the star configuration of
/// q = d_0...d_k leaves against the root:
///   ln(2 + 2/(q - 1)) / ln(2 - 2 M_k / M_n)   for 0 <= k <= m with q > 1.
/// best is the smallest of these, or the midpoint bound 2 when no k qualifies.
inline SstBoundReport sst_upper_bound(const SSTSpec& spec) {
  spec.validate();
  bool nontrivial = false;
  for (auto d : spec.degrees) nontrivial = nontrivial || d > 1;
  if (!nontrivial) throw ValidationError("downward degree sequence is trivial (all degrees are 1)");

  SstBoundReport report;
  const std::size_t n = spec.depth();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += spec.lengths[i];
    report.partial_sums.push_back(acc);
  }
  const double total = report.partial_sums.back();
  if (!(2.0 * spec.lengths[0] < total)) throw ValidationError("hypothesis 2 l_0 < l_0 + ... + l_{n-1} fails");

  auto partial = [&](std::size_t k) { return k == 0 ? 0.0 : report.partial_sums[k - 1]; };
  for (std::size_t k = 0; k <= n; ++k)
    if (partial(k) < 0.5 * total) report.m_index = k;

  std::uint64_t q = 1;
  bool any = false;
  for (std::size_t k = 0; k <= report.m_index && k < n; ++k) {
    q = (q > UINT64_MAX / spec.degrees[k]) ? UINT64_MAX : q * spec.degrees[k];
    if (q <= 1) continue;
    const double value = std::log(2.0 + 2.0 / (double(q) - 1.0)) / std::log(2.0 - 2.0 * partial(k) / total);
    report.per_k.push_back({k, q, value});
    if (!any || value < report.best) report.best = value;
    any = true;
  }
  if (!any) report.best = 2.0;
  return report;
}

/// The configuration behind the bound for a given k, as indices into build_sst(spec): one
/// leaf under each child of each level-k vertex on side a (leftmost descendant), the root
/// repeated q times on side b.
inline Simplex sst_star_simplex(const SSTSpec& spec, std::size_t k) {
  spec.validate();
  if (k >= spec.depth()) throw ValidationError("star level must be below the SST depth");
  const auto sizes = spec.level_sizes();
  std::size_t leaf_start = 0;
  for (std::size_t j = 0; j < spec.depth(); ++j) leaf_start += std::size_t(sizes[j]);
  std::size_t below = 1;  // leaves under one level-(k+1) vertex
  for (std::size_t j = k + 1; j < spec.depth(); ++j) below *= std::size_t(spec.degrees[j]);
  Simplex s;
  for (std::size_t child = 0; child < sizes[k + 1]; ++child) {
    s.a.push_back(leaf_start + child * below);
    s.b.push_back(0);
  }
  return s;
}

/// Smallest n0 in [1, n_max] with 1 - eps <= f(n0 + k) / f(n0) <= 1 + eps for k = 0..m.
/// Non-finite samples never qualify.
inline std::optional<std::uint64_t> sub_exponential_window(const WeightFunction& f, std::uint64_t m, double eps,
                                                           std::uint64_t n_max) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
  if (m < 1) throw ValidationError("m must be at least 1");
  // Ratios that land exactly on 1 +/- eps (e.g. 11/10 against 1.1) count as inside.
  const double slack = 1e-12;
  for (std::uint64_t n0 = 1; n0 <= n_max && n0 + m < f.domain_end(); ++n0) {
    const double base = f.raw(n0);
    if (!(base > 0.0) || !std::isfinite(base)) continue;
    bool inside = true;
    for (std::uint64_t k = 1; k <= m && inside; ++k) {
      const double r = f.raw(n0 + k) / base;
      inside = std::isfinite(r) && r >= 1.0 - eps - slack && r <= 1.0 + eps + slack;
    }
    if (inside) return n0;
  }
  return std::nullopt;
}

/// Empirical certificate that f(n + m)/f(n) -> 1: a window exists for every eps in the
/// (strictly decreasing, positive) schedule.
inline bool is_additively_subexponential_sample(const WeightFunction& f, std::uint64_t m,
                                                const std::vector<double>& eps_schedule, std::uint64_t n_max) {
  if (eps_schedule.empty()) throw ValidationError("eps schedule is empty");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0)) throw ValidationError("eps schedule must be positive");
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])) throw ValidationError("eps schedule must decrease");
  }
  for (double eps : eps_schedule)
    if (!sub_exponential_window(f, m, eps, n_max)) return false;
  return true;
}

/// Pairwise Minkowski distances under the given norm exponent (p_norm = inf allowed).
inline FiniteMetricSpace lp_point_set(const std::vector<std::vector<double>>& points, double p_norm) {
  if (!(p_norm >= 1.0)) throw ValidationError("p_norm must be >= 1");
  if (points.empty()) throw ValidationError("point set is empty");
  const std::size_t dim = points.front().size();
  for (const auto& x : points)
    if (x.size() != dim) throw ValidationError("points have mismatched dimensions");
  const auto k = Eigen::Index(points.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double diff = std::abs(points[std::size_t(i)][c] - points[std::size_t(j)][c]);
        acc = std::isinf(p_norm) ? std::max(acc, diff) : acc + std::pow(diff, p_norm);
      }
      d(i, j) = d(j, i) = std::isinf(p_norm) ? acc : std::pow(acc, 1.0 / p_norm);
    }
  return validate_metric(d);
}

}  // namespace genround
