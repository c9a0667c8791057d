#pragma once

// (1+eps)-scale isomorphisms between path metrics on a common tree, the comb identification
// into C(f), and transport of violating simplices along a certified map.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "genround/errors.hpp"
#include "genround/metric.hpp"
#include "genround/negtype.hpp"
#include "genround/trees.hpp"
#include "genround/weights.hpp"

namespace genround {

/// Trees at or below this size get every vertex pair checked when a certificate is issued.
inline constexpr std::size_t kPairwiseCheckMaxVertices = 12;

struct EdgeRatioExtrema {
  double min_ratio = 0.0;  // m*
  double max_ratio = 0.0;  // m
  std::size_t min_edge = 0;
  std::size_t max_edge = 0;
};

struct PairRatioExtrema {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::pair<std::size_t, std::size_t> min_pair{};
  std::pair<std::size_t, std::size_t> max_pair{};
};

struct ScaleIsoCertificate {
  double scale = 1.0;  // n
  double eps = 0.0;
  double ratio_max = 0.0;
  std::size_t max_edge = 0;
  double ratio_min = 0.0;
  std::size_t min_edge = 0;
  bool valid = false;
  /// Set when the pairwise ratio bounds were confirmed on every vertex pair.
  bool pairwise_checked = false;
};

namespace detail {

inline void check_edge_weights(const WeightedTree& tree, std::span<const double> w, const char* name) {
  if (w.size() != tree.edges().size())
    throw ValidationError(std::string(name) + " must give one weight per tree edge");
  for (double x : w)
    if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError(std::string(name) + " must be positive");
}

inline void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
}

// Relative slack on ratio comparisons so that min_distortion's own output certifies.
inline constexpr double kRatioSlack = 1e-12;

}  // namespace detail

/// Extremes of rho(e)/d(e) over the edges of the tree.
inline EdgeRatioExtrema edge_ratio_extrema(const WeightedTree& tree, std::span<const double> d_weights,
                                           std::span<const double> rho_weights) {
  detail::check_edge_weights(tree, d_weights, "d_weights");
  detail::check_edge_weights(tree, rho_weights, "rho_weights");
  if (tree.edges().empty()) throw ValidationError("tree has no edges");
  EdgeRatioExtrema out;
  for (std::size_t e = 0; e < d_weights.size(); ++e) {
    const double r = rho_weights[e] / d_weights[e];
    if (e == 0 || r < out.min_ratio) {
      out.min_ratio = r;
      out.min_edge = e;
    }
    if (e == 0 || r > out.max_ratio) {
      out.max_ratio = r;
      out.max_edge = e;
    }
  }
  return out;
}

/// Extremes of rho(a,b)/d(a,b) over all vertex pairs, from the two full path metrics.
inline PairRatioExtrema pairwise_ratio_extrema(const WeightedTree& tree, std::span<const double> d_weights,
                                               std::span<const double> rho_weights) {
  const auto d = tree_to_metric(tree.with_weights(d_weights));
  const auto rho = tree_to_metric(tree.with_weights(rho_weights));
  if (tree.size() < 2) throw ValidationError("tree has no vertex pairs");
  PairRatioExtrema out;
  bool first = true;
  for (std::size_t a = 0; a < tree.size(); ++a)
    for (std::size_t b = a + 1; b < tree.size(); ++b) {
      const double r = rho(a, b) / d(a, b);
      if (first || r < out.min_ratio) {
        out.min_ratio = r;
        out.min_pair = {a, b};
      }
      if (first || r > out.max_ratio) {
        out.max_ratio = r;
        out.max_pair = {a, b};
      }
      first = false;
    }
  return out;
}

/// Decides whether the identity (T, d) -> (T, rho) is a (1+eps)-scale isomorphism using only
/// edge ratios: some n works iff m / m* <= (1+eps)/(1-eps). The reported n is sqrt(m m*)
/// clamped into the feasible interval [m/(1+eps), m*/(1-eps)].
inline ScaleIsoCertificate certify_scale_iso(const WeightedTree& tree, std::span<const double> d_weights,
                                             std::span<const double> rho_weights, double eps) {
  detail::check_eps(eps);
  const auto ext = edge_ratio_extrema(tree, d_weights, rho_weights);
  ScaleIsoCertificate cert;
  cert.eps = eps;
  cert.ratio_max = ext.max_ratio;
  cert.ratio_min = ext.min_ratio;
  cert.max_edge = ext.max_edge;
  cert.min_edge = ext.min_edge;
  cert.valid = ext.max_ratio * (1.0 - eps) <= ext.min_ratio * (1.0 + eps) * (1.0 + detail::kRatioSlack);

  const double lo = ext.max_ratio / (1.0 + eps);
  const double hi = ext.min_ratio / (1.0 - eps);
  cert.scale = std::sqrt(ext.max_ratio * ext.min_ratio);
  if (cert.valid) cert.scale = std::clamp(cert.scale, std::min(lo, hi), std::max(lo, hi));

  if (cert.valid && tree.size() <= kPairwiseCheckMaxVertices && tree.size() >= 2) {
    const auto pairs = pairwise_ratio_extrema(tree, d_weights, rho_weights);
    const double slack = 1.0 + 1e-9;
    if (pairs.max_ratio > (1.0 + eps) * cert.scale * slack || pairs.min_ratio * slack < (1.0 - eps) * cert.scale)
      throw NumericalError("edge-ratio certificate contradicted by a vertex pair");
    cert.pairwise_checked = true;
  }
  return cert;
}

/// Smallest eps for which certify_scale_iso succeeds: (m - m*) / (m + m*).
inline double min_distortion(const WeightedTree& tree, std::span<const double> d_weights,
                             std::span<const double> rho_weights) {
  const auto ext = edge_ratio_extrema(tree, d_weights, rho_weights);
  return (ext.max_ratio - ext.min_ratio) / (ext.max_ratio + ext.min_ratio);
}

struct CombRepresentation {
  /// Smallest n0 at which every ratio f(n0+k)/f(n0), k = 0..m, lies in [1-eps, 1+eps].
  std::uint64_t window_start = 0;
  /// Smallest n0 (never above window_start) whose restricted edge weights certify.
  std::uint64_t n0 = 0;
  WeightedTree source;  // C_m(1)
  WeightedTree target;  // subtree of C(f) on x_{n0+k}, y_{n0+k}
  /// source vertex i -> target vertex i; labels recorded for output.
  std::vector<std::pair<std::string, std::string>> vertex_map;
  ScaleIsoCertificate certificate;
};

/// Identifies C_m(1) with the subtree of C(f) starting at x_{n0} and certifies the
/// identification as a (1+eps)-scale isomorphism. Returns nothing when f has no window of
/// width eps up to n_max.
inline std::optional<CombRepresentation> comb_local_representation(const WeightFunction& f, std::uint64_t m,
                                                                   double eps, std::uint64_t n_max) {
  detail::check_eps(eps);
  const auto window = sub_exponential_window(f, m, eps, n_max);
  if (!window) return std::nullopt;

  CombRepresentation rep;
  rep.window_start = *window;
  rep.source = build_comb({m, WeightFunction::constant(1.0)});
  const std::vector<double> unit(rep.source.edges().size(), 1.0);
  for (std::uint64_t n0 = 1; n0 <= *window; ++n0) {
    WeightedTree target = build_comb({m, f}, n0);
    const auto rho = target.weights();
    const auto cert = certify_scale_iso(rep.source, unit, rho, eps);
    if (!cert.valid) continue;
    rep.n0 = n0;
    rep.target = std::move(target);
    rep.certificate = cert;
    break;
  }
  if (rep.n0 == 0) throw NumericalError("window found but its comb failed to certify");
  for (std::size_t i = 0; i < rep.source.size(); ++i)
    rep.vertex_map.emplace_back(rep.source.vertices()[i], rep.target.vertices()[i]);
  return rep;
}

/// Carries a violating simplex of `source` through `map` (source index -> target index) when
/// (1-eps)^p LHS > (1+eps)^p RHS. The map must be injective on the simplex points and a
/// (1+eps)-scale isomorphism on them; the returned simplex then violates the inequality in
/// `target`.
inline std::optional<Simplex> transport_violation(const FiniteMetricSpace& source, const Simplex& s, double p,
                                                  const FiniteMetricSpace& target, std::span<const std::size_t> map,
                                                  double eps) {
  detail::check_eps(eps);
  s.validate(source.size());
  if (map.size() != source.size()) throw ValidationError("map must assign a target point to every source point");

  std::vector<std::size_t> points(s.a);
  points.insert(points.end(), s.b.begin(), s.b.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<std::size_t> images;
  for (auto x : points) {
    if (map[x] >= target.size()) throw ValidationError("map sends a point outside the target space");
    images.push_back(map[x]);
  }
  std::sort(images.begin(), images.end());
  if (std::adjacent_find(images.begin(), images.end()) != images.end())
    throw ValidationError("map is not injective on the simplex points");

  if (!(simplex_gap(source, s, p) < 0.0)) throw ValidationError("simplex does not violate the inequality at p");

  if (points.size() >= 2) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        const double r = target(map[points[i]], map[points[j]]) / source(points[i], points[j]);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    if (hi * (1.0 - eps) > lo * (1.0 + eps) * (1.0 + detail::kRatioSlack))
      throw ValidationError("map is not a (1+eps)-scale isomorphism on the simplex points");
  }

  const std::size_t k = s.order();
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j)
      lhs += distance_power(source(s.a[i], s.a[j]), p) + distance_power(source(s.b[i], s.b[j]), p);
    for (std::size_t j = 0; j < k; ++j) rhs += distance_power(source(s.a[i], s.b[j]), p);
  }
  if (!(std::pow(1.0 - eps, p) * lhs > std::pow(1.0 + eps, p) * rhs)) return std::nullopt;

  Simplex image;
  for (auto x : s.a) image.a.push_back(map[x]);
  for (auto x : s.b) image.b.push_back(map[x]);
  return image;
}

}  // namespace genround
