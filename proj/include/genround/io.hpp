#pragma once

// JSON and CSV encodings of inputs, specs and reports.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "genround/embed.hpp"
#include "genround/errors.hpp"
#include "genround/metric.hpp"
#include "genround/negtype.hpp"
#include "genround/scaleiso.hpp"
#include "genround/trees.hpp"
#include "genround/weights.hpp"

namespace genround::io {

using json = nlohmann::json;

namespace detail {

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

inline std::string label_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ValidationError("vertex identifiers must be strings or integers");
}

}  // namespace detail

inline std::string format_double(double x) { return genround::detail::format_double(x); }

/// FNV-1a 64 over the compact dump, as 16 hex digits.
inline std::string spec_hash(const json& spec) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : spec.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

// ---- metric spaces and trees ----

/// {"labels":[...], "dist":[[...]]}
inline FiniteMetricSpace parse_space(const json& j) {
  const auto rows = detail::get_field<std::vector<std::vector<double>>>(j, "dist");
  std::vector<std::string> labels;
  if (j.contains("labels"))
    for (const auto& l : j.at("labels")) labels.push_back(detail::label_of(l));
  return validate_metric(rows, std::move(labels));
}

/// {"vertices":[...], "edges":[{"u":..,"v":..,"w":..}]}
inline WeightedTree parse_tree(const json& j) {
  if (!j.contains("vertices") || !j.at("vertices").is_array()) throw ValidationError("missing field 'vertices'");
  if (!j.contains("edges") || !j.at("edges").is_array()) throw ValidationError("missing field 'edges'");
  std::vector<std::string> vertices;
  for (const auto& v : j.at("vertices")) vertices.push_back(detail::label_of(v));
  std::vector<std::tuple<std::string, std::string, double>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.contains("u") || !e.contains("v")) throw ValidationError("edge needs 'u' and 'v'");
    const double w = e.contains("w") ? detail::get_field<double>(e, "w") : 1.0;
    edges.emplace_back(detail::label_of(e.at("u")), detail::label_of(e.at("v")), w);
  }
  return WeightedTree::from_labels(std::move(vertices), edges);
}

inline bool looks_like_tree(const json& j) { return j.is_object() && j.contains("edges"); }

/// Accepts either schema; trees are converted to their path metric.
inline FiniteMetricSpace parse_space_or_tree(const json& j) {
  return looks_like_tree(j) ? tree_to_metric(parse_tree(j)) : parse_space(j);
}

inline json to_json(const FiniteMetricSpace& space) {
  json dist = json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(space(i, j));
    dist.push_back(std::move(row));
  }
  return {{"labels", space.labels()}, {"dist", std::move(dist)}};
}

inline json to_json(const WeightedTree& tree) {
  json edges = json::array();
  for (const auto& e : tree.edges())
    edges.push_back({{"u", tree.vertices()[e.u]}, {"v", tree.vertices()[e.v]}, {"w", e.weight}});
  return {{"vertices", tree.vertices()}, {"edges", std::move(edges)}};
}

// ---- generator specs ----

inline WeightFunction parse_weight_function(const json& j) {
  if (j.is_string()) return WeightFunction::parse(j.get<std::string>());
  if (j.is_number()) return WeightFunction::constant(j.get<double>());
  throw ValidationError("weight function must be a string such as \"constant(1)\"");
}

/// {"m": 2, "f": "constant(1)"}
inline CombSpec parse_comb_spec(const json& j) {
  CombSpec spec;
  const auto m = detail::get_field<long long>(j, "m");
  if (m < 1) throw ValidationError("comb size m must be at least 1");
  spec.m = std::uint64_t(m);
  if (j.contains("f")) spec.weights = parse_weight_function(j.at("f"));
  return spec;
}

/// {"degrees": [...], "lengths": [...]}
inline SSTSpec parse_sst_spec(const json& j) {
  SSTSpec spec;
  for (long long d : detail::get_field<std::vector<long long>>(j, "degrees")) {
    if (d < 1) throw ValidationError("SST degrees must be >= 1");
    spec.degrees.push_back(std::uint64_t(d));
  }
  spec.lengths = detail::get_field<std::vector<double>>(j, "lengths");
  spec.validate();
  return spec;
}

inline json to_json(const SSTSpec& spec) { return {{"degrees", spec.degrees}, {"lengths", spec.lengths}}; }

struct LpSpec {
  std::vector<std::vector<double>> points;
  double p_norm = 2.0;
};

/// {"points": [[...], ...], "p": 2}; p may be the string "inf".
inline LpSpec parse_lp_spec(const json& j) {
  LpSpec spec;
  spec.points = detail::get_field<std::vector<std::vector<double>>>(j, "points");
  if (j.contains("p")) {
    const auto& p = j.at("p");
    if (p.is_string() && p.get<std::string>() == "inf")
      spec.p_norm = std::numeric_limits<double>::infinity();
    else
      spec.p_norm = detail::get_field<double>(j, "p");
  }
  return spec;
}

inline Simplex parse_simplex(const json& j) {
  Simplex s;
  s.a = detail::get_field<std::vector<std::size_t>>(j, "a");
  s.b = detail::get_field<std::vector<std::size_t>>(j, "b");
  return s;
}

// ---- reports ----

inline json to_json(const Simplex& s) { return {{"a", s.a}, {"b", s.b}}; }

inline json to_json(const NegTypeReport& r) {
  return {{"exponent", r.exponent},
          {"holds", r.holds},
          {"strict", r.strict},
          {"max_form_value", r.max_form_value},
          {"witness_eta", r.witness_eta}};
}

inline json to_json(const RoundnessEstimate& r) {
  json out = {{"lower", r.lower},
              {"upper", r.infinite ? json(nullptr) : json(r.upper)},
              {"infinite", r.infinite},
              {"iterations", r.iterations}};
  out["failure_certificate"] = r.failure_certificate ? to_json(*r.failure_certificate) : json(nullptr);
  return out;
}

inline json to_json(const SstBoundReport& r) {
  json terms = json::array();
  for (const auto& t : r.per_k) terms.push_back({{"k", t.k}, {"q", t.q}, {"bound", t.bound}});
  return {{"M", r.partial_sums}, {"m_index", r.m_index}, {"per_k", std::move(terms)}, {"best", r.best}};
}

inline const char* sst_bound_csv_header() { return "spec_hash,n,m_index,best"; }

inline std::string sst_bound_csv_row(const SSTSpec& spec, const SstBoundReport& r) {
  return spec_hash(to_json(spec)) + "," + std::to_string(spec.depth()) + "," + std::to_string(r.m_index) + "," +
         format_double(r.best);
}

inline json to_json(const ScaleIsoCertificate& c, const WeightedTree* tree = nullptr) {
  auto edge = [&](std::size_t e) -> json {
    if (!tree) return e;
    const auto& ed = tree->edges()[e];
    return {{"index", e}, {"u", tree->vertices()[ed.u]}, {"v", tree->vertices()[ed.v]}};
  };
  return {{"scale", c.scale},
          {"eps", c.eps},
          {"ratio_max", c.ratio_max},
          {"ratio_max_edge", edge(c.max_edge)},
          {"ratio_min", c.ratio_min},
          {"ratio_min_edge", edge(c.min_edge)},
          {"valid", c.valid},
          {"pairwise_checked", c.pairwise_checked}};
}

inline json to_json(const CombRepresentation& r) {
  json map = json::array();
  for (const auto& [s, t] : r.vertex_map) map.push_back({{"source", s}, {"target", t}});
  return {{"window_start", r.window_start},
          {"n0", r.n0},
          {"vertex_map", std::move(map)},
          {"target", to_json(r.target)},
          {"certificate", to_json(r.certificate, &r.source)}};
}

inline json to_json(const EmbeddingResult& r) {
  json coords = json::array();
  for (Eigen::Index i = 0; i < r.coordinates.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < r.coordinates.cols(); ++c) row.push_back(r.coordinates(i, c));
    coords.push_back(std::move(row));
  }
  return {{"embeds", true},
          {"coordinates", std::move(coords)},
          {"gram_eigenvalues", r.gram_eigenvalues},
          {"affine_rank", r.affine_rank},
          {"max_distance_error", r.max_distance_error}};
}

inline json to_json(const EmbeddingFailure& f) {
  return {{"embeds", false},
          {"witness_eta", f.witness_eta},
          {"min_gram_eigenvalue", f.min_gram_eigenvalue},
          {"form_value", f.form_value}};
}

/// One labelled row per point: label,c0,c1,...
inline std::string coordinates_csv(const EmbeddingResult& r, const std::vector<std::string>& labels) {
  std::string out = "label";
  for (Eigen::Index c = 0; c < r.coordinates.cols(); ++c) out += ",c" + std::to_string(c);
  out += '\n';
  for (Eigen::Index i = 0; i < r.coordinates.rows(); ++i) {
    out += labels[std::size_t(i)];
    for (Eigen::Index c = 0; c < r.coordinates.cols(); ++c) out += "," + format_double(r.coordinates(i, c));
    out += '\n';
  }
  return out;
}

}  // namespace genround::io
