#pragma once

// Parameter sweeps producing CSV rows of roundness brackets (and SST bounds where defined).

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genround/errors.hpp"
#include "genround/metric.hpp"
#include "genround/negtype.hpp"
#include "genround/trees.hpp"
#include "genround/weights.hpp"

namespace genround {

struct ExperimentRow {
  std::string descriptor;
  double param = 0.0;
  /// Absent when the instance exceeded the vertex cap.
  std::optional<RoundnessEstimate> bracket;
  std::optional<double> bound;
  double runtime_ms = 0.0;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;
  /// First parameter whose instance exceeded the vertex cap.
  std::optional<double> capped_at;
};

/// Instances above this size are skipped by experiments unless the caller raises the cap.
inline constexpr std::uint64_t kExperimentVertexCap = 1500;

namespace detail {

inline ExperimentRow timed_row(std::string descriptor, double param, const FiniteMetricSpace& space,
                               const RoundnessOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentRow row;
  row.descriptor = std::move(descriptor);
  row.param = param;
  row.bracket = roundness(space, opts);
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

inline std::optional<double> bound_if_defined(const SSTSpec& spec) {
  try {
    return sst_upper_bound(spec).best;
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Brackets for C_m(1), m = m_min..m_max.
inline ExperimentTable comb_convergence(std::uint64_t m_min, std::uint64_t m_max, const RoundnessOptions& opts,
                                        std::uint64_t vertex_cap = kExperimentVertexCap) {
  if (m_min < 1 || m_max < m_min) throw ValidationError("need 1 <= m_min <= m_max");
  ExperimentTable table;
  for (std::uint64_t m = m_min; m <= m_max; ++m) {
    if (2 * (m + 1) > vertex_cap) {
      table.capped_at = double(m);
      break;
    }
    const auto tree = build_comb({m, WeightFunction::constant(1.0)});
    table.rows.push_back(detail::timed_row("C_" + std::to_string(m) + "(1)", double(m), tree_to_metric(tree), opts));
  }
  return table;
}

inline std::string describe_sst(const SSTSpec& spec) {
  std::string out = "sst[";
  for (std::size_t i = 0; i < spec.depth(); ++i) {
    if (i) out += ' ';
    out += std::to_string(spec.degrees[i]) + ":" + detail::format_double(spec.lengths[i]);
  }
  return out + "]";
}

/// Truncations of `spec` to depth n = n_min..n_max (n_max <= depth): bracket plus the star bound.
/// From the first depth whose SST exceeds the cap on, rows carry the bound only.
inline ExperimentTable sst_truncation_sweep(const SSTSpec& spec, std::size_t n_min, std::size_t n_max,
                                            const RoundnessOptions& opts,
                                            std::uint64_t vertex_cap = kExperimentVertexCap) {
  spec.validate();
  if (n_min < 1 || n_max < n_min || n_max > spec.depth()) throw ValidationError("depth range outside the spec");
  ExperimentTable table;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    SSTSpec cut{{spec.degrees.begin(), spec.degrees.begin() + std::ptrdiff_t(n)},
                {spec.lengths.begin(), spec.lengths.begin() + std::ptrdiff_t(n)}};
    const auto bound = detail::bound_if_defined(cut);
    if (table.capped_at || cut.vertex_count() > vertex_cap) {
      ExperimentRow row;
      row.descriptor = describe_sst(cut);
      row.param = double(n);
      row.bound = bound;
      table.rows.push_back(std::move(row));
      if (!table.capped_at) table.capped_at = double(n);
      continue;
    }
    auto row = detail::timed_row(describe_sst(cut), double(n), tree_to_metric(build_sst(cut, vertex_cap)), opts);
    row.bound = bound;
    table.rows.push_back(std::move(row));
  }
  return table;
}

/// Constant degree/length SSTs of depth n = n_min..n_max.
inline ExperimentTable sst_sweep(std::uint64_t degree, double length, std::size_t n_min, std::size_t n_max,
                                 const RoundnessOptions& opts, std::uint64_t vertex_cap = kExperimentVertexCap) {
  if (n_max < 1) throw ValidationError("n_max must be at least 1");
  SSTSpec spec{std::vector<std::uint64_t>(n_max, degree), std::vector<double>(n_max, length)};
  return sst_truncation_sweep(spec, n_min, n_max, opts, vertex_cap);
}

inline const char* experiment_csv_header() { return "descriptor,param,lower,upper,bound,runtime_ms"; }

/// Fixed column order: descriptor,param,lower,upper,bound,runtime_ms. Infinite brackets print
/// "inf" as the upper end; missing values are empty. A capped sweep ends with a
/// "#cap-exceeded" marker row.
inline std::string experiment_csv(const ExperimentTable& table) {
  using detail::format_double;
  std::string out = std::string(experiment_csv_header()) + "\n";
  for (const auto& row : table.rows) {
    out += row.descriptor + "," + format_double(row.param) + ",";
    if (row.bracket) {
      out += format_double(row.bracket->lower) + ",";
      out += row.bracket->infinite ? std::string("inf") : format_double(row.bracket->upper);
    } else {
      out += ",";
    }
    out += ",";
    if (row.bound) out += format_double(*row.bound);
    out += "," + (row.bracket ? format_double(row.runtime_ms) : std::string()) + "\n";
  }
  if (table.capped_at) out += "#cap-exceeded," + format_double(*table.capped_at) + ",,,,\n";
  return out;
}

}  // namespace genround
