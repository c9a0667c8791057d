#pragma once

// Positive weight functions f : N -> (0, inf) used to put path metrics on combs and SSTs.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "genround/errors.hpp"

namespace genround {

enum class WeightKind {
  constant,        // c
  polynomial,      // c0 + c1 n + c2 n^2 + ...
  rational,        // polynomial / polynomial
  log_shifted,     // ln(n + s), s > 1
  exp_sqrt,        // exp(r sqrt(n))
  geometric,       // c r^n
  inverse_square,  // 1 / (n + s)^2
  arctan,          // atan(n + s)
  table,           // explicit samples f(0), f(1), ...
};

namespace detail {

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  const std::string t = trim(text);
  if (t.empty()) return out;
  std::size_t pos = 0;
  while (pos <= t.size()) {
    const auto comma = t.find(',', pos);
    const std::string item = trim(std::string_view(t).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw ValidationError("weight function: cannot parse number '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace detail

/// A weight function n -> f(n). Evaluation through operator() insists on a finite positive
/// value; raw() returns whatever the formula yields so that sampling code can treat overflow
/// as "no window".
class WeightFunction {
 public:
  static WeightFunction constant(double c) { return WeightFunction(WeightKind::constant, {c}); }
  static WeightFunction polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) throw ValidationError("polynomial needs at least one coefficient");
    return WeightFunction(WeightKind::polynomial, std::move(coeffs));
  }
  static WeightFunction rational(std::vector<double> num, std::vector<double> den) {
    if (num.empty() || den.empty()) throw ValidationError("rational needs numerator and denominator coefficients");
    for (double c : den)
      if (!std::isfinite(c)) throw ValidationError("weight function parameters must be finite");
    WeightFunction f(WeightKind::rational, std::move(num));
    f.den_ = std::move(den);
    return f;
  }
  static WeightFunction log_shifted(double shift) {
    if (!(shift > 1.0)) throw ValidationError("log-shifted needs shift > 1");
    return WeightFunction(WeightKind::log_shifted, {shift});
  }
  static WeightFunction exp_sqrt(double rate = 1.0) { return WeightFunction(WeightKind::exp_sqrt, {rate}); }
  static WeightFunction geometric(double ratio, double scale = 1.0) {
    if (!(ratio > 0.0) || !(scale > 0.0)) throw ValidationError("geometric needs positive ratio and scale");
    return WeightFunction(WeightKind::geometric, {ratio, scale});
  }
  static WeightFunction inverse_square(double shift = 1.0) {
    if (!(shift > 0.0)) throw ValidationError("inverse-square needs shift > 0");
    return WeightFunction(WeightKind::inverse_square, {shift});
  }
  static WeightFunction arctan(double shift = 1.0) {
    if (!(shift > 0.0)) throw ValidationError("arctan needs shift > 0");
    return WeightFunction(WeightKind::arctan, {shift});
  }
  static WeightFunction table(std::vector<double> samples) {
    if (samples.empty()) throw ValidationError("table needs at least one sample");
    for (double s : samples)
      if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("table samples must be positive");
    return WeightFunction(WeightKind::table, std::move(samples));
  }

  /// Parses "name(a,b,...)"; rational takes "rational(num...;den...)". Names use '-' or '_'.
  static WeightFunction parse(std::string_view text) {
    const std::string t = detail::trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
      throw ValidationError("weight function must look like name(args): '" + t + "'");
    std::string name = detail::trim(std::string_view(t).substr(0, open));
    for (auto& c : name)
      if (c == '_') c = '-';
    const std::string_view body = std::string_view(t).substr(open + 1, t.size() - open - 2);

    auto args = [&](std::size_t lo, std::size_t hi) {
      auto v = detail::parse_number_list(body);
      if (v.size() < lo || v.size() > hi) throw ValidationError("wrong number of arguments for " + name);
      return v;
    };
    if (name == "constant") return constant(args(1, 1)[0]);
    if (name == "polynomial") return polynomial(args(1, 64));
    if (name == "rational") {
      const auto semi = body.find(';');
      if (semi == std::string_view::npos) throw ValidationError("rational needs 'num...;den...'");
      return rational(detail::parse_number_list(body.substr(0, semi)), detail::parse_number_list(body.substr(semi + 1)));
    }
    if (name == "log-shifted") return log_shifted(args(1, 1)[0]);
    if (name == "exp-sqrt") {
      auto v = args(0, 1);
      return exp_sqrt(v.empty() ? 1.0 : v[0]);
    }
    if (name == "geometric") {
      auto v = args(1, 2);
      return geometric(v[0], v.size() > 1 ? v[1] : 1.0);
    }
    if (name == "inverse-square") {
      auto v = args(0, 1);
      return inverse_square(v.empty() ? 1.0 : v[0]);
    }
    if (name == "arctan") {
      auto v = args(0, 1);
      return arctan(v.empty() ? 1.0 : v[0]);
    }
    if (name == "table") return table(args(1, std::size_t(-1)));
    throw ValidationError("unknown weight function '" + name + "'");
  }

  WeightKind kind() const noexcept { return kind_; }

  /// One past the largest n at which the function is defined.
  std::uint64_t domain_end() const noexcept {
    return kind_ == WeightKind::table ? std::uint64_t(params_.size()) : UINT64_MAX;
  }

  double raw(std::uint64_t n) const {
    const double x = double(n);
    switch (kind_) {
      case WeightKind::constant: return params_[0];
      case WeightKind::polynomial: return detail::eval_poly(params_, x);
      case WeightKind::rational: return detail::eval_poly(params_, x) / detail::eval_poly(den_, x);
      case WeightKind::log_shifted: return std::log(x + params_[0]);
      case WeightKind::exp_sqrt: return std::exp(params_[0] * std::sqrt(x));
      case WeightKind::geometric: return params_[1] * std::pow(params_[0], x);
      case WeightKind::inverse_square: return 1.0 / ((x + params_[0]) * (x + params_[0]));
      case WeightKind::arctan: return std::atan(x + params_[0]);
      case WeightKind::table:
        if (n >= params_.size())
          throw ValidationError("table weight function has no sample for n = " + std::to_string(n));
        return params_[n];
    }
    return std::nan("");
  }

  double operator()(std::uint64_t n) const {
    const double v = raw(n);
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("weight function " + describe() + " is not finite and positive at n = " + std::to_string(n));
    return v;
  }

  /// Canonical text form, accepted by parse().
  std::string describe() const {
    switch (kind_) {
      case WeightKind::constant: return "constant(" + detail::join_numbers(params_) + ")";
      case WeightKind::polynomial: return "polynomial(" + detail::join_numbers(params_) + ")";
      case WeightKind::rational: return "rational(" + detail::join_numbers(params_) + ";" + detail::join_numbers(den_) + ")";
      case WeightKind::log_shifted: return "log-shifted(" + detail::join_numbers(params_) + ")";
      case WeightKind::exp_sqrt: return "exp-sqrt(" + detail::join_numbers(params_) + ")";
      case WeightKind::geometric: return "geometric(" + detail::join_numbers(params_) + ")";
      case WeightKind::inverse_square: return "inverse-square(" + detail::join_numbers(params_) + ")";
      case WeightKind::arctan: return "arctan(" + detail::join_numbers(params_) + ")";
      case WeightKind::table: return "table(" + detail::join_numbers(params_) + ")";
    }
    return "?";
  }

 private:
  WeightFunction(WeightKind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {
    for (double p : params_)
      if (!std::isfinite(p)) throw ValidationError("weight function parameters must be finite");
  }

  WeightKind kind_;
  std::vector<double> params_;
  std::vector<double> den_;
};

}  // namespace genround
