// genround: command-line front end for the generalized roundness library.
// Exit codes: 0 success, 1 bad input, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "genround/genround.hpp"

using namespace genround;
using io::json;

namespace {

struct Globals {
  double tol = 1e-6;
  double p_cap = 64.0;
  std::optional<std::uint64_t> vertex_cap;
  std::string output;
  std::string format;  // empty: json, except csv for experiments

  RoundnessOptions roundness() const { return {tol, p_cap}; }
  bool csv() const { return format == "csv"; }
};

// Inline JSON, "-" for stdin, or a file path.
json load_json(const std::string& arg) {
  std::string text;
  if (arg == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw ValidationError("cannot read '" + arg + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(g.output);
  if (!out) throw ValidationError("cannot write '" + g.output + "'");
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

void emit(const Globals& g, const json& j) { emit(g, j.dump(2)); }

FiniteMetricSpace load_space(const Globals& g, const std::string& arg) {
  const json j = load_json(arg);
  auto space = io::parse_space_or_tree(j);
  const auto cap = g.vertex_cap.value_or(kDefaultVertexCap);
  if (space.size() > cap)
    throw ValidationError("input has " + std::to_string(space.size()) + " points, above the vertex cap");
  return space;
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

void add_gen(CLI::App& app, Globals& g) {
  auto* gen = app.add_subcommand("gen", "Generate a comb, SST or l_p point set as JSON");
  gen->require_subcommand(1);
  auto add_kind = [&](const char* name, const char* help, auto body) {
    auto* sub = gen->add_subcommand(name, help);
    auto spec = std::make_shared<std::string>();
    sub->add_option("spec", *spec, "spec as inline JSON, a file, or - for stdin")->required();
    sub->callback([&g, spec, body] { emit(g, body(load_json(*spec))); });
  };
  add_kind("comb", "comb C_m(f) from {\"m\":2,\"f\":\"constant(1)\"}",
           [](const json& j) { return io::to_json(build_comb(io::parse_comb_spec(j))); });
  add_kind("sst", "SST from {\"degrees\":[...],\"lengths\":[...]}", [&g](const json& j) {
    return io::to_json(build_sst(io::parse_sst_spec(j), g.vertex_cap.value_or(kDefaultVertexCap)));
  });
  add_kind("lp", "point set from {\"points\":[[...]],\"p\":2}", [](const json& j) {
    const auto spec = io::parse_lp_spec(j);
    return io::to_json(lp_point_set(spec.points, spec.p_norm));
  });
}

void add_roundness(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("roundness", "Bracket the generalized roundness of a space or tree");
  auto input = std::make_shared<std::string>();
  sub->add_option("input", *input, "space or tree JSON (file, inline, or -)")->required();
  sub->callback([&g, input] {
    const auto r = roundness(load_space(g, *input), g.roundness());
    if (g.csv())
      emit(g, "lower,upper,infinite,iterations\n" + io::format_double(r.lower) + "," +
                  (r.infinite ? std::string("inf") : io::format_double(r.upper)) + "," + csv_bool(r.infinite) + "," +
                  std::to_string(r.iterations));
    else
      emit(g, io::to_json(r));
  });
}

void add_negtype(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("negtype", "Test p-negative type");
  auto input = std::make_shared<std::string>();
  auto p = std::make_shared<double>(1.0);
  sub->add_option("input", *input, "space or tree JSON")->required();
  sub->add_option("-p,--p", *p, "exponent")->required();
  sub->callback([&g, input, p] {
    const auto r = negative_type_test(load_space(g, *input), *p);
    if (g.csv())
      emit(g, "exponent,holds,strict,max_form_value\n" + io::format_double(r.exponent) + "," + csv_bool(r.holds) +
                  "," + csv_bool(r.strict) + "," + io::format_double(r.max_form_value));
    else
      emit(g, io::to_json(r));
  });
}

void add_simplex(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("simplex", "Evaluate a simplex gap, or search small simplices for a violation");
  auto input = std::make_shared<std::string>();
  auto p = std::make_shared<double>(1.0);
  auto simplex = std::make_shared<std::string>();
  auto k_max = std::make_shared<std::size_t>(3);
  auto mult_max = std::make_shared<std::size_t>(2);
  sub->add_option("input", *input, "space or tree JSON")->required();
  sub->add_option("-p,--p", *p, "exponent")->required();
  sub->add_option("--simplex", *simplex, "{\"a\":[...],\"b\":[...]}; omit to search");
  sub->add_option("--k-max", *k_max, "largest simplex order searched")->capture_default_str();
  sub->add_option("--mult-max", *mult_max, "largest multiplicity searched")->capture_default_str();
  sub->callback([&g, input, p, simplex, k_max, mult_max] {
    const auto space = load_space(g, *input);
    if (!simplex->empty()) {
      const auto s = io::parse_simplex(load_json(*simplex));
      const double gap = simplex_gap(space, s, *p);
      emit(g, json{{"simplex", io::to_json(s)}, {"p", *p}, {"gap", gap}, {"violates", gap < 0.0}});
      return;
    }
    const auto found = brute_force_simplex_search(space, *p, *k_max, *mult_max);
    json out = {{"p", *p}, {"found", found.has_value()}};
    out["simplex"] = found ? io::to_json(*found) : json(nullptr);
    if (found) out["gap"] = simplex_gap(space, *found, *p);
    emit(g, out);
  });
}

void add_bound(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("bound", "Star-configuration upper bound for an SST");
  auto spec = std::make_shared<std::string>();
  sub->add_option("spec", *spec, "{\"degrees\":[...],\"lengths\":[...]}")->required();
  sub->callback([&g, spec] {
    const auto s = io::parse_sst_spec(load_json(*spec));
    const auto r = sst_upper_bound(s);
    if (g.csv())
      emit(g, std::string(io::sst_bound_csv_header()) + "\n" + io::sst_bound_csv_row(s, r));
    else
      emit(g, io::to_json(r));
  });
}

void add_scaleiso(CLI::App& app, Globals& g) {
  auto* top = app.add_subcommand("scaleiso", "Scale-isomorphism certificates");
  top->require_subcommand(1);

  // {"tree": {...}, "rho": [...]}: d weights come from the tree, rho lists one weight per edge.
  auto load_pair = [](const std::string& arg) {
    const json j = load_json(arg);
    if (!j.contains("tree")) throw ValidationError("missing field 'tree'");
    auto tree = io::parse_tree(j.at("tree"));
    auto rho = io::detail::get_field<std::vector<double>>(j, "rho");
    return std::pair{std::move(tree), std::move(rho)};
  };

  auto* certify = top->add_subcommand("certify", "Certify the identity map of a re-weighted tree");
  auto c_input = std::make_shared<std::string>();
  auto c_eps = std::make_shared<double>(0.1);
  certify->add_option("input", *c_input, "{\"tree\":{...},\"rho\":[...]}")->required();
  certify->add_option("--eps", *c_eps, "distortion")->required();
  certify->callback([&g, c_input, c_eps, load_pair] {
    const auto [tree, rho] = load_pair(*c_input);
    const auto d = tree.weights();
    emit(g, io::to_json(certify_scale_iso(tree, d, rho, *c_eps), &tree));
  });

  auto* distortion = top->add_subcommand("distortion", "Smallest eps that certifies");
  auto d_input = std::make_shared<std::string>();
  distortion->add_option("input", *d_input, "{\"tree\":{...},\"rho\":[...]}")->required();
  distortion->callback([&g, d_input, load_pair] {
    const auto [tree, rho] = load_pair(*d_input);
    const auto d = tree.weights();
    emit(g, json{{"min_distortion", min_distortion(tree, d, rho)}});
  });

  auto* comb = top->add_subcommand("comb", "Represent C_m(1) inside C(f)");
  auto f = std::make_shared<std::string>();
  auto m = std::make_shared<std::uint64_t>(1);
  auto eps = std::make_shared<double>(0.1);
  auto n_max = std::make_shared<std::uint64_t>(1000000);
  comb->add_option("-f,--f", *f, "weight function, e.g. polynomial(1,1)")->required();
  comb->add_option("-m,--m", *m, "comb size")->capture_default_str();
  comb->add_option("--eps", *eps, "distortion")->capture_default_str();
  comb->add_option("--n-max", *n_max, "search limit")->capture_default_str();
  comb->callback([&g, f, m, eps, n_max] {
    const auto rep = comb_local_representation(WeightFunction::parse(*f), *m, *eps, *n_max);
    emit(g, rep ? io::to_json(*rep) : json{{"found", false}});
  });
}

void add_embed(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("embed", "Euclidean realization of sqrt(d^p), or a failure witness");
  auto input = std::make_shared<std::string>();
  auto p = std::make_shared<double>(1.0);
  sub->add_option("input", *input, "space or tree JSON")->required();
  sub->add_option("-p,--p", *p, "exponent")->capture_default_str();
  sub->callback([&g, input, p] {
    const auto space = load_space(g, *input);
    const auto out = schoenberg_embed(space, *p);
    if (const auto* r = std::get_if<EmbeddingResult>(&out); r && g.csv())
      emit(g, io::coordinates_csv(*r, space.labels()));
    else if (r)
      emit(g, io::to_json(*r));
    else
      emit(g, io::to_json(std::get<EmbeddingFailure>(out)));
  });
}

void add_experiment(CLI::App& app, Globals& g) {
  auto* top = app.add_subcommand("experiment", "Parameter sweeps as CSV");
  top->require_subcommand(1);

  auto emit_table = [&g](const ExperimentTable& t) {
    if (g.format == "json") {
      json rows = json::array();
      for (const auto& r : t.rows) {
        json row = {{"descriptor", r.descriptor}, {"param", r.param}, {"runtime_ms", r.runtime_ms}};
        row["bracket"] = r.bracket ? io::to_json(*r.bracket) : json(nullptr);
        row["bound"] = r.bound ? json(*r.bound) : json(nullptr);
        rows.push_back(std::move(row));
      }
      emit(g, json{{"rows", rows}, {"capped_at", t.capped_at ? json(*t.capped_at) : json(nullptr)}});
    } else {
      emit(g, experiment_csv(t));
    }
  };
  auto cap = [&g] { return g.vertex_cap.value_or(kExperimentVertexCap); };

  auto* comb = top->add_subcommand("comb-convergence", "Brackets for C_m(1)");
  auto m_min = std::make_shared<std::uint64_t>(1);
  auto m_max = std::make_shared<std::uint64_t>(6);
  comb->add_option("--m-min", *m_min)->capture_default_str();
  comb->add_option("--m-max", *m_max)->capture_default_str();
  comb->callback([&g, m_min, m_max, emit_table, cap] { emit_table(comb_convergence(*m_min, *m_max, g.roundness(), cap())); });

  auto* sweep = top->add_subcommand("sst-sweep", "Constant-degree SSTs of increasing depth");
  auto degree = std::make_shared<std::uint64_t>(3);
  auto length = std::make_shared<double>(1.0);
  auto n_min = std::make_shared<std::size_t>(2);
  auto n_max = std::make_shared<std::size_t>(8);
  sweep->add_option("--degree", *degree)->capture_default_str();
  sweep->add_option("--length", *length)->capture_default_str();
  sweep->add_option("--n-min", *n_min)->capture_default_str();
  sweep->add_option("--n-max", *n_max)->capture_default_str();
  sweep->callback([&g, degree, length, n_min, n_max, emit_table, cap] {
    emit_table(sst_sweep(*degree, *length, *n_min, *n_max, g.roundness(), cap()));
  });

  auto* tight = top->add_subcommand("bound-tightness", "Bracket against bound for truncations of one SST spec");
  auto spec = std::make_shared<std::string>(R"({"degrees":[3,3,3,3,3,3,3,3,3,3],"lengths":[1,1,1,1,1,1,1,1,1,1]})");
  auto t_min = std::make_shared<std::size_t>(1);
  auto t_max = std::make_shared<std::size_t>(0);
  tight->add_option("--spec", *spec, "SST spec; defaults to degree 3, length 1, depth 10");
  tight->add_option("--n-min", *t_min)->capture_default_str();
  tight->add_option("--n-max", *t_max, "defaults to the spec depth");
  tight->callback([&g, spec, t_min, t_max, emit_table, cap] {
    const auto s = io::parse_sst_spec(load_json(*spec));
    emit_table(sst_truncation_sweep(s, *t_min, *t_max ? *t_max : s.depth(), g.roundness(), cap()));
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized roundness of finite metric spaces and trees"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "bisection width")->capture_default_str();
  app.add_option("--p-cap", g.p_cap, "largest exponent tried")->capture_default_str();
  app.add_option("--vertex-cap", g.vertex_cap, "largest instance (default 100000, experiments 1500)");
  app.add_option("-o,--output", g.output, "write to a file instead of stdout");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  add_gen(app, g);
  add_roundness(app, g);
  add_negtype(app, g);
  add_simplex(app, g);
  add_bound(app, g);
  add_scaleiso(app, g);
  add_embed(app, g);
  add_experiment(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
