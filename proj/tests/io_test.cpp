#include <gtest/gtest.h>

#include "genround/experiment.hpp"
#include "genround/io.hpp"

namespace genround {
namespace {

using io::json;

TEST(Io, SpaceRoundTrip) {
  const auto j = json::parse(R"({"labels":["a","b","c"],"dist":[[0,1,2],[1,0,1],[2,1,0]]})");
  const auto s = io::parse_space(j);
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(io::to_json(s), j);
  EXPECT_THROW(io::parse_space(json::parse(R"({"dist":[[0,1],[2,0]]})")), MetricError);
  EXPECT_THROW(io::parse_space(json::parse(R"({"dist":"nope"})")), ValidationError);
  EXPECT_THROW(io::parse_space(json::parse(R"({})")), ValidationError);
}

TEST(Io, TreeRoundTripAndConversion) {
  const auto tree = build_comb({2, WeightFunction::constant(1.0)});
  const auto j = io::to_json(tree);
  EXPECT_TRUE(io::looks_like_tree(j));
  const auto back = io::parse_tree(j);
  EXPECT_EQ(back.vertices(), tree.vertices());
  EXPECT_EQ(back.weights(), tree.weights());
  EXPECT_EQ(io::parse_space_or_tree(j).dist(), tree_to_metric(tree).dist());
  EXPECT_THROW(io::parse_tree(json::parse(R"({"vertices":["a","b"],"edges":[{"u":"a"}]})")), ValidationError);
}

TEST(Io, GeneratorSpecs) {
  const auto comb = io::parse_comb_spec(json::parse(R"j({"m":2,"f":"polynomial(1,1)"})j"));
  EXPECT_EQ(comb.m, 2u);
  EXPECT_DOUBLE_EQ(comb.weights(3), 4.0);
  EXPECT_THROW(io::parse_comb_spec(json::parse(R"({"m":0})")), ValidationError);
  EXPECT_THROW(io::parse_comb_spec(json::parse(R"j({"m":1,"f":"bogus(1)"})j")), ValidationError);

  const auto sst = io::parse_sst_spec(json::parse(R"({"degrees":[3,3],"lengths":[1,1]})"));
  EXPECT_EQ(build_sst(sst).size(), 13u);
  EXPECT_THROW(io::parse_sst_spec(json::parse(R"({"degrees":[0],"lengths":[1]})")), ValidationError);
  EXPECT_THROW(io::parse_sst_spec(json::parse(R"({"degrees":[2,2],"lengths":[1]})")), ValidationError);

  const auto lp = io::parse_lp_spec(json::parse(R"({"points":[[0,0],[1,0],[0,1]],"p":"inf"})"));
  EXPECT_TRUE(std::isinf(lp.p_norm));
  EXPECT_DOUBLE_EQ(io::parse_lp_spec(json::parse(R"({"points":[[0]],"p":1})")).p_norm, 1.0);
}

TEST(Io, RoundnessJson) {
  RoundnessEstimate inf;
  inf.infinite = true;
  const auto j = io::to_json(inf);
  EXPECT_TRUE(j["infinite"].get<bool>());
  EXPECT_TRUE(j["upper"].is_null());
  EXPECT_TRUE(j["failure_certificate"].is_null());
}

TEST(Io, SpecHashIsStableAndSensitive) {
  const auto a = json::parse(R"({"degrees":[3,3],"lengths":[1,1]})");
  const auto b = json::parse(R"({"lengths":[1,1],"degrees":[3,3]})");
  const auto c = json::parse(R"({"degrees":[3,2],"lengths":[1,1]})");
  EXPECT_EQ(io::spec_hash(a).size(), 16u);
  EXPECT_EQ(io::spec_hash(a), io::spec_hash(b));
  EXPECT_NE(io::spec_hash(a), io::spec_hash(c));
}

TEST(Io, SstBoundCsv) {
  const SSTSpec spec{std::vector<std::uint64_t>(10, 3), std::vector<double>(10, 1.0)};
  const auto row = io::sst_bound_csv_row(spec, sst_upper_bound(spec));
  EXPECT_EQ(std::string(io::sst_bound_csv_header()), "spec_hash,n,m_index,best");
  EXPECT_NE(row.find(",10,4,1.3796"), std::string::npos) << row;
}

TEST(Io, CoordinatesCsv) {
  EmbeddingResult r;
  r.coordinates = Eigen::MatrixXd::Zero(2, 1);
  r.coordinates(1, 0) = 1.5;
  EXPECT_EQ(io::coordinates_csv(r, {"a", "b"}), "label,c0\na,0\nb,1.5\n");
}

TEST(Experiment, CombConvergenceCsv) {
  const auto table = comb_convergence(1, 3, {1e-4, 64.0});
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_FALSE(table.capped_at.has_value());
  const auto csv = experiment_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "descriptor,param,lower,upper,bound,runtime_ms");
  EXPECT_NE(csv.find("C_2(1),2,"), std::string::npos);
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    EXPECT_LE(table.rows[i].bracket->lower, table.rows[i - 1].bracket->lower + 1e-4);
}

TEST(Experiment, SweepKeepsBoundsPastTheCap) {
  const auto table = sst_sweep(3, 1.0, 2, 6, {1e-4, 64.0}, 150);
  ASSERT_TRUE(table.capped_at.has_value());
  EXPECT_DOUBLE_EQ(*table.capped_at, 5.0);
  ASSERT_EQ(table.rows.size(), 5u);
  EXPECT_FALSE(table.rows[0].bound.has_value());
  EXPECT_TRUE(table.rows[1].bound.has_value());
  EXPECT_FALSE(table.rows.back().bracket.has_value());
  EXPECT_TRUE(table.rows.back().bound.has_value());
  const auto csv = experiment_csv(table);
  EXPECT_NE(csv.find("#cap-exceeded,5,,,,"), std::string::npos) << csv;
  for (const auto& row : table.rows)
    if (row.bracket && row.bound) { EXPECT_LE(row.bracket->lower, *row.bound + 1e-4); }
}

}  // namespace
}  // namespace genround
