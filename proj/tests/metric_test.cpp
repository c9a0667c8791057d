#include <gtest/gtest.h>

#include "genround/metric.hpp"
#include "genround/trees.hpp"
#include "support/generators.hpp"

namespace genround {
namespace {

using Rows = std::vector<std::vector<double>>;

FiniteMetricSpace line3() { return validate_metric(Rows{{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}); }

TEST(ValidateMetric, AcceptsTwoPointSpace) {
  const auto s = validate_metric(Rows{{0, 1}, {1, 0}});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"0", "1"}));
  EXPECT_DOUBLE_EQ(s(0, 1), 1.0);
}

TEST(ValidateMetric, ReportsTriangleWitness) {
  try {
    validate_metric(Rows{{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    FAIL() << "expected a triangle violation";
  } catch (const MetricError& e) {
    EXPECT_EQ(e.kind(), MetricViolation::triangle_inequality);
    EXPECT_EQ(e.witness(), (std::array<std::size_t, 3>{0, 2, 1}));
  }
}

TEST(ValidateMetric, ReportsAsymmetry) {
  try {
    validate_metric(Rows{{0, 1}, {2, 0}});
    FAIL() << "expected asymmetry";
  } catch (const MetricError& e) {
    EXPECT_EQ(e.kind(), MetricViolation::asymmetric);
    EXPECT_EQ(e.witness()[0], 0u);
    EXPECT_EQ(e.witness()[1], 1u);
  }
}

TEST(ValidateMetric, RejectsOtherViolations) {
  auto kind_of = [](const Rows& rows) {
    try {
      validate_metric(rows);
    } catch (const MetricError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "accepted an invalid matrix";
    return MetricViolation::not_square;
  };
  EXPECT_EQ(kind_of({{0, 1}, {1}}), MetricViolation::not_square);
  EXPECT_EQ(kind_of({{1, 1}, {1, 0}}), MetricViolation::nonzero_diagonal);
  EXPECT_EQ(kind_of({{0, 0}, {0, 0}}), MetricViolation::nonpositive_distance);
  EXPECT_EQ(kind_of({{0, -1}, {-1, 0}}), MetricViolation::not_finite);
  EXPECT_EQ(kind_of({{0, NAN}, {NAN, 0}}), MetricViolation::not_finite);
  EXPECT_THROW(validate_metric(Rows{{0, 1}, {1, 0}}, {"only-one"}), ValidationError);
}

TEST(ValidateMetric, AbsorbsRoundingInPathSums) {
  const double a = 0.1, b = 0.2;
  EXPECT_NO_THROW(validate_metric(Rows{{0, a, a + b}, {a, 0, b}, {a + b, b, 0}}));
  EXPECT_NO_THROW(validate_metric(Rows{{0, 0.1, 0.3 + 1e-13}, {0.1, 0, 0.2}, {0.3 + 1e-13, 0.2, 0}}));
}

TEST(WeightedTree, RejectsMalformedTrees) {
  using E = std::vector<TreeEdge>;
  EXPECT_THROW(WeightedTree({}, E{}), ValidationError);
  EXPECT_THROW(WeightedTree({"a", "b"}, E{}), ValidationError);
  EXPECT_THROW(WeightedTree({"a", "b", "c"}, E{{0, 1, 1.0}, {0, 1, 1.0}}), ValidationError);  // disconnected
  EXPECT_THROW(WeightedTree({"a", "b"}, E{{0, 1, 0.0}}), ValidationError);
  EXPECT_THROW(WeightedTree({"a", "b"}, E{{0, 0, 1.0}}), ValidationError);
  EXPECT_THROW(WeightedTree({"a", "a"}, E{{0, 1, 1.0}}), ValidationError);
  EXPECT_THROW(WeightedTree::from_labels({"a", "b"}, {{"a", "z", 1.0}}), ValidationError);
  EXPECT_NO_THROW(WeightedTree({"solo"}, E{}));
}

TEST(TreeToMetric, UnitPath) {
  const auto t = WeightedTree::from_labels({"y1", "x1", "x2", "y2"},
                                           {{"y1", "x1", 1.0}, {"x1", "x2", 1.0}, {"x2", "y2", 1.0}});
  const auto d = tree_to_metric(t);
  EXPECT_DOUBLE_EQ(d(0, 3), 3.0);
}

TEST(TreeToMetric, StarThroughCentre) {
  const auto t = WeightedTree::from_labels({"c", "u", "v"}, {{"c", "u", 2.0}, {"c", "v", 3.0}});
  EXPECT_DOUBLE_EQ(tree_to_metric(t)(1, 2), 5.0);
}

TEST(TreeToMetric, CombTwoSpotValue) {
  const auto t = build_comb({2, WeightFunction::constant(1.0)});
  const auto d = tree_to_metric(t);
  ASSERT_EQ(d.size(), 6u);
  // y1 - x1 - x2 - x3 - y3
  EXPECT_DOUBLE_EQ(d(t.index_of("y1"), t.index_of("y3")), 4.0);
}

TEST(TreeToMetric, MatchesFloydWarshallAndValidates) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto tree = testing::random_tree(rng, testing::uniform_int(rng, 1, 15));
    const auto d = tree_to_metric(tree);
    EXPECT_LT((d.dist() - testing::floyd_warshall(tree)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NO_THROW(validate_metric(d.dist(), d.labels()));
  }
}

TEST(TreeToMetric, FourPointCondition) {
  testing::Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = tree_to_metric(testing::random_tree(rng, testing::uniform_int(rng, 4, 12)));
    for (int q = 0; q < 20; ++q) {
      std::size_t a = testing::uniform_int(rng, 0, d.size() - 1), b = testing::uniform_int(rng, 0, d.size() - 1),
                  c = testing::uniform_int(rng, 0, d.size() - 1), e = testing::uniform_int(rng, 0, d.size() - 1);
      std::array<double, 3> sums{d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c)};
      std::sort(sums.begin(), sums.end());
      EXPECT_NEAR(sums[1], sums[2], 1e-9 * std::max(1.0, sums[2]));
    }
  }
}

TEST(PowerTransform, Examples) {
  const auto four = validate_metric(Rows{{0, 4}, {4, 0}});
  EXPECT_DOUBLE_EQ(power_transform(four, {1.0, true})(0, 1), 2.0);

  const auto line = line3();
  const auto same = power_transform(line, {2.0, true});
  EXPECT_LT((same.dist() - line.dist()).cwiseAbs().maxCoeff(), 1e-15);

  EXPECT_THROW(power_transform(line, {3.0, false}, true), MetricError);
  const auto cube = power_transform(line, {3.0, false}, false);
  EXPECT_FALSE(cube.is_metric());
  EXPECT_DOUBLE_EQ(cube(0, 2), 8.0);
  EXPECT_THROW(power_transform(line, {-1.0, false}), ValidationError);
}

TEST(PowerTransform, ZeroExponentIsEquilateral) {
  const auto z = power_transform(line3(), {0.0, false});
  EXPECT_DOUBLE_EQ(z(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(z(0, 2), 1.0);
  EXPECT_TRUE(is_ultrametric(z));
}

TEST(IsUltrametric, Examples) {
  EXPECT_TRUE(is_ultrametric(validate_metric(Rows{{0, 3}, {3, 0}})));
  EXPECT_TRUE(is_ultrametric(validate_metric(Rows{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}})));
  EXPECT_FALSE(is_ultrametric(line3()));
}

TEST(IsUltrametric, SurvivesPowerTransforms) {
  testing::Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = testing::random_ultrametric(rng, testing::uniform_int(rng, 2, 9));
    ASSERT_TRUE(is_ultrametric(u));
    for (double p : {0.3, 1.0, 2.5, 7.0}) EXPECT_TRUE(is_ultrametric(power_transform(u, {p, false}, false)));
  }
}

TEST(Restrict, Examples) {
  const auto line = line3();
  const std::vector<std::size_t> all{0, 1, 2};
  EXPECT_EQ(restrict(line, all).dist(), line.dist());
  EXPECT_EQ(restrict(line, {1}).size(), 1u);

  const auto comb = build_comb({1, WeightFunction::constant(1.0)});
  const auto d = tree_to_metric(comb);
  const auto sub = restrict(d, {comb.index_of("y1"), comb.index_of("x1"), comb.index_of("x2")});
  EXPECT_DOUBLE_EQ(sub(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(sub(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(sub(0, 2), 2.0);
  EXPECT_EQ(sub.labels(), (std::vector<std::string>{"y1", "x1", "x2"}));

  EXPECT_THROW(restrict(line, std::vector<std::size_t>{}), ValidationError);
  EXPECT_THROW(restrict(line, {0, 0}), ValidationError);
  EXPECT_THROW(restrict(line, {3}), ValidationError);
}

TEST(Restrict, CommutesWithPowerTransform) {
  testing::Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = testing::random_metric(rng, 7);
    const std::vector<std::size_t> idx{5, 1, 3};
    const TransformSpec spec{testing::uniform(rng, 0.1, 3.0), trial % 2 == 0};
    const auto a = restrict(power_transform(s, spec, false), idx);
    const auto b = power_transform(restrict(s, idx), spec, false);
    EXPECT_EQ(a.dist(), b.dist());
  }
}

}  // namespace
}  // namespace genround
