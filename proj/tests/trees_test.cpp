#include <gtest/gtest.h>

#include <cmath>

#include "genround/negtype.hpp"
#include "genround/trees.hpp"
#include "support/generators.hpp"

namespace genround {
namespace {

double edge_weight(const WeightedTree& t, const std::string& u, const std::string& v) {
  const auto a = t.index_of(u), b = t.index_of(v);
  for (const auto& e : t.edges())
    if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) return e.weight;
  ADD_FAILURE() << "no edge " << u << "-" << v;
  return 0.0;
}

TEST(BuildComb, UnitPath) {
  const auto t = build_comb({1, WeightFunction::constant(1.0)});
  ASSERT_EQ(t.size(), 4u);
  const auto d = tree_to_metric(t);
  EXPECT_DOUBLE_EQ(d(t.index_of("y1"), t.index_of("y2")), 3.0);
  EXPECT_DOUBLE_EQ(d(t.index_of("x1"), t.index_of("x2")), 1.0);
}

TEST(BuildComb, TwoComb) {
  const auto t = build_comb({2, WeightFunction::constant(1.0)});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.edges().size(), 5u);
  for (const auto& e : t.edges()) EXPECT_DOUBLE_EQ(e.weight, 1.0);
  EXPECT_DOUBLE_EQ(tree_to_metric(t)(t.index_of("y1"), t.index_of("y3")), 4.0);
}

TEST(BuildComb, WeightsFollowTheSpineIndex) {
  const auto t = build_comb({1, WeightFunction::polynomial({1, 1})});
  EXPECT_DOUBLE_EQ(edge_weight(t, "x1", "y1"), 2.0);
  EXPECT_DOUBLE_EQ(edge_weight(t, "x1", "x2"), 2.0);
  EXPECT_DOUBLE_EQ(edge_weight(t, "x2", "y2"), 3.0);
}

TEST(BuildComb, OffsetStartsAtTheGivenSpineVertex) {
  const auto t = build_comb({2, WeightFunction::polynomial({1, 1})}, 9);
  EXPECT_EQ(t.vertices().front(), "x9");
  EXPECT_DOUBLE_EQ(edge_weight(t, "x9", "x10"), 10.0);
  EXPECT_DOUBLE_EQ(edge_weight(t, "x11", "y11"), 12.0);
  EXPECT_THROW(build_comb({0, WeightFunction::constant(1.0)}), ValidationError);
}

TEST(BuildComb, SmallerCombsSitIsometricallyInside) {
  for (std::uint64_t m = 1; m < 5; ++m) {
    const auto small = build_comb({m, WeightFunction::constant(1.0)});
    const auto big = build_comb({m + 1, WeightFunction::constant(1.0)});
    const auto ds = tree_to_metric(small), db = tree_to_metric(big);
    std::vector<std::size_t> idx;
    for (const auto& label : small.vertices()) idx.push_back(big.index_of(label));
    EXPECT_EQ(restrict(db, idx).dist(), ds.dist());
  }
}

TEST(BuildSst, Examples) {
  EXPECT_EQ(build_sst({{3}, {1.0}}).size(), 4u);
  EXPECT_EQ(build_sst({{2, 1}, {1.0, 1.0}}).size(), 5u);
  const auto t = build_sst({{2, 2}, {1.0, 0.5}});
  const auto d = tree_to_metric(t);
  for (std::size_t leaf = 3; leaf < 7; ++leaf) EXPECT_DOUBLE_EQ(d(0, leaf), 1.5);
  EXPECT_EQ(build_sst({{3, 3}, {1.0, 1.0}}).size(), 13u);
}

TEST(BuildSst, LayoutAndCaps) {
  const auto t = build_sst({{2, 3}, {1.0, 1.0}});
  EXPECT_EQ(t.vertices()[0], "v");
  EXPECT_EQ(t.vertices()[1], "v.0");
  EXPECT_EQ(t.vertices()[3], "v.0.0");
  EXPECT_EQ(t.vertices()[8], "v.1.2");
  EXPECT_THROW(build_sst({{3, 3, 3}, {1, 1, 1}}, 30), ValidationError);
  EXPECT_THROW(build_sst({{3, 0}, {1, 1}}), ValidationError);
  EXPECT_THROW(build_sst({{3}, {1, 1}}), ValidationError);
  EXPECT_THROW(build_sst({{3}, {-1}}), ValidationError);
  EXPECT_EQ((SSTSpec{std::vector<std::uint64_t>(80, 2), std::vector<double>(80, 1.0)}.vertex_count()), UINT64_MAX);
}

TEST(SstUpperBound, BinaryTreesGiveTwoAtTheRoot) {
  for (std::size_t n : {3u, 4u, 6u}) {
    const auto r = sst_upper_bound({std::vector<std::uint64_t>(n, 2), std::vector<double>(n, 1.0)});
    ASSERT_FALSE(r.per_k.empty());
    EXPECT_EQ(r.per_k.front().k, 0u);
    EXPECT_DOUBLE_EQ(r.per_k.front().bound, 2.0);
  }
}

TEST(SstUpperBound, TernaryDepthTen) {
  const auto r = sst_upper_bound({std::vector<std::uint64_t>(10, 3), std::vector<double>(10, 1.0)});
  EXPECT_EQ(r.m_index, 4u);
  EXPECT_NEAR(r.best, std::log(2.25) / std::log(1.8), 1e-12);
  EXPECT_NEAR(r.best, 1.37963, 1e-4);
  EXPECT_EQ(r.partial_sums.size(), 10u);
}

TEST(SstUpperBound, Errors) {
  EXPECT_THROW(sst_upper_bound({{1, 1}, {1, 1}}), ValidationError);
  EXPECT_THROW(sst_upper_bound({{3}, {1}}), ValidationError);
  EXPECT_THROW(sst_upper_bound({{3, 3}, {2, 1}}), ValidationError);
}

TEST(SstUpperBound, BoundIsAtLeastOne) {
  testing::Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = sst_upper_bound(testing::random_sst_spec(rng, 1u << 30));
    EXPECT_GE(r.best, 1.0);
    for (const auto& t : r.per_k) EXPECT_GE(t.bound, r.best);
  }
}

TEST(SstUpperBound, DominatesTheEngineBracket) {
  testing::Rng rng(42);
  for (int trial = 0; trial < 8; ++trial) {
    const auto spec = testing::random_sst_spec(rng, 120);
    const auto est = roundness(tree_to_metric(build_sst(spec)));
    EXPECT_LE(est.lower, sst_upper_bound(spec).best + 1e-6);
  }
}

TEST(SstStarSimplex, ViolatesJustAboveTheBound) {
  const SSTSpec spec{{3, 3, 3}, {1.0, 1.0, 1.0}};
  const auto r = sst_upper_bound(spec);
  const auto d = tree_to_metric(build_sst(spec));
  for (const auto& term : r.per_k) {
    const auto star = sst_star_simplex(spec, term.k);
    EXPECT_EQ(star.order(), term.q);
    EXPECT_LT(simplex_gap(d, star, term.bound + 1e-3), 0.0);
  }
  EXPECT_THROW(sst_star_simplex(spec, 3), ValidationError);
}

TEST(SubExponentialWindow, Examples) {
  EXPECT_EQ(sub_exponential_window(WeightFunction::polynomial({1, 1}), 1, 0.1, 1000), 9u);
  EXPECT_EQ(sub_exponential_window(WeightFunction::constant(3.0), 5, 0.01, 10), 1u);
  EXPECT_FALSE(sub_exponential_window(WeightFunction::geometric(2.0), 1, 0.5, 1000000).has_value());
  EXPECT_FALSE(sub_exponential_window(WeightFunction::polynomial({1, 1}), 1, 0.1, 8).has_value());
  EXPECT_FALSE(sub_exponential_window(WeightFunction::table({1, 2, 3}), 3, 0.5, 100).has_value());
  EXPECT_THROW(sub_exponential_window(WeightFunction::constant(1.0), 1, 1.0, 10), ValidationError);
  EXPECT_THROW(sub_exponential_window(WeightFunction::constant(1.0), 0, 0.5, 10), ValidationError);
}

TEST(SubExponentialWindow, WindowRatiosStayInside) {
  for (const char* text : {"polynomial(1,1)", "log-shifted(2)", "exp-sqrt(1)", "arctan(1)", "rational(1,0,1;1,1)"}) {
    const auto f = WeightFunction::parse(text);
    for (double eps : {0.5, 0.1, 0.02}) {
      const auto n0 = sub_exponential_window(f, 3, eps, 100000);
      ASSERT_TRUE(n0.has_value()) << text << " " << eps;
      for (std::uint64_t k = 0; k <= 3; ++k) {
        const double r = f(*n0 + k) / f(*n0);
        EXPECT_GE(r, 1.0 - eps - 1e-12);
        EXPECT_LE(r, 1.0 + eps + 1e-12);
      }
    }
  }
}

TEST(IsAdditivelySubexponentialSample, Examples) {
  EXPECT_TRUE(is_additively_subexponential_sample(WeightFunction::polynomial({1, 1}), 1, {0.5, 0.1, 0.01}, 1000000));
  EXPECT_FALSE(is_additively_subexponential_sample(WeightFunction::geometric(2.0), 1, {0.5, 0.1}, 10000));
  EXPECT_TRUE(is_additively_subexponential_sample(WeightFunction::exp_sqrt(), 1, {0.5, 0.1}, 1000000));
  EXPECT_THROW(is_additively_subexponential_sample(WeightFunction::constant(1.0), 1, {0.1, 0.5}, 10), ValidationError);
  EXPECT_THROW(is_additively_subexponential_sample(WeightFunction::constant(1.0), 1, {}, 10), ValidationError);
}

TEST(LpPointSet, Examples) {
  const std::vector<std::vector<double>> pts{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_DOUBLE_EQ(lp_point_set(pts, 1.0)(1, 2), 2.0);
  EXPECT_DOUBLE_EQ(lp_point_set(pts, 2.0)(1, 2), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(lp_point_set(pts, INFINITY)(1, 2), 1.0);
  EXPECT_THROW(lp_point_set(pts, 0.5), ValidationError);
  EXPECT_THROW(lp_point_set({{0, 0}, {1}}, 2.0), ValidationError);
  EXPECT_THROW(lp_point_set({{0, 0}, {0, 0}}, 2.0), MetricError);
}

TEST(LpPointSet, SquareHasRoundnessTwo) {
  const auto sq = lp_point_set({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 2.0);
  const auto r = roundness(sq, {1e-6, 64.0});
  EXPECT_NEAR(r.lower, 2.0, 1e-6);
  EXPECT_NEAR(r.upper, 2.0, 1e-6);
}

}  // namespace
}  // namespace genround
