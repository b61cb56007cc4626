#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace maslov;
using namespace testing_helpers;

TEST(Weight, OplusExamples) {
  EXPECT_EQ(oplus(Weight(3), Weight(5)), Weight(5));
  EXPECT_EQ(oplus(Weight::bottom(), Weight(-2)), Weight(-2));
  EXPECT_EQ(oplus(Weight::zero(), Weight::zero()), Weight::zero());
}

TEST(Weight, OdotExamples) {
  EXPECT_EQ(odot(Weight(2), Weight(3)), Weight(5));
  EXPECT_TRUE(odot(Weight::bottom(), Weight(7)).is_bottom());
  EXPECT_EQ(odot(Weight::zero(), Weight(-1.25)), Weight(-1.25));
}

TEST(Weight, DistanceExamples) {
  EXPECT_EQ(weight_distance(Weight::bottom(), Weight::zero()), 1.0);
  EXPECT_EQ(weight_distance(Weight::zero(), Weight::zero()), 0.0);
  EXPECT_NEAR(weight_distance(Weight(std::log(2.0)), Weight(std::log(3.0))), 1.0, 1e-15);
  EXPECT_EQ(weight_distance(Weight::bottom(), Weight::bottom()), 0.0);
}

TEST(Weight, RejectsNanAndPlusInfinity) {
  EXPECT_THROW(Weight(std::nan("")), Error);
  EXPECT_THROW(Weight{kInf}, Error);
  EXPECT_TRUE(Weight(-kInf).is_bottom());
}

TEST(Weight, SemiringLawsOnDyadicGrid) {
  std::vector<Weight> grid{Weight::bottom()};
  for (int k = -8; k <= 8; ++k) grid.emplace_back(k / 4.0);
  for (Weight a : grid)
    for (Weight b : grid) {
      EXPECT_EQ(oplus(a, b), oplus(b, a));
      EXPECT_EQ(odot(a, b), odot(b, a));
      EXPECT_EQ(oplus(a, a), a);
      for (Weight c : grid) {
        EXPECT_EQ(odot(a, oplus(b, c)), oplus(odot(a, b), odot(a, c)));
        EXPECT_EQ(oplus(a, oplus(b, c)), oplus(oplus(a, b), c));
      }
    }
}

TEST(Weight, ToStringUsesMinusInf) {
  EXPECT_EQ(to_string(Weight::bottom()), "-inf");
  EXPECT_EQ(to_string(Weight(-0.5)), "-0.5");
}

TEST(Space, RejectsEmptyAndDuplicateLabels) {
  EXPECT_THROW(space("X", {}), Error);
  EXPECT_THROW(space("X", {"a", "a"}), Error);
  EXPECT_THROW(space("X", {"a"})->index("b"), Error);
}

TEST(Space, ProductIsLexicographic) {
  const auto x = space("X", {"a", "b"});
  const auto y = space("Y", {"c", "d", "e"});
  const auto xy = FiniteSpace::product({x, y});
  ASSERT_EQ(xy->size(), 6u);
  EXPECT_EQ(xy->label(0), "(a,c)");
  EXPECT_EQ(xy->label(5), "(b,e)");
  EXPECT_EQ(xy->tuple(4), (Tuple{1, 1}));
  EXPECT_TRUE(xy->is_full_product());
  EXPECT_EQ(*xy->find_tuple({1, 2}), 5u);
}

TEST(Space, SubproductKeepsChosenTuples) {
  const auto x = space("X", {"a", "b"});
  const auto s = FiniteSpace::subproduct({x, x}, {{0, 0}, {1, 1}}, "diag");
  EXPECT_EQ(s->size(), 2u);
  EXPECT_FALSE(s->is_full_product());
  EXPECT_FALSE(s->find_tuple({0, 1}).has_value());
}

TEST(MetricClosure, ShortensLongEdge) {
  const auto x = space("X", {"a", "b", "c"});
  const auto raw = DistanceTable::from_rows({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  const auto m = metric_closure(x, raw);
  const auto brute = oracle::path_closure({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  EXPECT_EQ(m(0, 2), 2.0);
  EXPECT_EQ(m(0, 2), brute[0][2]);
}

TEST(MetricClosure, FixpointAndTwoPoints) {
  const auto x = space("X", {"a", "b", "c"});
  const auto raw = DistanceTable::from_rows({{0, 1, 1.5}, {1, 0, 1}, {1.5, 1, 0}});
  EXPECT_EQ(metric_closure(x, raw).dist(), raw);
  const auto two = space("T", {"a", "b"});
  EXPECT_EQ(metric_closure(two, DistanceTable::from_rows({{0, 4}, {4, 0}}))(0, 1), 4.0);
}

TEST(MetricClosure, MatchesPathEnumerationOnRandomTables) {
  InstanceGenerator g(7);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = g.uniform_size(2, 6);
    std::vector<std::vector<double>> raw(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) raw[i][j] = raw[j][i] = g.dyadic(0.125, 6.0);
    const auto m = metric_closure(InstanceGenerator::space_of_size(n, "P"), DistanceTable::from_rows(raw));
    const auto brute = oracle::path_closure(raw);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(m(i, j), brute[i][j]);
  }
}

TEST(MetricClosure, RejectsBadTables) {
  const auto x = space("X", {"a", "b"});
  EXPECT_THROW(metric_closure(x, DistanceTable::from_rows({{0, 1}, {2, 0}})), Error);
  EXPECT_THROW(metric_closure(x, DistanceTable::from_rows({{0, -1}, {-1, 0}})), Error);
  EXPECT_THROW(metric_closure(x, DistanceTable::from_rows({{0, 0}, {0, 0}})), Error);
  EXPECT_THROW(metric_closure(x, DistanceTable::from_rows({{0, 1, 1}, {1, 0, 1}})), Error);
}

TEST(MetricSpace, ValidatesTriangleInequality) {
  const auto x = space("X", {"a", "b", "c"});
  EXPECT_THROW(MetricSpace(x, DistanceTable::from_rows({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}})), Error);
}
