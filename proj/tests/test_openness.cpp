#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace maslov;
using namespace testing_helpers;

namespace {

struct CollapseSetup {
  Space x = space("X", {"x0", "x1", "x2"});
  Space y = space("Y", {"y1", "y2"});
  CollapseMap f{PointMap(x, y, {0, 0, 1})};
};

double max_atom_distance(const IdempotentMeasure& a, const IdempotentMeasure& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, weight_distance(a[i], b[i]));
  return worst;
}

/// Random measure on c x c with first marginal exactly `m`.
IdempotentMeasure coupling_with_first_marginal(InstanceGenerator& g, const IdempotentMeasure& m) {
  const Space& c = m.space();
  const Space cc = FiniteSpace::product({c, c});
  const std::size_t n = c->size();
  std::vector<Weight> w(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    if (m[r].is_bottom()) continue;
    for (std::size_t k = 0; k < n; ++k) w[r * n + k] = min_weight(g.weight(), m[r]);
    w[r * n + g.uniform_size(0, n - 1)] = m[r];
  }
  return IdempotentMeasure(cc, std::move(w));
}

}  // namespace

TEST(CollapseMap, Validation) {
  const auto x = space("X", {"a", "b", "c"});
  const auto y = space("Y", {"p", "q"});
  const auto one = space("O", {"o"});
  EXPECT_NO_THROW(CollapseMap(PointMap(x, y, {0, 1, 1})));
  EXPECT_THROW(CollapseMap(PointMap(x, one, {0, 0, 0})), Error);
  EXPECT_THROW(CollapseMap(PointMap(y, x, {0, 1})), Error);
  EXPECT_THROW(CollapseMap(PointMap(x, x, {0, 1, 2})), Error);
}

TEST(LiftOpenCollapse, WorkedSequence) {
  CollapseSetup s;
  const auto mu0 = measure(s.x, {0, -1, 0});
  std::vector<IdempotentMeasure> seq;
  for (int k = 1; k <= 50; ++k) seq.push_back(IdempotentMeasure(s.y, weights({-1.0 / k, 0})));
  const auto lifts = lift_open_collapse(s.f, mu0, seq, pushforward(s.f.map(), mu0));
  for (int k = 1; k <= 50; ++k) {
    const auto& mk = lifts[k - 1];
    EXPECT_EQ(mk, IdempotentMeasure(s.x, weights({-1.0 / k, -1, 0})));
    EXPECT_EQ(pushforward(s.f.map(), mk), seq[k - 1]);
    EXPECT_LE(max_atom_distance(mk, mu0), 2.0 / k);
  }
}

TEST(LiftOpenCollapse, StationarySequence) {
  CollapseSetup s;
  InstanceGenerator g(61);
  for (int t = 0; t < 50; ++t) {
    const auto mu0 = g.measure(s.x);
    const auto nu0 = pushforward(s.f.map(), mu0);
    for (const auto& mk : lift_open_collapse(s.f, mu0, {nu0, nu0})) EXPECT_EQ(mk, mu0);
  }
}

TEST(LiftOpenCollapse, RejectsWrongLimitAndDominant) {
  CollapseSetup s;
  const auto mu0 = measure(s.x, {0, -1, 0});
  EXPECT_THROW(lift_open_collapse(s.f, mu0, {}, dirac(s.y, "y1")), Infeasible);
  EXPECT_THROW(lift_open_collapse(s.f, mu0, {}, std::nullopt, 1), Error);
  EXPECT_THROW(lift_open_collapse(s.f, mu0, {}, std::nullopt, 2), Error);
  EXPECT_NO_THROW(lift_open_collapse(s.f, measure(s.x, {-1, -1, 0}), {}, std::nullopt, 1));
}

TEST(LiftOpenSurjection, RandomSurjectionsAndSequences) {
  InstanceGenerator g(62);
  for (int t = 0; t < 60; ++t) {
    const auto x = g.space(5, "X");
    const auto y = InstanceGenerator::space_of_size(g.uniform_size(1, x->size()), "Y");
    const auto f = g.surjection(x, y);
    const auto mu0 = g.measure(x);
    const auto nu0 = pushforward(f, mu0);
    std::vector<IdempotentMeasure> seq;
    for (int k = 1; k <= 64; k *= 2) {
      std::vector<Weight> w(nu0.weights().begin(), nu0.weights().end());
      for (auto& v : w)
        if (v.is_finite() && v != Weight::zero()) v = Weight(v.value() - 1.0 / k);
      seq.emplace_back(y, std::move(w));
    }
    const auto lifts = lift_open_surjection(f, mu0, seq);
    ASSERT_EQ(lifts.size(), seq.size());
    for (std::size_t k = 0; k < lifts.size(); ++k) EXPECT_EQ(pushforward(f, lifts[k]), seq[k]);
    EXPECT_LE(max_atom_distance(lifts.back(), mu0), 2.0 / 64);
  }
}

TEST(FactorIntoCollapses, ComposesBackToTheMap) {
  InstanceGenerator g(63);
  for (int t = 0; t < 50; ++t) {
    const auto x = g.space(6, "X");
    const auto y = InstanceGenerator::space_of_size(g.uniform_size(1, x->size()), "Y");
    const auto f = g.surjection(x, y);
    const auto fac = factor_into_collapses(f);
    EXPECT_EQ(fac.collapses.size(), x->size() - y->size());
    PointMap acc = PointMap::identity(x);
    for (const auto& c : fac.collapses) acc = compose(c.map(), acc);
    acc = compose(fac.last, acc);
    for (std::size_t i = 0; i < x->size(); ++i) EXPECT_EQ(acc(i), f(i));
  }
}

TEST(BicommutativeLift, OnePointTarget) {
  const auto ci = space("Ci", {"y0", "y1"});
  const auto cj = space("Cj", {"x1"});
  const CollapseMap f(PointMap(ci, cj, {0, 0}));
  const auto nu = dirac(FiniteSpace::product({cj, cj}), 0);
  const auto lifted = bicommutative_lift(f, measure(ci, {-1, 0}), nu);
  // Row y1 copies nu, row y0 is min(-1, row y1).
  EXPECT_EQ(lifted, measure(FiniteSpace::product({ci, ci}), {-1, -1, 0, 0}));
  EXPECT_EQ(marginal(lifted, 0), measure(ci, {-1, 0}));
  EXPECT_EQ(pushforward(product_map(f.map(), f.map()), lifted), nu);
}

TEST(BicommutativeLift, DegenerateFiber) {
  const auto ci = space("Ci", {"y0", "y1", "y2"});
  const auto cj = space("Cj", {"x1", "x2"});
  const CollapseMap f(PointMap(ci, cj, {0, 0, 1}));
  const auto nu = measure(FiniteSpace::product({cj, cj}), {0, -1, -1, -kInf});
  const auto lifted = bicommutative_lift(f, measure(ci, {-kInf, 0, -1}), nu);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_TRUE(lifted[c].is_bottom());
  EXPECT_EQ(lifted[3 + 0], Weight::zero());
  EXPECT_EQ(lifted[3 + 1], Weight::zero());
  EXPECT_EQ(lifted[3 + 2], Weight(-1));
}

TEST(BicommutativeLift, RandomFeasibleInstances) {
  InstanceGenerator g(64);
  for (int t = 0; t < 50; ++t) {
    const std::size_t p = g.uniform_size(1, 3);
    const auto ci = InstanceGenerator::space_of_size(p + 1, "C");
    const auto cj = InstanceGenerator::space_of_size(p, "D");
    const CollapseMap f(g.surjection(ci, cj));
    const auto mu = g.measure(ci);
    const auto nu = coupling_with_first_marginal(g, pushforward(f.map(), mu));
    const auto lifted = bicommutative_lift(f, mu, nu);
    EXPECT_EQ(marginal(lifted, 0), mu);
    EXPECT_EQ(pushforward(product_map(f.map(), f.map()), lifted), nu);
  }
}

TEST(BicommutativeLift, RejectsMismatchedSpacesAndMarginals) {
  const auto ci = space("Ci", {"y0", "y1"});
  const auto cj = space("Cj", {"x1", "x2"});
  const auto one = space("O", {"o"});
  const CollapseMap f(PointMap(ci, one, {0, 0}));
  const auto nu = dirac(FiniteSpace::product({cj, cj}), 0);
  EXPECT_THROW(bicommutative_lift(f, measure(ci, {0, 0}), nu), Error);
  const CollapseMap g(PointMap(ci, space("O", {"o"}), {0, 0}));
  const auto oo = FiniteSpace::product({g.map().target(), g.map().target()});
  EXPECT_NO_THROW(bicommutative_lift(g, measure(ci, {0, -1}), dirac(oo, 0)));
  const auto three = space("T", {"t0", "t1", "t2"});
  const CollapseMap h(PointMap(three, cj, {0, 0, 1}));
  EXPECT_THROW(bicommutative_lift(h, measure(three, {0, 0, -kInf}), dirac(FiniteSpace::product({cj, cj}), 3)),
               Infeasible);
}

TEST(Couplings, FeasibilityAndMaximalCoupling) {
  const auto x = space("X", {"x1", "x2"});
  const auto y = space("Y", {"y1", "y2"});
  const auto mu1 = measure(x, {-1, 0}), mu2 = measure(y, {0, -1});
  const auto top = maximal_coupling(mu1, mu2);
  EXPECT_TRUE(coupling_feasible(top, mu1, mu2));
  EXPECT_EQ(top.cells, weights({-1, -1, 0, -1}));
  const Coupling diag{x, y, weights({0, -kInf, -kInf, 0})};
  EXPECT_FALSE(coupling_feasible(diag, mu1, mu2));
  EXPECT_TRUE(coupling_feasible(to_coupling(tensor(mu1, mu2)), mu1, mu2));
}

TEST(Couplings, TightPatternsOfTwoByTwo) {
  const auto x = space("X", {"x1", "x2"});
  const auto y = space("Y", {"y1", "y2"});
  const auto e = enumerate_tight_patterns(measure(x, {0, 0}), measure(y, {0, 0}));
  // Each of 2 rows and 2 columns picks one of 2 cells.
  EXPECT_EQ(e.patterns, 16u);
  // Minimal forced sets: the two diagonals.
  EXPECT_EQ(e.boxes.size(), 2u);
  // Normalized marginals always admit a coupling, so enumeration never fails.
  EXPECT_NO_THROW(enumerate_tight_patterns(measure(x, {0, -kInf}), measure(y, {0, -1})));
  const auto big = InstanceGenerator::space_of_size(5, "B");
  EXPECT_THROW(enumerate_tight_patterns(dirac(big, 0), dirac(y, 0)), Error);
}

TEST(Couplings, EveryGridCouplingLiesInABox) {
  InstanceGenerator g(65);
  for (int t = 0; t < 30; ++t) {
    const auto x = InstanceGenerator::space_of_size(2, "X"), y = InstanceGenerator::space_of_size(2, "Y");
    const auto mu1 = g.measure(x), mu2 = g.measure(y);
    const auto en = enumerate_tight_patterns(mu1, mu2);
    const std::vector<double> levels{-kInf, -4, -3.5, -3, -2.5, -2, -1.5, -1, -0.5, 0};
    oracle::for_each_phi(4, levels, [&](const std::vector<double>& v) {
      const Coupling c{x, y, weights({v[0], v[1], v[2], v[3]})};
      if (!coupling_feasible(c, mu1, mu2)) return;
      bool inside = false;
      for (const auto& b : en.boxes) {
        bool ok = true;
        for (std::size_t cell = 0; cell < 4; ++cell) {
          const Weight ub = min_weight(mu1[cell / 2], mu2[cell % 2]);
          ok = ok && c.cells[cell] <= ub && (!b.is_forced(cell) || c.cells[cell] == ub);
        }
        inside = inside || ok;
      }
      EXPECT_TRUE(inside);
    });
  }
}

TEST(CouplingGap, CounterexampleIsOneForSeveralL) {
  for (int l : {1, 2, 3, 7, 100}) {
    const auto r = counterexample_gap(l);
    EXPECT_EQ(r.gap, 1.0) << l;
    const auto inst = counterexample_instance(l);
    EXPECT_TRUE(coupling_feasible(to_coupling(r.coupling), inst.mu1, inst.mu2));
    EXPECT_EQ(oracle::family_distance(r.coupling, inst.target), 1.0);
  }
}

TEST(CouplingGap, CounterexampleMatchesGridOracle) {
  const auto inst = counterexample_instance(1);
  EXPECT_EQ(oracle::grid_gap(inst.target, inst.mu1, inst.mu2, 0.25, -3.0), 1.0);
}

TEST(CouplingGap, SelfMarginalsGiveZero) {
  const auto inst = counterexample_instance(5);
  const auto r = coupling_gap(inst.target, marginal(inst.target, 0), marginal(inst.target, 1));
  EXPECT_EQ(r.gap, 0.0);
}

TEST(CouplingGap, NeverWorseThanGridSearch) {
  InstanceGenerator g(66);
  for (int t = 0; t < 25; ++t) {
    const auto x = InstanceGenerator::space_of_size(2, "X"), y = InstanceGenerator::space_of_size(2, "Y");
    const auto xy = FiniteSpace::product({x, y});
    const auto mu1 = g.measure(x), mu2 = g.measure(y), target = g.measure(xy);
    const auto r = coupling_gap(target, mu1, mu2);
    EXPECT_TRUE(coupling_feasible(to_coupling(r.coupling), mu1, mu2));
    EXPECT_NEAR(oracle::family_distance(r.coupling, target), r.gap, 1e-12);
    EXPECT_NEAR(std::fabs(oracle::functional(r.coupling, {r.witness.values().begin(), r.witness.values().end()}) -
                          oracle::functional(target, {r.witness.values().begin(), r.witness.values().end()})),
                r.gap, 1e-12);
    EXPECT_LE(r.gap, oracle::grid_gap(target, mu1, mu2, 0.125, -4.0) + 1e-12);
  }
}

TEST(CouplingGap, SpaceMismatch) {
  const auto x = space("X", {"x1", "x2"});
  const auto y = space("Y", {"y1"});
  const auto target = dirac(FiniteSpace::product({x, y}), 0);
  EXPECT_NO_THROW(coupling_gap(target, measure(x, {0, 0}), dirac(y, 0)));
  EXPECT_THROW(coupling_gap(target, measure(x, {0, 0}), measure(x, {0, -kInf})), Error);
  EXPECT_THROW(coupling_gap(dirac(x, 0), measure(x, {0, 0}), dirac(y, 0)), Error);
}

TEST(Milyutin, DepthOneWorkedExample) {
  const auto y = space("Y", {"a", "b", "c"});
  const std::vector<Weight> zero(3, Weight::zero());
  const MilyutinLevel level{{CoverPair{{0, 1}, {0, 1}, zero}, CoverPair{{1, 2}, {1, 2}, zero}}};
  const auto m = milyutin_build(y, {level}, 1);
  const auto& x = m.domain;
  ASSERT_EQ(x->size(), 4u);
  EXPECT_EQ(m.selection[1], IdempotentMeasure(x, weights({-kInf, 0, 0, -kInf})));
  EXPECT_EQ(m.selection[1].at("b@copy1"), Weight::zero());
  EXPECT_EQ(m.selection[1].at("b@copy2"), Weight::zero());
  EXPECT_EQ(m.selection[0], dirac(x, "a@copy1"));
  for (std::size_t pt = 0; pt < 3; ++pt) {
    EXPECT_EQ(pushforward(m.projection, m.selection[pt]), dirac(y, pt));
    for (std::size_t s : support(m.selection[pt])) EXPECT_EQ(m.projection(s), pt);
  }
}

TEST(Milyutin, SingletonPartitionsGiveIdentity) {
  const auto y = space("Y", {"a", "b", "c"});
  MilyutinLevel level;
  for (std::size_t i = 0; i < 3; ++i) level.pairs.push_back(CoverPair{{i}, {i}, std::vector<Weight>(3, Weight::zero())});
  for (std::size_t depth : {1u, 2u, 3u}) {
    const auto m = milyutin_build(y, {level, level, level}, depth);
    EXPECT_EQ(m.domain->size(), 3u);
    for (std::size_t pt = 0; pt < 3; ++pt) {
      EXPECT_EQ(m.projection(pt), pt);
      EXPECT_EQ(m.selection[pt], dirac(m.domain, pt));
    }
  }
}

TEST(Milyutin, DepthTwoStacksFibers) {
  const auto y = space("Y", {"a", "b", "c"});
  const std::vector<Weight> zero(3, Weight::zero());
  const MilyutinLevel level{{CoverPair{{0, 1}, {0, 1}, zero}, CoverPair{{1, 2}, {1, 2}, zero}}};
  const auto m = milyutin_build(y, {level, level}, 2);
  const auto& sb = m.selection[1];
  EXPECT_EQ(support(sb).size(), 4u);
  for (std::size_t s : support(sb)) {
    EXPECT_EQ(sb[s], Weight::zero());
    EXPECT_EQ(m.projection(s), 1u);
  }
  EXPECT_EQ(pushforward(m.projection, sb), dirac(y, 1));
}

TEST(Milyutin, WeightedOverlapKeepsAlpha) {
  const auto y = space("Y", {"a", "b"});
  CoverPair p1{{0}, {0, 1}, weights({0, -2})};
  CoverPair p2{{1}, {1}, weights({-kInf, 0})};
  const auto m = milyutin_build(y, {MilyutinLevel{{p1, p2}}}, 1);
  EXPECT_EQ(m.selection[1].at("b@copy1"), Weight(-2));
  EXPECT_EQ(m.selection[1].at("b@copy2"), Weight::zero());
}

TEST(Milyutin, Validation) {
  const auto y = space("Y", {"a", "b"});
  const std::vector<Weight> zero(2, Weight::zero());
  EXPECT_THROW(milyutin_build(y, {MilyutinLevel{{CoverPair{{0}, {0}, zero}}}}, 1), Error);  // b uncovered
  EXPECT_THROW(milyutin_build(y, {MilyutinLevel{{CoverPair{{0, 1}, {0}, zero}}}}, 1), Error);  // U not in V
  EXPECT_THROW(milyutin_build(y, {MilyutinLevel{{CoverPair{{0, 1}, {0, 1}, weights({0, -1})}}}}, 1), Error);
  EXPECT_THROW(milyutin_build(y, {MilyutinLevel{{CoverPair{{0, 1}, {0, 1}, zero}}}}, 2), Error);
  EXPECT_THROW(milyutin_build(y, {MilyutinLevel{{CoverPair{{0, 1}, {0, 1}, zero}}}}, 0), Error);
}

TEST(Milyutin, RandomCovers) {
  InstanceGenerator g(67);
  for (int t = 0; t < 20; ++t) {
    const auto y = g.space(4, "Y");
    std::vector<MilyutinLevel> levels;
    for (int d = 0; d < 2; ++d) {
      MilyutinLevel level;
      std::vector<bool> covered(y->size(), false);
      while (!std::all_of(covered.begin(), covered.end(), [](bool b) { return b; })) {
        CoverPair p;
        p.u = g.nonempty_subset(y);
        p.v = p.u;
        for (std::size_t extra : g.subset(y))
          if (std::find(p.v.begin(), p.v.end(), extra) == p.v.end()) p.v.push_back(extra);
        p.alpha.assign(y->size(), Weight::bottom());
        for (std::size_t v : p.v) p.alpha[v] = Weight(g.dyadic(-2, 0));
        for (std::size_t u : p.u) {
          p.alpha[u] = Weight::zero();
          covered[u] = true;
        }
        level.pairs.push_back(std::move(p));
      }
      levels.push_back(std::move(level));
    }
    for (std::size_t depth : {1u, 2u}) {
      const auto m = milyutin_build(y, levels, depth);
      for (std::size_t pt = 0; pt < y->size(); ++pt) {
        EXPECT_EQ(pushforward(m.projection, m.selection[pt]), dirac(y, pt));
        for (std::size_t s : support(m.selection[pt])) EXPECT_EQ(m.projection(s), pt);
      }
    }
  }
}
