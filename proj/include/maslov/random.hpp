#pragma once

/**
 * @file random.hpp
 * @brief Seeded generators for random finite instances.
 *
 * Weights are dyadic (multiples of 1/8 in [-4, 0], or -inf with probability
 * 0.2) so that max and + are exact and every law can be checked with ==.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "maslov/convexity.hpp"
#include "maslov/functor.hpp"
#include "maslov/measure.hpp"
#include "maslov/metric_space.hpp"
#include "maslov/monad.hpp"
#include "maslov/space.hpp"
#include "maslov/weight.hpp"

namespace maslov {

class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  /// Derives an independent stream for case `index` of group `group`.
  static InstanceGenerator for_case(std::uint64_t seed, std::uint64_t group, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(group), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    return InstanceGenerator(rng());
  }

  std::mt19937_64& engine() { return rng_; }

  std::size_t uniform_size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  /// k/8 for k uniform in [lo*8, hi*8].
  double dyadic(double lo, double hi) {
    const auto k = std::uniform_int_distribution<int>(static_cast<int>(lo * 8), static_cast<int>(hi * 8))(rng_);
    return k / 8.0;
  }

  Weight weight() { return coin(0.2) ? Weight::bottom() : Weight(dyadic(-4.0, 0.0)); }

  Space space(std::size_t max_points, const std::string& name = "X") {
    return space_of_size(uniform_size(1, max_points), name);
  }

  static Space space_of_size(std::size_t n, const std::string& name) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(name + std::to_string(i));
    return FiniteSpace::make(name, std::move(labels));
  }

  IdempotentMeasure measure(const Space& s) {
    std::vector<Weight> w(s->size());
    for (Weight& x : w) x = weight();
    if (oplus_all(w).is_bottom()) w[uniform_size(0, w.size() - 1)] = Weight(dyadic(-4.0, 0.0));
    return normalize(s, std::move(w));
  }

  FiniteFunction function(const Space& s) {
    std::vector<double> v(s->size());
    for (double& x : v) x = dyadic(-8.0, 8.0);
    return FiniteFunction(s, std::move(v));
  }

  PointMap map(const Space& from, const Space& to) {
    std::vector<std::size_t> t(from->size());
    for (auto& y : t) y = uniform_size(0, to->size() - 1);
    return PointMap(from, to, std::move(t));
  }

  /// Requires |from| >= |to|.
  PointMap surjection(const Space& from, const Space& to) {
    std::vector<std::size_t> t(from->size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = i < to->size() ? i : uniform_size(0, to->size() - 1);
    std::shuffle(t.begin(), t.end(), rng_);
    return PointMap(from, to, std::move(t));
  }

  std::vector<std::size_t> subset(const Space& s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s->size(); ++i)
      if (coin(0.5)) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> nonempty_subset(const Space& s) {
    auto out = subset(s);
    if (out.empty()) out.push_back(uniform_size(0, s->size() - 1));
    return out;
  }

  /// Mixture weights with max exactly 0.
  std::vector<Weight> mixture_weights(std::size_t k) {
    std::vector<Weight> w(k);
    for (Weight& x : w) x = weight();
    w[uniform_size(0, k - 1)] = Weight::zero();
    const Weight top = oplus_all(w);
    for (Weight& x : w)
      if (x.is_finite()) x = Weight(x.value() - top.value());
    return w;
  }

  OuterMeasure outer(const Space& s, std::size_t max_items = 4) {
    const std::size_t k = uniform_size(1, max_items);
    std::vector<IdempotentMeasure> items;
    for (std::size_t i = 0; i < k; ++i) items.push_back(measure(s));
    return OuterMeasure(std::move(items), mixture_weights(k));
  }

  Mixture<OuterMeasure> outer2(const Space& s, std::size_t max_items = 3) {
    const std::size_t k = uniform_size(1, max_items);
    std::vector<OuterMeasure> items;
    for (std::size_t i = 0; i < k; ++i) items.push_back(outer(s, max_items));
    return Mixture<OuterMeasure>(std::move(items), mixture_weights(k));
  }

  /// Finite dyadic coordinates in [-4, 4].
  PointCloud cloud(const Space& s, std::size_t dim) {
    std::vector<TropicalPoint> pts(s->size(), TropicalPoint(dim));
    for (auto& p : pts)
      for (auto& c : p) c = Weight(dyadic(-4.0, 4.0));
    return PointCloud(s, std::move(pts));
  }

  /// Metric with distances that are multiples of `quantum`, drawn in
  /// [quantum, max_dist] and closed under shortest paths.
  MetricSpace metric(const Space& s, double quantum = 0.25, double max_dist = 1.5) {
    const std::size_t n = s->size();
    DistanceTable d(n);
    const auto steps = static_cast<int>(max_dist / quantum);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        d(i, j) = d(j, i) = quantum * std::uniform_int_distribution<int>(1, steps)(rng_);
    return metric_closure(s, std::move(d));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace maslov
