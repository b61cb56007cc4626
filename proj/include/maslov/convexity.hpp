#pragma once

/**
 * @file convexity.hpp
 * @brief Max-plus convexity in R_max^n and the idempotent barycenter.
 *
 * A compact max-plus convex set is represented by a finite generating cloud:
 * a finite space whose points carry coordinates in R_max^n. The barycenter of
 * mu = (+)_i lambda_i (.) delta_{a_i} is (+)_i lambda_i (.) a_i.
 */

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maslov/error.hpp"
#include "maslov/functor.hpp"
#include "maslov/measure.hpp"
#include "maslov/monad.hpp"
#include "maslov/space.hpp"
#include "maslov/weight.hpp"

namespace maslov {

using TropicalPoint = std::vector<Weight>;

inline TropicalPoint tropical_oplus(const TropicalPoint& a, const TropicalPoint& b) {
  if (a.size() != b.size()) throw Error("tropical points of different dimension");
  TropicalPoint r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = oplus(a[k], b[k]);
  return r;
}

inline TropicalPoint tropical_scale(Weight l, const TropicalPoint& a) {
  TropicalPoint r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = odot(l, a[k]);
  return r;
}

class PointCloud {
 public:
  PointCloud(Space space, std::vector<TropicalPoint> embed) : space_(std::move(space)), embed_(std::move(embed)) {
    if (embed_.size() != space_->size()) throw Error("cloud must embed every point of its space");
    dim_ = embed_.front().size();
    if (dim_ == 0) throw Error("cloud points must have at least one coordinate");
    for (const auto& p : embed_)
      if (p.size() != dim_) throw Error("cloud points have inconsistent dimensions");
  }

  const Space& space() const { return space_; }
  std::size_t dimension() const { return dim_; }
  const TropicalPoint& operator[](std::size_t i) const { return embed_[i]; }
  const std::vector<TropicalPoint>& points() const { return embed_; }

 private:
  Space space_;
  std::vector<TropicalPoint> embed_;
  std::size_t dim_ = 0;
};

/// beta(mu)_k = max_x ( w(x) + embed(x)_k ).
inline TropicalPoint barycenter(const PointCloud& cloud, const IdempotentMeasure& mu) {
  require_same_space(cloud.space(), mu.space(), "barycenter");
  TropicalPoint r(cloud.dimension());
  for (std::size_t x = 0; x < mu.size(); ++x) r = tropical_oplus(r, tropical_scale(mu[x], cloud[x]));
  return r;
}

/// The cloud of distinct images of `cloud` under a coordinate map, together
/// with the label map onto it. Points with equal coordinates are merged.
inline std::pair<PointCloud, PointMap> image_cloud(
    const PointCloud& cloud, const std::function<TropicalPoint(const TropicalPoint&)>& fn) {
  std::vector<TropicalPoint> distinct;
  std::vector<std::string> labels;
  std::vector<std::size_t> table(cloud.space()->size());
  std::map<std::vector<double>, std::size_t> seen;
  for (std::size_t x = 0; x < table.size(); ++x) {
    TropicalPoint p = fn(cloud[x]);
    std::vector<double> key;
    for (Weight w : p) key.push_back(w.value());
    auto [it, fresh] = seen.emplace(std::move(key), distinct.size());
    if (fresh) {
      distinct.push_back(std::move(p));
      labels.push_back(cloud.space()->label(x));
    }
    table[x] = it->second;
  }
  Space img = FiniteSpace::make(cloud.space()->name() + "'", std::move(labels));
  return {PointCloud(img, std::move(distinct)), PointMap(cloud.space(), img, std::move(table))};
}

/// Checks beta o zeta = beta o I(beta) on one outer measure, computing the two
/// sides along independent routes.
inline bool algebra_law_check(const PointCloud& cloud, const OuterMeasure& m) {
  require_same_space(cloud.space(), m.base(), "algebra_law_check");
  const TropicalPoint lhs = barycenter(cloud, multiply(m));

  // I(beta)(M): a measure on the cloud of inner barycenters.
  std::vector<TropicalPoint> centers;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < m.size(); ++i) {
    centers.push_back(barycenter(cloud, m.item(i)));
    labels.push_back("b" + std::to_string(i));
  }
  Space idx = FiniteSpace::make("inner", std::move(labels));
  PointCloud inner(idx, std::move(centers));
  const IdempotentMeasure mbeta(idx, std::vector<Weight>(m.weights().begin(), m.weights().end()));
  return lhs == barycenter(inner, mbeta);
}

struct HullMembership {
  bool member = false;
  std::vector<Weight> witness;  ///< greatest lambda with (+)_i lambda_i (.) g_i <= x
};

/// Tropical-span membership by residuation: lambda_i = min_k (x_k - g_ik);
/// x is a member iff (+)_i lambda_i (.) g_i reproduces x.
/// Generators must have finite coordinates.
inline HullMembership hull_membership(const std::vector<TropicalPoint>& generators, const TropicalPoint& x) {
  if (generators.empty()) throw Error("hull_membership: no generators");
  for (const auto& g : generators) {
    if (g.size() != x.size()) throw Error("hull_membership: dimension mismatch");
    for (Weight w : g)
      if (w.is_bottom()) throw Error("hull_membership: generator coordinates must be finite");
  }
  HullMembership r;
  TropicalPoint combo(x.size());
  for (const auto& g : generators) {
    Weight l;  // -inf when x has a -inf coordinate
    bool bottom = false;
    double best = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k].is_bottom()) {
        bottom = true;
        break;
      }
      const double d = x[k].value() - g[k].value();
      best = k == 0 ? d : std::min(best, d);
    }
    if (!bottom) l = Weight(best);
    r.witness.push_back(l);
    combo = tropical_oplus(combo, tropical_scale(l, g));
  }
  r.member = combo == x;
  return r;
}

/// Whether fn(beta(mu)) = beta(I(fn)(mu)), with I(fn) the pushforward onto the
/// image cloud.
inline bool affine_map_check(const PointCloud& cloud,
                             const std::function<TropicalPoint(const TropicalPoint&)>& fn,
                             const IdempotentMeasure& mu) {
  const auto [img, map] = image_cloud(cloud, fn);
  return fn(barycenter(cloud, mu)) == barycenter(img, pushforward(map, mu));
}

}  // namespace maslov
