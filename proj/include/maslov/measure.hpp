#pragma once

/**
 * @file measure.hpp
 * @brief Idempotent probability measures of finite support.
 *
 * A measure on a finite space X is a dense weight table w: X -> R_max with
 * max w = 0. It acts on functions by the Maslov integral
 *
 *     mu(phi) = max_x ( phi(x) + w(x) ),
 *
 * which is normalized (mu(c) = c), (.)-homogeneous and (+)-additive.
 * Two measures on the same space are equal as functionals iff their tables
 * are equal, so equality compares tables exactly.
 */

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maslov/error.hpp"
#include "maslov/space.hpp"
#include "maslov/weight.hpp"

namespace maslov {

class IdempotentMeasure;
IdempotentMeasure normalize(Space space, std::vector<Weight> raw);

class IdempotentMeasure {
 public:
  /// Accepts an already normalized table; throws if max weight != 0.
  IdempotentMeasure(Space space, std::vector<Weight> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    if (weights_.size() != space_->size()) throw Error("measure table size does not match its space");
    if (oplus_all(weights_) != Weight::zero())
      throw Error("measure is not normalized (max weight must be exactly 0)");
  }

  const Space& space() const { return space_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const Weight> weights() const { return weights_; }
  Weight operator[](std::size_t i) const { return weights_[i]; }
  Weight at(const std::string& label) const { return weights_[space_->index(label)]; }

  friend bool operator==(const IdempotentMeasure& a, const IdempotentMeasure& b) {
    return same_space(a.space_, b.space_) && a.weights_ == b.weights_;
  }

 private:
  Space space_;
  std::vector<Weight> weights_;
};

/// Shifts every finite weight by -max so the maximum becomes exactly 0.
inline IdempotentMeasure normalize(Space space, std::vector<Weight> raw) {
  const Weight top = oplus_all(raw);
  if (top.is_bottom()) throw Error("cannot normalize: every weight is -inf");
  for (Weight& w : raw)
    if (w.is_finite()) w = w == top ? Weight::zero() : Weight(w.value() - top.value());
  return IdempotentMeasure(std::move(space), std::move(raw));
}

inline IdempotentMeasure dirac(const Space& space, std::size_t point) {
  if (point >= space->size()) throw Error("dirac: point index out of range");
  std::vector<Weight> w(space->size());
  w[point] = Weight::zero();
  return IdempotentMeasure(space, std::move(w));
}

inline IdempotentMeasure dirac(const Space& space, const std::string& label) {
  return dirac(space, space->index(label));
}

/// Maslov integral mu(phi) = max over the support of phi(x) + w(x).
inline double integrate(const IdempotentMeasure& mu, const FiniteFunction& phi) {
  require_same_space(mu.space(), phi.space(), "integrate");
  double best = kNegInf;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i].is_finite()) best = std::max(best, phi[i] + mu[i].value());
  return best;
}

/// Indices with finite weight, ascending.
inline std::vector<std::size_t> support(const IdempotentMeasure& mu) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i].is_finite()) s.push_back(i);
  return s;
}

/// lambda1 (.) mu1 (+) lambda2 (.) mu2, requiring lambda1 (+) lambda2 = 0.
inline IdempotentMeasure convex_combination(Weight l1, const IdempotentMeasure& mu1, Weight l2,
                                            const IdempotentMeasure& mu2) {
  if (oplus(l1, l2) != Weight::zero()) throw Error("convex_combination: coefficients must have max 0");
  require_same_space(mu1.space(), mu2.space(), "convex_combination");
  std::vector<Weight> w(mu1.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = oplus(odot(l1, mu1[i]), odot(l2, mu2[i]));
  return IdempotentMeasure(mu1.space(), std::move(w));
}

/// Pointwise supremum of a nonempty family; its table is the atomwise max.
inline IdempotentMeasure pointwise_sup(std::span<const IdempotentMeasure> family) {
  if (family.empty()) throw Error("pointwise_sup of an empty family");
  std::vector<Weight> w(family.front().weights().begin(), family.front().weights().end());
  for (const auto& mu : family.subspan(1)) {
    require_same_space(family.front().space(), mu.space(), "pointwise_sup");
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = oplus(w[i], mu[i]);
  }
  return IdempotentMeasure(family.front().space(), std::move(w));
}

/// A point of Gamma^{n-1} = { lambda in R_max^n : max lambda = 0 }.
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<Weight> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw Error("simplex point has no coordinates");
    if (oplus_all(coords_) != Weight::zero()) throw Error("simplex coordinates must have max exactly 0");
  }
  std::span<const Weight> coords() const { return coords_; }
  std::size_t dimension() const { return coords_.size() - 1; }
  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  std::vector<Weight> coords_;
};

inline IdempotentMeasure simplex_to_measure(const SimplexPoint& p, const Space& space) {
  if (p.coords().size() != space->size()) throw Error("simplex_to_measure: coordinate count != |space|");
  return IdempotentMeasure(space, std::vector<Weight>(p.coords().begin(), p.coords().end()));
}

inline SimplexPoint measure_to_simplex(const IdempotentMeasure& mu) {
  return SimplexPoint(std::vector<Weight>(mu.weights().begin(), mu.weights().end()));
}

}  // namespace maslov
