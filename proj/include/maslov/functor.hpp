#pragma once

/**
 * @file functor.hpp
 * @brief The functor I on maps between finite spaces.
 *
 * pushforward(f, mu) has weight max{ w(x) : f(x) = y } at y, so that
 * I(f)(mu)(phi) = mu(phi o f).
 */

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "maslov/error.hpp"
#include "maslov/measure.hpp"
#include "maslov/space.hpp"

namespace maslov {

/// A total function between finite spaces, stored as a table of target indices.
class PointMap {
 public:
  PointMap(Space source, Space target, std::vector<std::size_t> table)
      : source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
    if (table_.size() != source_->size()) throw Error("map table must cover every source point");
    for (std::size_t y : table_)
      if (y >= target_->size()) throw Error("map value outside its target space");
  }

  static PointMap identity(const Space& s) {
    std::vector<std::size_t> t(s->size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = i;
    return PointMap(s, s, std::move(t));
  }

  /// Projection of a product space onto one of its factors.
  static PointMap projection(const Space& product, std::size_t axis) {
    if (!product->is_product()) throw Error("projection: space is not a product");
    const Space& f = product->factor(axis);
    std::vector<std::size_t> t(product->size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = product->tuple(i)[axis];
    return PointMap(product, f, std::move(t));
  }

  const Space& source() const { return source_; }
  const Space& target() const { return target_; }
  std::size_t operator()(std::size_t x) const { return table_[x]; }
  const std::vector<std::size_t>& table() const { return table_; }

  bool is_surjective() const {
    std::vector<bool> hit(target_->size(), false);
    for (std::size_t y : table_) hit[y] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  }
  bool is_injective() const {
    std::vector<bool> hit(target_->size(), false);
    for (std::size_t y : table_) {
      if (hit[y]) return false;
      hit[y] = true;
    }
    return true;
  }

  /// Source points mapped into `targets`.
  std::vector<std::size_t> preimage(const std::vector<std::size_t>& targets) const {
    std::vector<bool> in(target_->size(), false);
    for (std::size_t y : targets) in.at(y) = true;
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < table_.size(); ++x)
      if (in[table_[x]]) out.push_back(x);
    return out;
  }

  std::vector<std::size_t> image(const std::vector<std::size_t>& sources) const {
    std::set<std::size_t> s;
    for (std::size_t x : sources) s.insert(table_.at(x));
    return {s.begin(), s.end()};
  }

  friend bool operator==(const PointMap& a, const PointMap& b) {
    return same_space(a.source_, b.source_) && same_space(a.target_, b.target_) && a.table_ == b.table_;
  }

 private:
  Space source_;
  Space target_;
  std::vector<std::size_t> table_;
};

/// g o f
inline PointMap compose(const PointMap& g, const PointMap& f) {
  require_same_space(f.target(), g.source(), "compose");
  std::vector<std::size_t> t(f.source()->size());
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = g(f(x));
  return PointMap(f.source(), g.target(), std::move(t));
}

/// f x g : A x B -> C x D on full two-factor products.
inline PointMap product_map(const PointMap& f, const PointMap& g) {
  const Space src = FiniteSpace::product({f.source(), g.source()});
  const Space dst = FiniteSpace::product({f.target(), g.target()});
  std::vector<std::size_t> t(src->size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Tuple& p = src->tuple(i);
    t[i] = *dst->find_tuple({f(p[0]), g(p[1])});
  }
  return PointMap(src, dst, std::move(t));
}

inline IdempotentMeasure pushforward(const PointMap& f, const IdempotentMeasure& mu) {
  require_same_space(f.source(), mu.space(), "pushforward");
  std::vector<Weight> w(f.target()->size());
  for (std::size_t x = 0; x < mu.size(); ++x) w[f(x)] = oplus(w[f(x)], mu[x]);
  return IdempotentMeasure(f.target(), std::move(w));
}

/// Indices of `labels` in `space`; throws on unknown labels.
inline std::vector<std::size_t> indices_of(const Space& space, const std::vector<std::string>& labels) {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(space->index(l));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Whether supp(mu) is contained in the point set `subset` (indices).
inline bool lies_in_subspace(const IdempotentMeasure& mu, const std::vector<std::size_t>& subset) {
  std::vector<bool> in(mu.size(), false);
  for (std::size_t i : subset) {
    if (i >= mu.size()) throw Error("lies_in_subspace: point index out of range");
    in[i] = true;
  }
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i].is_finite() && !in[i]) return false;
  return true;
}

inline bool lies_in_subspace(const IdempotentMeasure& mu, const std::vector<std::string>& labels) {
  return lies_in_subspace(mu, indices_of(mu.space(), labels));
}

/// The maximal lift of nu along a surjection: w(x) = nu(f(x)).
/// Its pushforward is nu exactly.
inline IdempotentMeasure lift_along_surjection(const PointMap& f, const IdempotentMeasure& nu) {
  if (!f.is_surjective()) throw Error("lift_along_surjection: map is not onto");
  require_same_space(f.target(), nu.space(), "lift_along_surjection");
  std::vector<Weight> w(f.source()->size());
  for (std::size_t x = 0; x < w.size(); ++x) w[x] = nu[f(x)];
  return IdempotentMeasure(f.source(), std::move(w));
}

}  // namespace maslov
