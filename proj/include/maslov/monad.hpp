#pragma once

/**
 * @file monad.hpp
 * @brief The idempotent measure monad (I, eta, zeta) on finite spaces,
 *        tensor products, marginals, and the hyperspace / fuzzy embeddings.
 *
 * A finitely supported element of I(T) for an arbitrary carrier T is a
 * Mixture<T>: a list of items with max-plus weights whose maximum is 0.
 * OuterMeasure = Mixture<IdempotentMeasure> is an element of I^2(X),
 * Mixture<OuterMeasure> an element of I^3(X). Items are stored by index and
 * may repeat; every operation below is insensitive to repetition.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "maslov/error.hpp"
#include "maslov/functor.hpp"
#include "maslov/measure.hpp"
#include "maslov/space.hpp"
#include "maslov/weight.hpp"

namespace maslov {

template <class T>
class Mixture;

inline const Space& base_space(const IdempotentMeasure& mu) { return mu.space(); }
template <class T>
const Space& base_space(const Mixture<T>& m) { return m.base(); }

template <class T>
class Mixture {
 public:
  Mixture(std::vector<T> items, std::vector<Weight> weights)
      : items_(std::move(items)), weights_(std::move(weights)) {
    if (items_.empty()) throw Error("mixture has no items");
    if (items_.size() != weights_.size()) throw Error("mixture item and weight counts differ");
    if (oplus_all(weights_) != Weight::zero())
      throw Error("mixture is not normalized (max weight must be exactly 0)");
    for (const auto& it : items_) require_same_space(base_space(items_.front()), base_space(it), "mixture");
  }

  const Space& base() const { return base_space(items_.front()); }
  std::size_t size() const { return items_.size(); }
  const std::vector<T>& items() const { return items_; }
  std::span<const Weight> weights() const { return weights_; }
  const T& item(std::size_t i) const { return items_[i]; }
  Weight weight(std::size_t i) const { return weights_[i]; }

  /// M(psi) = max_i ( weight_i + psi(item_i) ) over finite weights.
  template <class F>
  double evaluate(F&& psi) const {
    double best = kNegInf;
    for (std::size_t i = 0; i < items_.size(); ++i)
      if (weights_[i].is_finite()) best = std::max(best, weights_[i].value() + psi(items_[i]));
    return best;
  }

 private:
  std::vector<T> items_;
  std::vector<Weight> weights_;
};

using OuterMeasure = Mixture<IdempotentMeasure>;

/// eta: the Dirac mixture at one item.
template <class T>
Mixture<T> unit(T item) {
  return Mixture<T>({std::move(item)}, {Weight::zero()});
}

/// I(F) on mixtures: apply F to every item, keep the weights.
template <class T, class F>
auto fmap(F&& fn, const Mixture<T>& m) {
  using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
  std::vector<U> items;
  items.reserve(m.size());
  for (const auto& it : m.items()) items.push_back(fn(it));
  return Mixture<U>(std::move(items), std::vector<Weight>(m.weights().begin(), m.weights().end()));
}

/// zeta one level up: I(I(T)) -> I(T), weight W_k (.) W_ki on item i of mixture k.
template <class T>
Mixture<T> flatten(const Mixture<Mixture<T>>& mm) {
  std::vector<T> items;
  std::vector<Weight> weights;
  for (std::size_t k = 0; k < mm.size(); ++k) {
    const auto& inner = mm.item(k);
    for (std::size_t i = 0; i < inner.size(); ++i) {
      items.push_back(inner.item(i));
      weights.push_back(odot(mm.weight(k), inner.weight(i)));
    }
  }
  return Mixture<T>(std::move(items), std::move(weights));
}

/// zeta_X : I^2(X) -> I(X), w(x) = max_i ( W_i + w_i(x) ).
inline IdempotentMeasure multiply(const OuterMeasure& m) {
  std::vector<Weight> w(m.base()->size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t x = 0; x < w.size(); ++x) w[x] = oplus(w[x], odot(m.weight(i), m.item(i)[x]));
  return IdempotentMeasure(m.base(), std::move(w));
}

/// I(eta_X)(mu): the Diracs of X weighted by mu.
inline OuterMeasure lift_unit(const IdempotentMeasure& mu) {
  std::vector<IdempotentMeasure> items;
  items.reserve(mu.size());
  for (std::size_t x = 0; x < mu.size(); ++x) items.push_back(dirac(mu.space(), x));
  return OuterMeasure(std::move(items), std::vector<Weight>(mu.weights().begin(), mu.weights().end()));
}

/// The map phi-bar: I(X) -> R, mu |-> mu(phi).
inline double eval_functional(const FiniteFunction& phi, const IdempotentMeasure& mu) {
  return integrate(mu, phi);
}

/// M(phi-bar), the outer evaluation used in the defining identity of zeta.
inline double outer_evaluate(const OuterMeasure& m, const FiniteFunction& phi) {
  return m.evaluate([&](const IdempotentMeasure& mu) { return eval_functional(phi, mu); });
}

/// Tensor product of finitely many measures on the flat product of their
/// spaces: w(x_1,...,x_k) = w_1(x_1) (.) ... (.) w_k(x_k).
inline IdempotentMeasure tensor_many(std::span<const IdempotentMeasure> factors) {
  if (factors.empty()) throw Error("tensor of zero measures");
  std::vector<Space> spaces;
  for (const auto& mu : factors) spaces.push_back(mu.space());
  const Space prod = FiniteSpace::product(std::move(spaces));
  std::vector<Weight> w(prod->size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    Weight acc = Weight::zero();
    const Tuple& t = prod->tuple(i);
    for (std::size_t k = 0; k < factors.size(); ++k) acc = odot(acc, factors[k][t[k]]);
    w[i] = acc;
  }
  return IdempotentMeasure(prod, std::move(w));
}

inline IdempotentMeasure tensor(const IdempotentMeasure& mu, const IdempotentMeasure& nu) {
  const IdempotentMeasure pair[] = {mu, nu};
  return tensor_many(pair);
}

/// Pushforward along the projection onto factor `axis`.
inline IdempotentMeasure marginal(const IdempotentMeasure& mu, std::size_t axis) {
  if (!mu.space()->is_product()) throw Error("marginal: measure does not live on a product space");
  if (axis >= mu.space()->arity()) throw Error("marginal: axis out of range");
  return pushforward(PointMap::projection(mu.space(), axis), mu);
}

/// A nonempty subset of a finite space (every subset is closed).
class ClosedSet {
 public:
  ClosedSet(Space space, std::vector<std::size_t> members) : space_(std::move(space)), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty()) throw Error("closed set must be nonempty");
    if (members_.back() >= space_->size()) throw Error("closed set member outside its space");
  }
  ClosedSet(Space space, const std::vector<std::string>& labels)
      : ClosedSet(space, indices_of(space, labels)) {}

  const Space& space() const { return space_; }
  const std::vector<std::size_t>& members() const { return members_; }
  bool contains(std::size_t x) const { return std::binary_search(members_.begin(), members_.end(), x); }

  friend bool operator==(const ClosedSet& a, const ClosedSet& b) {
    return same_space(a.space_, b.space_) && a.members_ == b.members_;
  }

 private:
  Space space_;
  std::vector<std::size_t> members_;
};

inline const Space& base_space(const ClosedSet& a) { return a.space(); }

/// s_X(x) = {x}
inline ClosedSet singleton(const Space& space, std::size_t x) { return ClosedSet(space, std::vector<std::size_t>{x}); }

/// j_X(A): weight 0 on A, -inf elsewhere; j_X(A)(phi) = max(phi|A).
inline IdempotentMeasure hyperspace_embed(const ClosedSet& a) {
  std::vector<Weight> w(a.space()->size());
  for (std::size_t x : a.members()) w[x] = Weight::zero();
  return IdempotentMeasure(a.space(), std::move(w));
}

/// u_X: union of a nonempty family.
inline ClosedSet hyperspace_union(std::span<const ClosedSet> family) {
  if (family.empty()) throw Error("union of an empty family");
  std::vector<std::size_t> all;
  for (const auto& a : family) {
    require_same_space(family.front().space(), a.space(), "hyperspace_union");
    all.insert(all.end(), a.members().begin(), a.members().end());
  }
  return ClosedSet(family.front().space(), std::move(all));
}

/// j_{exp X}(family): the uniform (all weights 0) mixture of the sets.
inline Mixture<ClosedSet> hyperspace_embed_family(std::span<const ClosedSet> family) {
  if (family.empty()) throw Error("empty family of closed sets");
  return Mixture<ClosedSet>(std::vector<ClosedSet>(family.begin(), family.end()),
                            std::vector<Weight>(family.size(), Weight::zero()));
}

/// chi: X -> [0,1] with max chi = 1.
class FuzzySet {
 public:
  FuzzySet(Space space, std::vector<double> grades) : space_(std::move(space)), grades_(std::move(grades)) {
    if (grades_.size() != space_->size()) throw Error("fuzzy set size does not match its space");
    double top = 0.0;
    for (double g : grades_) {
      if (!(g >= 0.0 && g <= 1.0)) throw Error("fuzzy grades must lie in [0,1]");
      top = std::max(top, g);
    }
    if (top != 1.0) throw Error("fuzzy set must attain grade 1");
  }
  const Space& space() const { return space_; }
  std::span<const double> grades() const { return grades_; }

 private:
  Space space_;
  std::vector<double> grades_;
};

/// w(x) = ln chi(x), ln 0 = -inf.
inline IdempotentMeasure fuzzy_embed(const FuzzySet& chi) {
  std::vector<Weight> w(chi.grades().size());
  for (std::size_t i = 0; i < w.size(); ++i)
    if (chi.grades()[i] > 0.0) w[i] = Weight(std::log(chi.grades()[i]));
  return IdempotentMeasure(chi.space(), std::move(w));
}

}  // namespace maslov
