#pragma once

/**
 * @file space.hpp
 * @brief Finite labeled point sets, product spaces and real-valued functions.
 *
 * A FiniteSpace is an ordered list of distinct labels. The declared order is
 * canonical: every dense table (measure weights, function values, map
 * tables) is indexed by it.
 *
 * Product spaces keep their factor structure. A point of a product is a tuple
 * of factor indices; its label is "(a,b,...)" and is only used for display.
 * A product space may hold a subset of the full Cartesian product (e.g. a
 * fiber product), in which case the tuples are listed explicitly.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maslov/error.hpp"

namespace maslov {

class FiniteSpace;
using Space = std::shared_ptr<const FiniteSpace>;
using Tuple = std::vector<std::size_t>;

class FiniteSpace {
  struct Private {};

 public:
  FiniteSpace(Private, std::string name, std::vector<std::string> labels,
              std::vector<Space> factors, std::vector<Tuple> tuples)
      : name_(std::move(name)),
        labels_(std::move(labels)),
        factors_(std::move(factors)),
        tuples_(std::move(tuples)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
    for (std::size_t i = 0; i < tuples_.size(); ++i) tuple_index_.emplace(tuples_[i], i);
  }

  /// A plain space. Labels must be nonempty and pairwise distinct.
  static Space make(std::string name, std::vector<std::string> labels) {
    if (labels.empty()) throw Error("space '" + name + "' has no points");
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end())
      throw Error("space '" + name + "' has duplicate label '" + *it + "'");
    return std::make_shared<const FiniteSpace>(Private{}, std::move(name), std::move(labels),
                                               std::vector<Space>{}, std::vector<Tuple>{});
  }

  /// Full Cartesian product, tuples in lexicographic order (last factor fastest).
  static Space product(std::vector<Space> factors, std::string name = {}) {
    if (factors.empty()) throw Error("product of zero factors");
    std::vector<Tuple> tuples{Tuple{}};
    for (const auto& f : factors) {
      std::vector<Tuple> next;
      next.reserve(tuples.size() * f->size());
      for (const auto& t : tuples)
        for (std::size_t i = 0; i < f->size(); ++i) {
          Tuple u = t;
          u.push_back(i);
          next.push_back(std::move(u));
        }
      tuples = std::move(next);
    }
    return subproduct(std::move(factors), std::move(tuples), std::move(name));
  }

  /// A subset of a product, listed in the given order.
  static Space subproduct(std::vector<Space> factors, std::vector<Tuple> tuples,
                          std::string name = {}) {
    if (factors.empty()) throw Error("product of zero factors");
    if (tuples.empty()) throw Error("product space has no points");
    std::vector<std::string> labels;
    labels.reserve(tuples.size());
    for (const auto& t : tuples) {
      if (t.size() != factors.size()) throw Error("tuple arity does not match factor count");
      std::string s = "(";
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] >= factors[k]->size()) throw Error("tuple component out of range");
        if (k) s += ',';
        s += factors[k]->label(t[k]);
      }
      s += ')';
      labels.push_back(std::move(s));
    }
    if (name.empty()) {
      name = "(";
      for (std::size_t k = 0; k < factors.size(); ++k) {
        if (k) name += "x";
        name += factors[k]->name();
      }
      name += ")";
    }
    auto sp = std::make_shared<const FiniteSpace>(Private{}, std::move(name), std::move(labels),
                                                  std::move(factors), std::move(tuples));
    if (sp->tuple_index_.size() != sp->tuples_.size()) throw Error("product space has duplicate tuples");
    return sp;
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<std::size_t> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index(const std::string& label) const {
    if (auto i = find(label)) return *i;
    throw Error("unknown point '" + label + "' in space '" + name_ + "'");
  }

  bool is_product() const { return !factors_.empty(); }
  std::size_t arity() const { return factors_.size(); }
  const std::vector<Space>& factors() const { return factors_; }
  const Space& factor(std::size_t axis) const {
    if (axis >= factors_.size()) throw Error("axis " + std::to_string(axis) + " out of range");
    return factors_[axis];
  }
  const Tuple& tuple(std::size_t i) const { return tuples_.at(i); }
  std::optional<std::size_t> find_tuple(const Tuple& t) const {
    auto it = tuple_index_.find(t);
    if (it == tuple_index_.end()) return std::nullopt;
    return it->second;
  }
  /// Whether every tuple of the Cartesian product is present.
  bool is_full_product() const {
    if (!is_product()) return false;
    std::size_t n = 1;
    for (const auto& f : factors_) n *= f->size();
    return n == size();
  }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<Space> factors_;
  std::vector<Tuple> tuples_;
  std::map<std::string, std::size_t> index_;
  std::map<Tuple, std::size_t> tuple_index_;
};

/// Structural equality: same points in the same order with the same factor
/// structure. Names are ignored.
inline bool same_space(const FiniteSpace& a, const FiniteSpace& b) {
  if (&a == &b) return true;
  if (a.labels() != b.labels() || a.arity() != b.arity()) return false;
  for (std::size_t k = 0; k < a.arity(); ++k)
    if (!same_space(*a.factor(k), *b.factor(k))) return false;
  for (std::size_t i = 0; a.is_product() && i < a.size(); ++i)
    if (a.tuple(i) != b.tuple(i)) return false;
  return true;
}

inline bool same_space(const Space& a, const Space& b) { return same_space(*a, *b); }

inline void require_same_space(const Space& a, const Space& b, const char* what) {
  if (!same_space(a, b))
    throw Error(std::string(what) + ": space mismatch ('" + a->name() + "' vs '" + b->name() + "')");
}

/// A real-valued function on a finite space; every value is finite.
class FiniteFunction {
 public:
  FiniteFunction(Space space, std::vector<double> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_->size()) throw Error("function table size does not match its space");
    for (double v : values_)
      if (!std::isfinite(v)) throw Error("function values must be finite");
  }

  static FiniteFunction constant(Space space, double c) {
    const std::size_t n = space->size();
    return FiniteFunction(std::move(space), std::vector<double>(n, c));
  }

  const Space& space() const { return space_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  friend bool operator==(const FiniteFunction& a, const FiniteFunction& b) {
    return same_space(a.space_, b.space_) && a.values_ == b.values_;
  }

 private:
  Space space_;
  std::vector<double> values_;
};

inline FiniteFunction shift(const FiniteFunction& f, double c) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x += c;
  return FiniteFunction(f.space(), std::move(v));
}

inline FiniteFunction pointwise_max(const FiniteFunction& f, const FiniteFunction& g) {
  require_same_space(f.space(), g.space(), "pointwise_max");
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(f[i], g[i]);
  return FiniteFunction(f.space(), std::move(v));
}

}  // namespace maslov
