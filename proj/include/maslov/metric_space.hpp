#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "maslov/error.hpp"
#include "maslov/space.hpp"

namespace maslov {

/// Dense row-major square table of distances.
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(std::size_t n, double fill = 0.0) : n_(n), d_(n * n, fill) {}
  DistanceTable(std::size_t n, std::vector<double> d) : n_(n), d_(std::move(d)) {
    if (d_.size() != n_ * n_) throw Error("distance table is not square");
  }
  static DistanceTable from_rows(const std::vector<std::vector<double>>& rows) {
    DistanceTable t(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw Error("distance table is not square");
      for (std::size_t j = 0; j < rows.size(); ++j) t(i, j) = rows[i][j];
    }
    return t;
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
  double diameter() const { return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end()); }

  friend bool operator==(const DistanceTable&, const DistanceTable&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

namespace detail {

inline void check_dissimilarity(const DistanceTable& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d(i, i) != 0.0) throw Error("distance table must be zero on the diagonal");
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (!std::isfinite(d(i, j))) throw Error("distance entries must be finite");
      if (d(i, j) < 0.0) throw Error("distance entries must be nonnegative");
      if (d(i, j) != d(j, i)) throw Error("distance table must be symmetric");
    }
  }
}

}  // namespace detail

class MetricSpace {
 public:
  /// Validates every metric axiom, including the triangle inequality.
  MetricSpace(Space space, DistanceTable dist) : space_(std::move(space)), dist_(std::move(dist)) {
    if (dist_.size() != space_->size()) throw Error("distance table size does not match its space");
    detail::check_dissimilarity(dist_);
    const std::size_t n = dist_.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && dist_(i, j) <= 0.0) throw Error("distinct points must have positive distance");
        for (std::size_t k = 0; k < n; ++k)
          if (dist_(i, j) > dist_(i, k) + dist_(k, j)) throw Error("triangle inequality violated");
      }
  }

  const Space& space() const { return space_; }
  const DistanceTable& dist() const { return dist_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }
  double diameter() const { return dist_.diameter(); }

 private:
  Space space_;
  DistanceTable dist_;
};

/// Largest metric dominated by a symmetric dissimilarity table:
/// all-pairs shortest paths (Floyd-Warshall). A no-op on metric input.
inline MetricSpace metric_closure(Space space, DistanceTable raw) {
  detail::check_dissimilarity(raw);
  const std::size_t n = raw.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && raw(i, j) == 0.0) throw Error("distinct points must have positive dissimilarity");
  // Repeat until stable so the result satisfies the triangle inequality in
  // floating point, not just in exact arithmetic.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double via = raw(i, k) + raw(k, j);
          if (via < raw(i, j)) {
            raw(i, j) = raw(j, i) = via;
            changed = true;
          }
        }
  }
  return MetricSpace(std::move(space), std::move(raw));
}

}  // namespace maslov
