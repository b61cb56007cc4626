#pragma once

/**
 * @file weight.hpp
 * @brief The max-plus semiring R_max = R u {-inf}.
 *
 *   a (+) b = max(a, b)      identity: -inf
 *   a (.) b = a + b          identity: 0, absorbing: -inf
 *
 * Weights are doubles with a distinguished bottom element. NaN and +inf are
 * rejected wherever a Weight is built from a raw double.
 */

#include <charconv>
#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <string>

#include "maslov/error.hpp"

namespace maslov {

class Weight {
 public:
  constexpr Weight() = default;  // bottom

  /// Throws on NaN or +inf.
  explicit Weight(double v) : v_(v) {
    if (std::isnan(v)) throw Error("weight is NaN");
    if (v == std::numeric_limits<double>::infinity()) throw Error("weight is +inf");
  }

  static constexpr Weight bottom() { return Weight(); }
  static Weight zero() { return Weight(0.0); }

  constexpr double value() const { return v_; }
  constexpr bool is_bottom() const { return v_ == -std::numeric_limits<double>::infinity(); }
  constexpr bool is_finite() const { return !is_bottom(); }

  friend constexpr bool operator==(Weight a, Weight b) { return a.v_ == b.v_; }
  friend constexpr auto operator<=>(Weight a, Weight b) { return a.v_ <=> b.v_; }

 private:
  double v_ = -std::numeric_limits<double>::infinity();
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline Weight oplus(Weight a, Weight b) { return a < b ? b : a; }

inline Weight odot(Weight a, Weight b) {
  if (a.is_bottom() || b.is_bottom()) return Weight::bottom();
  return Weight(a.value() + b.value());
}

/// |e^a - e^b| with e^{-inf} = 0.
inline double weight_distance(Weight a, Weight b) {
  const double ea = a.is_bottom() ? 0.0 : std::exp(a.value());
  const double eb = b.is_bottom() ? 0.0 : std::exp(b.value());
  return std::fabs(ea - eb);
}

/// Sum of all weights in the max-plus sense, i.e. the maximum.
inline Weight oplus_all(std::span<const Weight> ws) {
  Weight acc;
  for (Weight w : ws) acc = oplus(acc, w);
  return acc;
}

inline std::string to_string(Weight w) {
  if (w.is_bottom()) return "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, w.value());
  return std::string(buf, res.ptr);
}

}  // namespace maslov
