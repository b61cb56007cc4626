#pragma once

/**
 * @file metrics.hpp
 * @brief The Lipschitz-dual pseudometrics on idempotent measures.
 *
 *   dhat_n(mu, nu) = sup { |mu(phi) - nu(phi)| : phi n-Lipschitz }
 *   dtilde_n       = dhat_n / n
 *
 * Closed form, over supports only:
 *
 *   dhat_n = max( D(mu||nu), D(nu||mu) ),
 *   D(mu||nu) = max_{i in supp mu} min_{j in supp nu} ( l_i - k_j + n d_ij ).
 *
 * Upper bound: l_i + phi_i - max_j (k_j + phi_j) <= l_i - k_j + n d_ij for
 * every j. Attained by the cone phi = -n d(x_i*, .), which is n-Lipschitz
 * because d is a (pseudo)metric. dhat_oracle checks this numerically by a
 * grid search over Lipschitz value vectors.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "maslov/error.hpp"
#include "maslov/measure.hpp"
#include "maslov/metric_space.hpp"
#include "maslov/monad.hpp"
#include "maslov/weight.hpp"

namespace maslov {

class LipschitzClass {
 public:
  explicit LipschitzClass(int n) : n_(n) {
    if (n < 1) throw Error("Lipschitz bound must be a positive integer");
  }
  int n() const { return n_; }

 private:
  int n_;
};

namespace detail {

/// max_i min_j ( (a_i - b_j) / divisor + scale * d_ij ) over finite weights.
inline double directed_gap(std::span<const Weight> a, std::span<const Weight> b, const DistanceTable& d,
                           double scale, double divisor) {
  double outer = kNegInf;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_bottom()) continue;
    double inner = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_bottom()) continue;
      const double diff = divisor == 1.0 ? a[i].value() - b[j].value() : (a[i].value() - b[j].value()) / divisor;
      inner = std::min(inner, diff + scale * d(i, j));
    }
    outer = std::max(outer, inner);
  }
  return outer;
}

inline void check_table_pair(std::span<const Weight> a, std::span<const Weight> b, const DistanceTable& d) {
  if (a.size() != d.size() || b.size() != d.size()) throw Error("measure size does not match the distance table");
}

}  // namespace detail

/// dhat_n on raw weight tables over a (pseudo)metric table.
inline double dhat(LipschitzClass n, const DistanceTable& d, std::span<const Weight> mu,
                   std::span<const Weight> nu) {
  detail::check_table_pair(mu, nu, d);
  const double s = n.n();
  return std::max(detail::directed_gap(mu, nu, d, s, 1.0), detail::directed_gap(nu, mu, d, s, 1.0));
}

/// dtilde_n = dhat_n / n, evaluated as max_i min_j ((l_i - k_j)/n + d_ij) so
/// that Dirac pairs give d(x, y) with no rounding.
inline double dtilde(LipschitzClass n, const DistanceTable& d, std::span<const Weight> mu,
                     std::span<const Weight> nu) {
  detail::check_table_pair(mu, nu, d);
  const double q = n.n();
  return std::max(detail::directed_gap(mu, nu, d, 1.0, q), detail::directed_gap(nu, mu, d, 1.0, q));
}

inline double dhat(LipschitzClass n, const MetricSpace& x, const IdempotentMeasure& mu, const IdempotentMeasure& nu) {
  require_same_space(x.space(), mu.space(), "dhat");
  require_same_space(x.space(), nu.space(), "dhat");
  return dhat(n, x.dist(), mu.weights(), nu.weights());
}

inline double dtilde(LipschitzClass n, const MetricSpace& x, const IdempotentMeasure& mu,
                     const IdempotentMeasure& nu) {
  require_same_space(x.space(), mu.space(), "dtilde");
  require_same_space(x.space(), nu.space(), "dtilde");
  return dtilde(n, x.dist(), mu.weights(), nu.weights());
}

struct OracleOptions {
  double step = 0.01;
  double radius = 0.0;                   ///< <= 0 selects n * diameter + |min finite weight|
  std::uint64_t max_nodes = 200'000'000;  ///< search-tree node cap
};

/// Brute-force dhat_n: maximizes |mu(phi) - nu(phi)| over value vectors on a
/// grid of spacing `step` in [-radius, radius] satisfying
/// |phi(x) - phi(y)| <= n d(x, y), with phi pinned to 0 at the first point.
/// Lipschitz bounds are rounded down to whole grid steps.
inline double dhat_oracle(LipschitzClass n, const DistanceTable& d, std::span<const Weight> mu,
                          std::span<const Weight> nu, const OracleOptions& opt = {}) {
  detail::check_table_pair(mu, nu, d);
  if (!(opt.step > 0.0)) throw Error("oracle step must be positive");
  const std::size_t m = d.size();
  double radius = opt.radius;
  if (radius <= 0.0) {
    double lo = 0.0;
    for (auto tab : {mu, nu})
      for (Weight w : tab)
        if (w.is_finite()) lo = std::min(lo, w.value());
    radius = n.n() * d.diameter() + std::fabs(lo);
  }
  const auto units = [&](double v) { return static_cast<std::int64_t>(std::floor(v / opt.step + 1e-9)); };
  const std::int64_t r = units(radius);
  std::vector<std::int64_t> lip(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) lip[i * m + j] = units(n.n() * d(i, j));

  std::vector<std::int64_t> phi(m, 0);
  std::uint64_t nodes = 0;
  double best = 0.0;
  const auto leaf = [&] {
    double a = kNegInf, b = kNegInf;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = static_cast<double>(phi[i]) * opt.step;
      if (mu[i].is_finite()) a = std::max(a, v + mu[i].value());
      if (nu[i].is_finite()) b = std::max(b, v + nu[i].value());
    }
    best = std::max(best, std::fabs(a - b));
  };
  const auto rec = [&](auto&& self, std::size_t k) -> void {
    if (++nodes > opt.max_nodes) throw Error("oracle grid too large; raise max_nodes or the step");
    if (k == m) {
      leaf();
      return;
    }
    std::int64_t lo = -r, hi = r;
    for (std::size_t j = 0; j < k; ++j) {
      lo = std::max(lo, phi[j] - lip[j * m + k]);
      hi = std::min(hi, phi[j] + lip[j * m + k]);
    }
    for (std::int64_t v = lo; v <= hi; ++v) {
      phi[k] = v;
      self(self, k + 1);
    }
  };
  if (m == 0) return 0.0;
  phi[0] = 0;
  rec(rec, 1);
  return best;
}

inline double dhat_oracle(LipschitzClass n, const MetricSpace& x, const IdempotentMeasure& mu,
                          const IdempotentMeasure& nu, const OracleOptions& opt = {}) {
  require_same_space(x.space(), mu.space(), "dhat_oracle");
  require_same_space(x.space(), nu.space(), "dhat_oracle");
  return dhat_oracle(n, x.dist(), mu.weights(), nu.weights(), opt);
}

/// Ground pseudometric for the second level: dtilde_n between the inner
/// measures of M followed by those of N.
inline DistanceTable outer_ground(LipschitzClass n, const DistanceTable& d, const OuterMeasure& m,
                                  const OuterMeasure& nn) {
  std::vector<const IdempotentMeasure*> items;
  for (const auto& it : m.items()) items.push_back(&it);
  for (const auto& it : nn.items()) items.push_back(&it);
  DistanceTable g(items.size());
  for (std::size_t a = 0; a < items.size(); ++a)
    for (std::size_t b = a + 1; b < items.size(); ++b)
      g(a, b) = g(b, a) = dtilde(n, d, items[a]->weights(), items[b]->weights());
  return g;
}

/// Embeds the weights of M and N into the joint item list of outer_ground.
inline std::pair<std::vector<Weight>, std::vector<Weight>> outer_tables(const OuterMeasure& m,
                                                                        const OuterMeasure& nn) {
  std::vector<Weight> a(m.weights().begin(), m.weights().end());
  std::vector<Weight> b(m.size());
  a.resize(m.size() + nn.size());
  b.insert(b.end(), nn.weights().begin(), nn.weights().end());
  return {std::move(a), std::move(b)};
}

/// The iterated pseudometric dtilde_nn on I^2(X): dtilde_n over the inner
/// measures, with dtilde_n itself as the ground pseudometric.
inline double dtilde_outer(LipschitzClass n, const MetricSpace& x, const OuterMeasure& m, const OuterMeasure& nn) {
  require_same_space(x.space(), m.base(), "dtilde_outer");
  require_same_space(x.space(), nn.base(), "dtilde_outer");
  const DistanceTable g = outer_ground(n, x.dist(), m, nn);
  const auto [a, b] = outer_tables(m, nn);
  return dtilde(n, g, a, b);
}

}  // namespace maslov
