#pragma once

// Independent brute-force routes used to check library results. None of these
// call the routine they are checking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "maslov/maslov.hpp"

namespace oracle {

using maslov::FiniteFunction;
using maslov::IdempotentMeasure;
using maslov::Space;
using maslov::Weight;

/// mu(phi) straight from the definition, max over finite atoms.
inline double functional(const IdempotentMeasure& mu, const std::vector<double>& phi) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i].is_finite()) best = std::max(best, mu[i].value() + phi[i]);
  return best;
}

/// Calls fn on every phi in values^n.
inline void for_each_phi(std::size_t n, const std::vector<double>& values,
                         const std::function<void(const std::vector<double>&)>& fn) {
  std::vector<std::size_t> pick(n, 0);
  std::vector<double> phi(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) phi[i] = values[pick[i]];
    fn(phi);
    std::size_t i = 0;
    while (i < n && ++pick[i] == values.size()) pick[i++] = 0;
    if (i == n) return;
  }
}

/// Test values fine enough to separate dyadic weight tables in [-4, 0] on small
/// spaces: an indicator-like phi at level -16 isolates each atom.
inline const std::vector<double>& probe_values() {
  static const std::vector<double> v{-16.0, -2.5, -1.0, 0.0, 0.75, 3.0};
  return v;
}

/// Whether two functionals agree on every probe phi.
inline bool same_functional(const std::function<double(const std::vector<double>&)>& a,
                            const std::function<double(const std::vector<double>&)>& b, std::size_t n) {
  bool ok = true;
  for_each_phi(n, probe_values(), [&](const std::vector<double>& phi) {
    if (a(phi) != b(phi)) ok = false;
  });
  return ok;
}

/// Shortest-path distances by enumerating every simple path.
inline std::vector<std::vector<double>> path_closure(const std::vector<std::vector<double>>& raw) {
  const std::size_t n = raw.size();
  std::vector<std::vector<double>> best(n, std::vector<double>(n, std::numeric_limits<double>::infinity()));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> used(n, false);
    std::function<void(std::size_t, double)> walk = [&](std::size_t at, double len) {
      best[s][at] = std::min(best[s][at], len);
      used[at] = true;
      for (std::size_t nx = 0; nx < n; ++nx)
        if (!used[nx]) walk(nx, len + raw[at][nx]);
      used[at] = false;
    };
    walk(s, 0.0);
  }
  return best;
}

/// Tensor product through the monad: zeta of the mixture y -> I(x -> (x, y))(mu)
/// weighted by nu.
inline IdempotentMeasure tensor_via_monad(const IdempotentMeasure& mu, const IdempotentMeasure& nu) {
  const Space xy = maslov::FiniteSpace::product({mu.space(), nu.space()});
  std::vector<IdempotentMeasure> items;
  std::vector<Weight> weights;
  for (std::size_t y = 0; y < nu.size(); ++y) {
    std::vector<std::size_t> table(mu.size());
    for (std::size_t x = 0; x < mu.size(); ++x) table[x] = *xy->find_tuple({x, y});
    items.push_back(maslov::pushforward(maslov::PointMap(mu.space(), xy, table), mu));
    weights.push_back(nu[y]);
  }
  return maslov::multiply(maslov::OuterMeasure(std::move(items), std::move(weights)));
}

/// Coupling gap by grid search: every cell ranges over {-inf} and multiples
/// of `step` in [lo, 0]; feasible couplings are scored against the {0,-1}
/// family. Returns +inf when no grid coupling is feasible.
inline double grid_gap(const IdempotentMeasure& target, const IdempotentMeasure& mu1, const IdempotentMeasure& mu2,
                       double step, double lo) {
  const std::size_t nr = mu1.size(), nc = mu2.size(), cells = nr * nc;
  std::vector<Weight> levels{Weight::bottom()};
  for (double v = lo; v <= 1e-12; v += step) levels.push_back(Weight(std::round(v / step) * step));
  std::vector<std::size_t> pick(cells, 0);
  std::vector<Weight> w(cells);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    for (std::size_t c = 0; c < cells; ++c) w[c] = levels[pick[c]];
    bool feasible = true;
    for (std::size_t r = 0; r < nr && feasible; ++r) {
      Weight m;
      for (std::size_t c = 0; c < nc; ++c) m = maslov::oplus(m, w[r * nc + c]);
      feasible = m == mu1[r];
    }
    for (std::size_t c = 0; c < nc && feasible; ++c) {
      Weight m;
      for (std::size_t r = 0; r < nr; ++r) m = maslov::oplus(m, w[r * nc + c]);
      feasible = m == mu2[c];
    }
    if (feasible) {
      const IdempotentMeasure nu(target.space(), w);
      double worst = 0.0;
      for_each_phi(cells, {0.0, -1.0}, [&](const std::vector<double>& phi) {
        worst = std::max(worst, std::fabs(functional(nu, phi) - functional(target, phi)));
      });
      best = std::min(best, worst);
    }
    std::size_t c = 0;
    while (c < cells && ++pick[c] == levels.size()) pick[c++] = 0;
    if (c == cells) break;
  }
  return best;
}

/// max over the {0,-1} family of |nu(phi) - target(phi)|.
inline double family_distance(const IdempotentMeasure& nu, const IdempotentMeasure& target) {
  double worst = 0.0;
  for_each_phi(nu.size(), {0.0, -1.0}, [&](const std::vector<double>& phi) {
    worst = std::max(worst, std::fabs(functional(nu, phi) - functional(target, phi)));
  });
  return worst;
}

/// Max-plus span membership by grid search over combination weights.
inline bool hull_grid(const std::vector<maslov::TropicalPoint>& gens, const maslov::TropicalPoint& x, double lo,
                      double hi, double step) {
  std::vector<Weight> levels{Weight::bottom()};
  for (double v = lo; v <= hi + 1e-12; v += step) levels.push_back(Weight(std::round(v / step) * step));
  std::vector<std::size_t> pick(gens.size(), 0);
  for (;;) {
    maslov::TropicalPoint combo(x.size());
    for (std::size_t g = 0; g < gens.size(); ++g)
      for (std::size_t k = 0; k < x.size(); ++k)
        combo[k] = maslov::oplus(combo[k], maslov::odot(levels[pick[g]], gens[g][k]));
    if (combo == x) return true;
    std::size_t g = 0;
    while (g < gens.size() && ++pick[g] == levels.size()) pick[g++] = 0;
    if (g == gens.size()) return false;
  }
}

}  // namespace oracle
