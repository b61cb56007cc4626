#pragma once

/**
 * @file openness.hpp
 * @brief Finite constructions around openness of the functor I:
 *        lifting along elementary collapses, the bicommutative square lift,
 *        couplings under max-marginal constraints, and a finite-depth
 *        Milyutin map builder.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
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

inline Weight min_weight(Weight a, Weight b) { return a < b ? a : b; }

// ---------------------------------------------------------------------------
// Elementary collapses

/// A surjection with exactly one two-point fiber {x0, x1} and singleton
/// fibers elsewhere.
class CollapseMap {
 public:
  explicit CollapseMap(PointMap f) : map_(std::move(f)) {
    if (!map_.is_surjective()) throw Error("collapse map must be onto");
    std::vector<std::vector<std::size_t>> fibers(map_.target()->size());
    for (std::size_t x = 0; x < map_.source()->size(); ++x) fibers[map_(x)].push_back(x);
    std::size_t doubled = 0;
    for (std::size_t y = 0; y < fibers.size(); ++y) {
      if (fibers[y].size() == 2) {
        ++doubled;
        first_ = fibers[y][0];
        second_ = fibers[y][1];
        merged_ = y;
      } else if (fibers[y].size() != 1) {
        throw Error("collapse map fibers must be singletons except one pair");
      }
    }
    if (doubled != 1) throw Error("collapse map must have exactly one two-point fiber");
  }

  const PointMap& map() const { return map_; }
  std::size_t first() const { return first_; }    ///< lower index of the doubled fiber
  std::size_t second() const { return second_; }  ///< higher index of the doubled fiber
  std::size_t merged() const { return merged_; }  ///< their common image

 private:
  PointMap map_;
  std::size_t first_ = 0, second_ = 0, merged_ = 0;
};

namespace detail {

/// Picks (dominant, subordinate) of the doubled fiber: the dominant point has
/// the larger weight under `w`. Ties go to `preferred` if given, else to the
/// lower index.
inline std::pair<std::size_t, std::size_t> order_fiber(const CollapseMap& f, std::span<const Weight> w,
                                                       std::optional<std::size_t> preferred) {
  const std::size_t a = f.first(), b = f.second();
  if (preferred) {
    if (*preferred != a && *preferred != b) throw Error("preferred point is not in the doubled fiber");
    const std::size_t other = *preferred == a ? b : a;
    if (w[*preferred] < w[other]) throw Error("preferred point must carry the larger weight");
    return {*preferred, other};
  }
  return w[a] >= w[b] ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace detail

/// Lifts a sequence nu_k on Y along a collapse f: X -> Y through mu0.
/// With (a, b) the doubled fiber ordered so that mu0(a) >= mu0(b):
///   mu_k(a) = nu_k(f(a)),  mu_k(b) = min(nu_k(f(a)), mu0(b)),
///   mu_k(x) = nu_k(f(x)) elsewhere.
/// Then I(f)(mu_k) = nu_k exactly, and mu_k -> mu0 whenever nu_k -> I(f)(mu0).
/// If `limit` is given it must equal I(f)(mu0).
inline std::vector<IdempotentMeasure> lift_open_collapse(const CollapseMap& f, const IdempotentMeasure& mu0,
                                                         const std::vector<IdempotentMeasure>& nu_seq,
                                                         const std::optional<IdempotentMeasure>& limit = std::nullopt,
                                                         std::optional<std::size_t> dominant = std::nullopt) {
  require_same_space(f.map().source(), mu0.space(), "lift_open_collapse");
  if (limit && !(pushforward(f.map(), mu0) == *limit))
    throw Infeasible("lift_open_collapse: sequence limit differs from the image of mu0");
  const auto [a, b] = detail::order_fiber(f, mu0.weights(), dominant);
  std::vector<IdempotentMeasure> out;
  out.reserve(nu_seq.size());
  for (const auto& nu : nu_seq) {
    require_same_space(f.map().target(), nu.space(), "lift_open_collapse");
    std::vector<Weight> w(mu0.size());
    for (std::size_t x = 0; x < w.size(); ++x) w[x] = nu[f.map()(x)];
    w[b] = min_weight(nu[f.merged()], mu0[b]);
    IdempotentMeasure mu(mu0.space(), std::move(w));
    if (!(pushforward(f.map(), mu) == nu)) throw std::logic_error("lift_open_collapse: lift does not push to nu");
    out.push_back(std::move(mu));
  }
  return out;
}

/// Lifts nu on C_j x C_j to nu' on C_i x C_i for a collapse f: C_i -> C_j,
/// given mu on C_i with I(f)(mu) equal to the first marginal of nu.
/// With (a, b) the doubled fiber ordered so that mu(a) >= mu(b):
///   nu'(m, n) = nu(f(m), f(n))                 for m != b,
///   nu'(b, n) = min(mu(b), nu(f(b), f(n))).
/// The result has first marginal mu and pushes to nu under f x f; both are
/// checked before returning.
inline IdempotentMeasure bicommutative_lift(const CollapseMap& f, const IdempotentMeasure& mu,
                                            const IdempotentMeasure& nu) {
  const Space& ci = f.map().source();
  const Space& cj = f.map().target();
  require_same_space(ci, mu.space(), "bicommutative_lift");
  const Space& pj = nu.space();
  if (!pj->is_full_product() || pj->arity() != 2 || !same_space(pj->factor(0), cj) || !same_space(pj->factor(1), cj))
    throw Error("bicommutative_lift: nu must live on the product of the collapse target with itself");
  if (!(pushforward(f.map(), mu) == marginal(nu, 0)))
    throw Infeasible("bicommutative_lift: I(f)(mu) differs from the first marginal of nu");

  const auto [a, b] = detail::order_fiber(f, mu.weights(), std::nullopt);
  (void)a;
  const Space pi = FiniteSpace::product({ci, ci});
  std::vector<Weight> w(pi->size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Tuple& t = pi->tuple(i);
    const Weight cell = nu[*pj->find_tuple({f.map()(t[0]), f.map()(t[1])})];
    w[i] = t[0] == b ? min_weight(mu[b], cell) : cell;
  }
  IdempotentMeasure lifted(pi, std::move(w));
  if (!(marginal(lifted, 0) == mu) || !(pushforward(product_map(f.map(), f.map()), lifted) == nu))
    throw std::logic_error("bicommutative_lift: characteristic-map identities fail");
  return lifted;
}

/// Splits a finite surjection into elementary collapses followed by a
/// bijection: f = last o c_k o ... o c_1.
struct CollapseFactorization {
  std::vector<CollapseMap> collapses;
  PointMap last;
};

inline CollapseFactorization factor_into_collapses(const PointMap& f) {
  if (!f.is_surjective()) throw Error("factor_into_collapses: map is not onto");
  std::vector<CollapseMap> steps;
  Space cur = f.source();
  std::vector<std::size_t> image = f.table();  // current point -> target point
  for (;;) {
    std::size_t keep = 0, drop = 0;
    bool found = false;
    for (std::size_t i = 0; i < image.size() && !found; ++i)
      for (std::size_t j = i + 1; j < image.size() && !found; ++j)
        if (image[i] == image[j]) {
          keep = i;
          drop = j;
          found = true;
        }
    if (!found) break;
    std::vector<std::string> labels;
    std::vector<std::size_t> next_image, table(cur->size());
    for (std::size_t i = 0, k = 0; i < cur->size(); ++i) {
      if (i == drop) continue;
      labels.push_back(cur->label(i));
      next_image.push_back(image[i]);
      table[i] = k++;
    }
    table[drop] = table[keep];
    Space next = FiniteSpace::make(cur->name() + "/" + std::to_string(steps.size() + 1), std::move(labels));
    steps.emplace_back(PointMap(cur, next, std::move(table)));
    cur = next;
    image = std::move(next_image);
  }
  return {std::move(steps), PointMap(cur, f.target(), std::move(image))};
}

/// Lifts nu_seq along an arbitrary finite surjection by composing the
/// per-collapse lifts through the images of mu0.
inline std::vector<IdempotentMeasure> lift_open_surjection(const PointMap& f, const IdempotentMeasure& mu0,
                                                           const std::vector<IdempotentMeasure>& nu_seq) {
  require_same_space(f.source(), mu0.space(), "lift_open_surjection");
  const CollapseFactorization fac = factor_into_collapses(f);
  // mu0 pushed to every intermediate space.
  std::vector<IdempotentMeasure> base{mu0};
  for (const auto& c : fac.collapses) base.push_back(pushforward(c.map(), base.back()));
  // Through the final bijection: pull back by relabeling.
  std::vector<IdempotentMeasure> seq;
  for (const auto& nu : nu_seq) {
    require_same_space(f.target(), nu.space(), "lift_open_surjection");
    std::vector<Weight> w(fac.last.source()->size());
    for (std::size_t x = 0; x < w.size(); ++x) w[x] = nu[fac.last(x)];
    seq.emplace_back(fac.last.source(), std::move(w));
  }
  for (std::size_t k = fac.collapses.size(); k-- > 0;) seq = lift_open_collapse(fac.collapses[k], base[k], seq);
  return seq;
}

// ---------------------------------------------------------------------------
// Couplings with prescribed max-marginals

/// Weights on rows x cols, row-major.
struct Coupling {
  Space rows;
  Space cols;
  std::vector<Weight> cells;

  Weight operator()(std::size_t r, std::size_t c) const { return cells[r * cols->size() + c]; }
};

inline IdempotentMeasure to_measure(const Coupling& c) {
  return IdempotentMeasure(FiniteSpace::product({c.rows, c.cols}), c.cells);
}

inline Coupling to_coupling(const IdempotentMeasure& mu) {
  const Space& s = mu.space();
  if (!s->is_full_product() || s->arity() != 2) throw Error("measure does not live on a two-factor product");
  return Coupling{s->factor(0), s->factor(1), std::vector<Weight>(mu.weights().begin(), mu.weights().end())};
}

/// Row maxima equal mu1 and column maxima equal mu2, exactly.
inline bool coupling_feasible(const Coupling& c, const IdempotentMeasure& mu1, const IdempotentMeasure& mu2) {
  if (c.cells.size() != c.rows->size() * c.cols->size()) throw Error("coupling table has the wrong shape");
  if (!same_space(c.rows, mu1.space()) || !same_space(c.cols, mu2.space()))
    throw Error("coupling_feasible: shape mismatch with the marginals");
  for (std::size_t r = 0; r < c.rows->size(); ++r) {
    Weight m;
    for (std::size_t k = 0; k < c.cols->size(); ++k) m = oplus(m, c(r, k));
    if (m != mu1[r]) return false;
  }
  for (std::size_t k = 0; k < c.cols->size(); ++k) {
    Weight m;
    for (std::size_t r = 0; r < c.rows->size(); ++r) m = oplus(m, c(r, k));
    if (m != mu2[k]) return false;
  }
  return true;
}

/// The largest feasible coupling, min(mu1(x), mu2(y)).
inline Coupling maximal_coupling(const IdempotentMeasure& mu1, const IdempotentMeasure& mu2) {
  Coupling c{mu1.space(), mu2.space(), {}};
  for (std::size_t r = 0; r < mu1.size(); ++r)
    for (std::size_t k = 0; k < mu2.size(); ++k) c.cells.push_back(min_weight(mu1[r], mu2[k]));
  return c;
}

/// One face of the feasible set: the cells forced to their upper bound
/// min(mu1(r), mu2(c)); every other cell ranges over [-inf, bound].
struct TightBox {
  std::uint32_t forced = 0;  ///< bit r * cols + c
  bool is_forced(std::size_t cell) const { return (forced >> cell) & 1u; }
};

struct TightEnumeration {
  std::uint64_t patterns = 0;   ///< tight patterns (row and column argmax choices)
  std::vector<TightBox> boxes;  ///< distinct boxes that are maximal under inclusion
};

inline constexpr std::size_t kMaxCouplingSide = 4;

/// Enumerates tight patterns: every finite row picks a cell attaining its
/// maximum, every finite column likewise. A pattern forces its picked cells;
/// a box with fewer forced cells contains one with more, so only boxes whose
/// forced set is minimal are kept.
inline TightEnumeration enumerate_tight_patterns(const IdempotentMeasure& mu1, const IdempotentMeasure& mu2) {
  const std::size_t nr = mu1.size(), nc = mu2.size();
  if (nr > kMaxCouplingSide || nc > kMaxCouplingSide)
    throw Error("coupling enumeration is capped at 4x4 marginals");
  if (oplus_all(mu1.weights()) != oplus_all(mu2.weights()))
    throw Infeasible("no coupling: marginals have different maxima");

  // choices[slot] lists admissible cells for each finite row, then each finite column.
  std::vector<std::vector<std::size_t>> choices;
  for (std::size_t r = 0; r < nr; ++r) {
    if (mu1[r].is_bottom()) continue;
    std::vector<std::size_t> opts;
    for (std::size_t c = 0; c < nc; ++c)
      if (mu2[c] >= mu1[r]) opts.push_back(r * nc + c);
    if (opts.empty()) throw Infeasible("no coupling: a row maximum exceeds every column maximum");
    choices.push_back(std::move(opts));
  }
  for (std::size_t c = 0; c < nc; ++c) {
    if (mu2[c].is_bottom()) continue;
    std::vector<std::size_t> opts;
    for (std::size_t r = 0; r < nr; ++r)
      if (mu1[r] >= mu2[c]) opts.push_back(r * nc + c);
    if (opts.empty()) throw Infeasible("no coupling: a column maximum exceeds every row maximum");
    choices.push_back(std::move(opts));
  }

  TightEnumeration out;
  std::set<std::uint32_t> masks;
  std::vector<std::size_t> pick(choices.size(), 0);
  for (;;) {
    std::uint32_t m = 0;
    for (std::size_t s = 0; s < choices.size(); ++s) m |= 1u << choices[s][pick[s]];
    masks.insert(m);
    ++out.patterns;
    std::size_t s = 0;
    while (s < choices.size() && ++pick[s] == choices[s].size()) pick[s++] = 0;
    if (s == choices.size()) break;
  }
  for (std::uint32_t m : masks) {
    const bool dominated = std::any_of(masks.begin(), masks.end(),
                                       [m](std::uint32_t o) { return o != m && (o & m) == o; });
    if (!dominated) out.boxes.push_back(TightBox{m});
  }
  return out;
}

struct GapOptions {
  std::size_t max_cells = 12;  ///< test family has 2^cells members
};

struct GapResult {
  double gap = 0.0;
  IdempotentMeasure coupling;  ///< a feasible coupling attaining the gap
  FiniteFunction witness;      ///< a {0,-1}-valued function attaining it
};

/// min over feasible couplings nu of max over phi in {0,-1}^{X x Y} of
/// |nu(phi) - target(phi)|.
///
/// Per box the optimum is exact: for a trial value t every free cell is
/// pushed to its largest admissible value min(bound_c, L_c + t), where
/// L_c = min_phi (target(phi) - phi_c); this satisfies every upper constraint
/// and is the best choice for every lower one. Feasibility is monotone in t
/// and changes only at finitely many breakpoints, which are searched.
inline GapResult coupling_gap(const IdempotentMeasure& target, const IdempotentMeasure& mu1,
                              const IdempotentMeasure& mu2, const GapOptions& opt = {}) {
  const Space& ps = target.space();
  if (!ps->is_full_product() || ps->arity() != 2 || !same_space(ps->factor(0), mu1.space()) ||
      !same_space(ps->factor(1), mu2.space()))
    throw Error("coupling_gap: target must live on the product of the marginal spaces");
  const std::size_t cells = ps->size();
  if (cells > opt.max_cells) throw Error("coupling_gap: product too large for the {0,-1} test family");
  const TightEnumeration en = enumerate_tight_patterns(mu1, mu2);
  const std::size_t nc = mu2.size();
  const std::size_t family = std::size_t{1} << cells;
  const auto phi_at = [](std::size_t mask, std::size_t c) { return (mask >> c) & 1u ? -1.0 : 0.0; };

  std::vector<double> m(family);
  for (std::size_t f = 0; f < family; ++f) {
    double best = kNegInf;
    for (std::size_t c = 0; c < cells; ++c)
      if (target[c].is_finite()) best = std::max(best, target[c].value() + phi_at(f, c));
    m[f] = best;
  }
  std::vector<Weight> ub(cells);
  for (std::size_t c = 0; c < cells; ++c) ub[c] = min_weight(mu1[c / nc], mu2[c % nc]);
  std::vector<double> lc(cells, std::numeric_limits<double>::infinity());
  for (std::size_t f = 0; f < family; ++f)
    for (std::size_t c = 0; c < cells; ++c) lc[c] = std::min(lc[c], m[f] - phi_at(f, c));

  const auto tol = [](double a, double b) { return 1e-12 * (1.0 + std::fabs(a) + std::fabs(b)); };

  std::optional<double> best_t;
  std::vector<Weight> best_cells;
  for (const TightBox& box : en.boxes) {
    std::vector<std::size_t> freec;
    std::vector<double> a(family, kNegInf);
    for (std::size_t c = 0; c < cells; ++c) {
      if (ub[c].is_bottom()) continue;
      if (box.is_forced(c)) {
        for (std::size_t f = 0; f < family; ++f) a[f] = std::max(a[f], ub[c].value() + phi_at(f, c));
      } else {
        freec.push_back(c);
      }
    }
    const auto value_at = [&](double t, std::size_t c) { return std::min(ub[c].value(), lc[c] + t); };
    const auto feasible = [&](double t) {
      for (std::size_t f = 0; f < family; ++f) {
        if (a[f] - m[f] > t + tol(a[f], m[f])) return false;
        double nu = a[f];
        for (std::size_t c : freec) nu = std::max(nu, value_at(t, c) + phi_at(f, c));
        if (m[f] - t > nu + tol(m[f], nu)) return false;
      }
      return true;
    };
    std::vector<double> cand{0.0};
    for (std::size_t f = 0; f < family; ++f) {
      cand.push_back(a[f] - m[f]);
      cand.push_back(m[f] - a[f]);
      for (std::size_t c : freec) {
        cand.push_back(m[f] - ub[c].value() - phi_at(f, c));
        cand.push_back((m[f] - lc[c] - phi_at(f, c)) / 2.0);
      }
    }
    std::erase_if(cand, [](double t) { return !std::isfinite(t) || t < 0.0; });
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    // Smallest feasible candidate; the largest one is always feasible.
    std::size_t lo = 0, hi = cand.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (feasible(cand[mid])) hi = mid;
      else lo = mid + 1;
    }
    const double t = cand[lo];
    if (!best_t || t < *best_t) {
      best_t = t;
      best_cells.assign(cells, Weight::bottom());
      for (std::size_t c = 0; c < cells; ++c) {
        if (ub[c].is_bottom()) continue;
        best_cells[c] = box.is_forced(c) ? ub[c] : Weight(value_at(t, c));
      }
    }
  }

  IdempotentMeasure nu(ps, best_cells);
  if (!coupling_feasible(to_coupling(nu), mu1, mu2)) throw std::logic_error("coupling_gap: optimum is infeasible");
  std::size_t arg = 0;
  double worst = -1.0;
  for (std::size_t f = 0; f < family; ++f) {
    double v = kNegInf;
    for (std::size_t c = 0; c < cells; ++c)
      if (nu[c].is_finite()) v = std::max(v, nu[c].value() + phi_at(f, c));
    if (std::fabs(v - m[f]) > worst) {
      worst = std::fabs(v - m[f]);
      arg = f;
    }
  }
  std::vector<double> phi(cells);
  for (std::size_t c = 0; c < cells; ++c) phi[c] = phi_at(arg, c);
  return GapResult{*best_t, std::move(nu), FiniteFunction(ps, std::move(phi))};
}

/// The two-point example: target 0.(x1,y1) (+) 0.(x2,y2) against the
/// marginals (-1/l).x1 (+) 0.x2 and 0.y1 (+) (-1/l).y2.
struct CounterexampleInstance {
  IdempotentMeasure target;
  IdempotentMeasure mu1;
  IdempotentMeasure mu2;
};

inline CounterexampleInstance counterexample_instance(int l) {
  if (l < 1) throw Error("counterexample: l must be a positive integer");
  const Space x = FiniteSpace::make("X", {"x1", "x2"});
  const Space y = FiniteSpace::make("Y", {"y1", "y2"});
  const Space xy = FiniteSpace::product({x, y});
  const Weight e(-1.0 / l);
  return {IdempotentMeasure(xy, {Weight::zero(), Weight::bottom(), Weight::bottom(), Weight::zero()}),
          IdempotentMeasure(x, {e, Weight::zero()}), IdempotentMeasure(y, {Weight::zero(), e})};
}

inline GapResult counterexample_gap(int l) {
  const auto inst = counterexample_instance(l);
  return coupling_gap(inst.target, inst.mu1, inst.mu2);
}

// ---------------------------------------------------------------------------
// Milyutin maps at finite depth

/// A pair U subset V of Y with a weight function alpha on V: alpha = 0 on U,
/// alpha <= 0 everywhere. alpha is stored densely over Y; entries outside V
/// are ignored.
struct CoverPair {
  std::vector<std::size_t> u;
  std::vector<std::size_t> v;
  std::vector<Weight> alpha;
};

struct MilyutinLevel {
  std::vector<CoverPair> pairs;
};

struct MilyutinMap {
  std::vector<Space> levels;                ///< X_i, disjoint unions of the V's
  Space domain;                             ///< X, the fiber product of the X_i over Y
  PointMap projection;                      ///< f: X -> Y
  std::vector<IdempotentMeasure> selection;  ///< s(y) for every y in Y, in canonical order
};

namespace detail {

inline void check_level(const Space& y, const MilyutinLevel& level, std::size_t index) {
  const std::string where = "milyutin level " + std::to_string(index + 1) + ": ";
  if (level.pairs.empty()) throw Error(where + "no cover pairs");
  std::vector<bool> covered(y->size(), false);
  for (const auto& p : level.pairs) {
    if (p.u.empty()) throw Error(where + "U must be nonempty");
    if (p.alpha.size() != y->size()) throw Error(where + "alpha table size does not match Y");
    std::vector<bool> inv(y->size(), false);
    for (std::size_t v : p.v) {
      if (v >= y->size()) throw Error(where + "V member outside Y");
      inv[v] = true;
      if (p.alpha[v] > Weight::zero()) throw Error(where + "alpha must be <= 0");
    }
    for (std::size_t u : p.u) {
      if (u >= y->size() || !inv[u]) throw Error(where + "U must be a subset of V");
      if (p.alpha[u] != Weight::zero()) throw Error(where + "alpha must vanish on U");
      covered[u] = true;
    }
  }
  if (!std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }))
    throw Error(where + "the U-sets do not cover Y");
}

}  // namespace detail

/// Builds X, f and s from the first `depth` levels:
///   X_i = disjoint union of the V's (point "y@copyK" for y in the K-th V),
///   X   = { (x_1..x_depth) : f_i(x_i) all equal },  f = common projection,
///   s(y) = tensor over i of (+){ alpha_i(x) (.) delta_x : x in f_i^-1(y) },
/// so that I(f)(s(y)) = delta_y and supp s(y) lies in f^-1(y).
/// At depth 1, X is X_1 itself rather than a one-factor product.
inline MilyutinMap milyutin_build(const Space& y, const std::vector<MilyutinLevel>& levels, std::size_t depth) {
  if (depth == 0) throw Error("milyutin depth must be positive");
  if (levels.size() < depth) throw Error("fewer cover levels than the requested depth");
  for (std::size_t i = 0; i < depth; ++i) detail::check_level(y, levels[i], i);

  MilyutinMap out{{}, nullptr, PointMap::identity(y), {}};
  std::vector<std::vector<std::size_t>> level_map;  // f_i tables
  std::vector<std::vector<Weight>> level_alpha;
  for (std::size_t i = 0; i < depth; ++i) {
    std::vector<std::string> labels;
    std::vector<std::size_t> fi;
    std::vector<Weight> ai;
    for (std::size_t k = 0; k < levels[i].pairs.size(); ++k) {
      const CoverPair& p = levels[i].pairs[k];
      std::vector<std::size_t> v = p.v;
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      for (std::size_t pt : v) {
        labels.push_back(y->label(pt) + "@copy" + std::to_string(k + 1));
        fi.push_back(pt);
        ai.push_back(p.alpha[pt]);
      }
    }
    out.levels.push_back(FiniteSpace::make(y->name() + "_" + std::to_string(i + 1), std::move(labels)));
    level_map.push_back(std::move(fi));
    level_alpha.push_back(std::move(ai));
  }

  // Per-level fibers over each y.
  const auto fiber = [&](std::size_t i, std::size_t pt) {
    std::vector<std::size_t> f;
    for (std::size_t x = 0; x < level_map[i].size(); ++x)
      if (level_map[i][x] == pt) f.push_back(x);
    return f;
  };

  std::vector<std::size_t> proj;
  if (depth == 1) {
    out.domain = out.levels[0];
    proj = level_map[0];
  } else {
    std::vector<Tuple> tuples;
    for (std::size_t pt = 0; pt < y->size(); ++pt) {
      std::vector<std::vector<std::size_t>> fibers;
      for (std::size_t i = 0; i < depth; ++i) fibers.push_back(fiber(i, pt));
      std::vector<std::size_t> pick(depth, 0);
      for (;;) {
        Tuple t(depth);
        for (std::size_t i = 0; i < depth; ++i) t[i] = fibers[i][pick[i]];
        tuples.push_back(std::move(t));
        proj.push_back(pt);
        std::size_t i = depth;
        while (i-- > 0) {
          if (++pick[i] < fibers[i].size()) break;
          pick[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) break;
      }
    }
    out.domain = FiniteSpace::subproduct(out.levels, std::move(tuples), y->name() + "~");
  }
  out.projection = PointMap(out.domain, y, proj);

  for (std::size_t pt = 0; pt < y->size(); ++pt) {
    std::vector<IdempotentMeasure> per_level;
    for (std::size_t i = 0; i < depth; ++i) {
      const auto f = fiber(i, pt);
      if (f.empty()) throw Error("milyutin: empty fiber over '" + y->label(pt) + "'");
      std::vector<Weight> w(out.levels[i]->size());
      for (std::size_t x : f) w[x] = level_alpha[i][x];
      per_level.emplace_back(out.levels[i], std::move(w));
    }
    if (depth == 1) {
      out.selection.push_back(std::move(per_level.front()));
      continue;
    }
    const IdempotentMeasure full = tensor_many(per_level);
    std::vector<Weight> w(out.domain->size());
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (full[i].is_bottom()) continue;
      const auto at = out.domain->find_tuple(full.space()->tuple(i));
      if (!at) throw std::logic_error("milyutin: selection escapes the fiber product");
      w[*at] = full[i];
    }
    out.selection.emplace_back(out.domain, std::move(w));
  }
  return out;
}

}  // namespace maslov
