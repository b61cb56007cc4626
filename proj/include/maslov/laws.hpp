#pragma once

/**
 * @file laws.hpp
 * @brief Seeded law-checking harness.
 *
 * Every case draws its instance from its own stream (seed, group, index), so
 * results do not depend on the order in which cases run. Laws are compared
 * with exact equality except where a tolerance is stated.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "maslov/convexity.hpp"
#include "maslov/functor.hpp"
#include "maslov/measure.hpp"
#include "maslov/metrics.hpp"
#include "maslov/monad.hpp"
#include "maslov/random.hpp"

namespace maslov {

inline std::string describe(const IdempotentMeasure& mu) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < mu.size(); ++i) os << (i ? ", " : "") << mu.space()->label(i) << ":" << to_string(mu[i]);
  os << "}";
  return os.str();
}

struct LawSettings {
  std::uint64_t seed = 42;
  std::size_t cases = 200;
  std::size_t max_points = 5;
};

struct LawResult {
  std::string group;
  std::string law;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string counterexample;  ///< first failing case, empty if none
};

struct LawReport {
  std::vector<LawResult> results;

  bool ok() const {
    for (const auto& r : results)
      if (r.failures) return false;
    return true;
  }
  bool group_ok(const std::string& g) const {
    for (const auto& r : results)
      if (r.group == g && r.failures) return false;
    return true;
  }
};

namespace detail {

/// A case returns std::nullopt on success or a description of the violation.
using LawCase = std::function<std::optional<std::string>(InstanceGenerator&)>;

inline LawResult run_law(const LawSettings& s, std::uint64_t group_id, const std::string& group,
                         const std::string& law, std::size_t cases, const LawCase& body) {
  LawResult r{group, law, cases, 0, {}};
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a, stable across platforms
  for (unsigned char ch : law) h = (h ^ ch) * 1099511628211ull;
  const std::uint64_t law_id = group_id * 1000 + h % 1000;
  for (std::size_t i = 0; i < cases; ++i) {
    auto gen = InstanceGenerator::for_case(s.seed, law_id, i);
    if (auto bad = body(gen)) {
      if (!r.failures) r.counterexample = "case " + std::to_string(i) + ": " + *bad;
      ++r.failures;
    }
  }
  return r;
}

inline std::optional<std::string> expect_equal(const IdempotentMeasure& a, const IdempotentMeasure& b,
                                               const char* what) {
  if (a == b) return std::nullopt;
  return std::string(what) + ": " + describe(a) + " != " + describe(b);
}

}  // namespace detail

/// Unit laws and associativity of (I, eta, zeta), plus the defining identity
/// zeta(M)(phi) = M(phi-bar).
inline std::vector<LawResult> check_monad_laws(const LawSettings& s) {
  using detail::expect_equal;
  std::vector<LawResult> out;
  const auto law = [&](const std::string& name, const detail::LawCase& body) {
    out.push_back(detail::run_law(s, 3, "monad", name, s.cases, body));
  };
  law("zeta . eta_I = id", [&](InstanceGenerator& g) {
    const auto mu = g.measure(g.space(s.max_points));
    return expect_equal(multiply(unit(mu)), mu, "zeta(eta(mu))");
  });
  law("zeta . I(eta) = id", [&](InstanceGenerator& g) {
    const auto mu = g.measure(g.space(s.max_points));
    return expect_equal(multiply(lift_unit(mu)), mu, "zeta(I(eta)(mu))");
  });
  law("zeta . zeta_I = zeta . I(zeta)", [&](InstanceGenerator& g) {
    const auto mmm = g.outer2(g.space(s.max_points));
    return expect_equal(multiply(flatten(mmm)), multiply(fmap([](const OuterMeasure& m) { return multiply(m); }, mmm)),
                        "associativity");
  });
  law("zeta(M)(phi) = M(phi-bar)", [&](InstanceGenerator& g) -> std::optional<std::string> {
    const Space x = g.space(s.max_points);
    const auto m = g.outer(x);
    const auto phi = g.function(x);
    if (integrate(multiply(m), phi) == outer_evaluate(m, phi)) return std::nullopt;
    return "defining identity of zeta fails";
  });
  law("naturality of zeta", [&](InstanceGenerator& g) {
    const Space x = g.space(s.max_points);
    const Space y = g.space(s.max_points, "Y");
    const auto f = g.map(x, y);
    const auto m = g.outer(x);
    return expect_equal(multiply(fmap([&](const IdempotentMeasure& mu) { return pushforward(f, mu); }, m)),
                        pushforward(f, multiply(m)), "naturality");
  });
  return out;
}

/// Runs every law group. `metric_cases` bounds the oracle comparisons, which
/// dominate the running time.
inline LawReport check_all_laws(const LawSettings& s) {
  using detail::expect_equal;
  LawReport report;
  const auto add = [&](std::uint64_t id, const std::string& group, const std::string& name, std::size_t cases,
                       const detail::LawCase& body) {
    report.results.push_back(detail::run_law(s, id, group, name, cases, body));
  };

  // Maslov integral axioms.
  add(1, "maslov", "mu(c) = c", s.cases, [&](InstanceGenerator& g) -> std::optional<std::string> {
    const Space x = g.space(s.max_points);
    const auto mu = g.measure(x);
    const double c = g.dyadic(-8, 8);
    if (integrate(mu, FiniteFunction::constant(x, c)) == c) return std::nullopt;
    return "normalization fails for " + describe(mu);
  });
  add(1, "maslov", "mu(c + phi) = c + mu(phi)", s.cases, [&](InstanceGenerator& g) -> std::optional<std::string> {
    const Space x = g.space(s.max_points);
    const auto mu = g.measure(x);
    const auto phi = g.function(x);
    const double c = g.dyadic(-8, 8);
    if (integrate(mu, shift(phi, c)) == c + integrate(mu, phi)) return std::nullopt;
    return "homogeneity fails for " + describe(mu);
  });
  add(1, "maslov", "mu(phi v psi) = mu(phi) v mu(psi)", s.cases,
      [&](InstanceGenerator& g) -> std::optional<std::string> {
        const Space x = g.space(s.max_points);
        const auto mu = g.measure(x);
        const auto phi = g.function(x), psi = g.function(x);
        if (integrate(mu, pointwise_max(phi, psi)) == std::max(integrate(mu, phi), integrate(mu, psi)))
          return std::nullopt;
        return "additivity fails for " + describe(mu);
      });

  // Functor laws.
  add(2, "functor", "I(id) = id and I(g f) = I(g) I(f)", s.cases, [&](InstanceGenerator& g) {
    const Space x = g.space(s.max_points), y = g.space(s.max_points, "Y"), z = g.space(s.max_points, "Z");
    const auto mu = g.measure(x);
    const auto f = g.map(x, y);
    const auto h = g.map(y, z);
    if (auto bad = expect_equal(pushforward(PointMap::identity(x), mu), mu, "identity")) return bad;
    return expect_equal(pushforward(compose(h, f), mu), pushforward(h, pushforward(f, mu)), "composition");
  });
  add(2, "functor", "supp I(f)(mu) = f(supp mu)", s.cases, [&](InstanceGenerator& g) -> std::optional<std::string> {
    const Space x = g.space(s.max_points), y = g.space(s.max_points, "Y");
    const auto mu = g.measure(x);
    const auto f = g.map(x, y);
    if (support(pushforward(f, mu)) == f.image(support(mu))) return std::nullopt;
    return "support image law fails for " + describe(mu);
  });
  add(2, "functor", "preimages and intersections", s.cases, [&](InstanceGenerator& g) -> std::optional<std::string> {
    const Space x = g.space(s.max_points), y = g.space(s.max_points, "Y");
    const auto mu = g.measure(x);
    const auto f = g.map(x, y);
    const auto b = g.subset(y);
    if (lies_in_subspace(pushforward(f, mu), b) != lies_in_subspace(mu, f.preimage(b)))
      return "preimage law fails for " + describe(mu);
    const auto a1 = g.subset(x), a2 = g.subset(x);
    std::vector<std::size_t> both;
    std::set_intersection(a1.begin(), a1.end(), a2.begin(), a2.end(), std::back_inserter(both));
    if (lies_in_subspace(mu, both) != (lies_in_subspace(mu, a1) && lies_in_subspace(mu, a2)))
      return "intersection law fails for " + describe(mu);
    return std::nullopt;
  });
  add(2, "functor", "lift along surjection pushes forward exactly", s.cases, [&](InstanceGenerator& g) {
    const Space y = g.space(s.max_points, "Y");
    const Space x = InstanceGenerator::space_of_size(y->size() + g.uniform_size(0, 2), "X");
    const auto f = g.surjection(x, y);
    const auto nu = g.measure(y);
    return expect_equal(pushforward(f, lift_along_surjection(f, nu)), nu, "lift");
  });

  for (auto& r : check_monad_laws(s)) report.results.push_back(std::move(r));

  add(4, "tensor", "marginals of mu (x) nu", s.cases, [&](InstanceGenerator& g) {
    const auto mu = g.measure(g.space(s.max_points));
    const auto nu = g.measure(g.space(s.max_points, "Y"));
    const auto t = tensor(mu, nu);
    if (auto bad = expect_equal(marginal(t, 0), mu, "first marginal")) return bad;
    return expect_equal(marginal(t, 1), nu, "second marginal");
  });
  add(4, "tensor", "associativity", s.cases, [&](InstanceGenerator& g) {
    const auto a = g.measure(g.space(3, "A"));
    const auto b = g.measure(g.space(3, "B"));
    const auto c = g.measure(g.space(3, "C"));
    const auto left = tensor(tensor(a, b), c);
    const auto right = tensor(a, tensor(b, c));
    // ((a,b),c) -> (a,(b,c))
    std::vector<std::size_t> t(left.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Tuple& o = left.space()->tuple(i);
      const Tuple& ab = left.space()->factor(0)->tuple(o[0]);
      const auto bc = *right.space()->factor(1)->find_tuple({ab[1], o[1]});
      t[i] = *right.space()->find_tuple({ab[0], bc});
    }
    return expect_equal(pushforward(PointMap(left.space(), right.space(), t), left), right, "associativity");
  });

  add(5, "hyperspace", "zeta I(j) j = j u", s.cases, [&](InstanceGenerator& g) {
    const Space x = g.space(s.max_points);
    std::vector<ClosedSet> fam;
    for (std::size_t k = g.uniform_size(1, 4); k-- > 0;) fam.emplace_back(x, g.nonempty_subset(x));
    const auto lhs = multiply(fmap([](const ClosedSet& a) { return hyperspace_embed(a); }, hyperspace_embed_family(fam)));
    return expect_equal(lhs, hyperspace_embed(hyperspace_union(fam)), "submonad square");
  });
  add(5, "hyperspace", "j s = eta", s.cases, [&](InstanceGenerator& g) -> std::optional<std::string> {
    const Space x = g.space(std::max<std::size_t>(s.max_points, 6));
    for (std::size_t p = 0; p < x->size(); ++p)
      if (!(hyperspace_embed(singleton(x, p)) == dirac(x, p))) return "j(s(x)) != delta_x";
    return std::nullopt;
  });

  add(6, "algebra", "beta eta = id, beta zeta = beta I(beta), hull membership", s.cases,
      [&](InstanceGenerator& g) -> std::optional<std::string> {
        const Space x = g.space(s.max_points);
        const auto cloud = g.cloud(x, 3);
        for (std::size_t p = 0; p < x->size(); ++p)
          if (barycenter(cloud, dirac(x, p)) != cloud[p]) return "beta(delta_x) != x";
        const auto m = g.outer(x);
        if (!algebra_law_check(cloud, m)) return "beta zeta != beta I(beta)";
        const auto mu = multiply(m);
        std::vector<TropicalPoint> gens;
        for (std::size_t p : support(mu)) gens.push_back(cloud[p]);
        if (!hull_membership(gens, barycenter(cloud, mu)).member) return "beta(mu) outside the span of its support";
        return std::nullopt;
      });

  const std::size_t metric_cases = std::max<std::size_t>(1, s.cases / 10);
  add(7, "metric", "closed form matches the grid oracle", metric_cases,
      [&](InstanceGenerator& g) -> std::optional<std::string> {
        const Space x = InstanceGenerator::space_of_size(3, "X");
        const auto d = g.metric(x);
        const auto mu = g.measure(x), nu = g.measure(x);
        const LipschitzClass n(static_cast<int>(g.uniform_size(1, 3)));
        const OracleOptions opt{0.05};
        const double cf = dhat(n, d, mu, nu), orc = dhat_oracle(n, d, mu, nu, opt);
        if (std::fabs(cf - orc) <= 2 * opt.step) return std::nullopt;
        return "closed form " + std::to_string(cf) + " vs oracle " + std::to_string(orc);
      });
  add(7, "metric", "pseudometric axioms and isometric Diracs", s.cases,
      [&](InstanceGenerator& g) -> std::optional<std::string> {
        const Space x = g.space(s.max_points);
        const auto d = g.metric(x);
        const LipschitzClass n(static_cast<int>(g.uniform_size(1, 4)));
        const auto a = g.measure(x), b = g.measure(x), c = g.measure(x);
        if (dhat(n, d, a, a) != 0.0) return "dhat(mu, mu) != 0";
        if (dhat(n, d, a, b) != dhat(n, d, b, a)) return "dhat not symmetric";
        if (dhat(n, d, a, c) > dhat(n, d, a, b) + dhat(n, d, b, c) + 1e-12) return "triangle inequality fails";
        for (std::size_t p = 0; p < x->size(); ++p)
          for (std::size_t q = 0; q < x->size(); ++q)
            if (dtilde(n, d, dirac(x, p), dirac(x, q)) != d(p, q)) return "Dirac embedding is not isometric";
        return std::nullopt;
      });
  add(7, "metric", "I(f) is nonexpanding", s.cases, [&](InstanceGenerator& g) -> std::optional<std::string> {
    const Space y = g.space(s.max_points, "Y");
    const auto dy = g.metric(y);
    const Space x = g.space(s.max_points);
    const auto f = g.map(x, y);
    DistanceTable raw(x->size());
    for (std::size_t i = 0; i < x->size(); ++i)
      for (std::size_t j = i + 1; j < x->size(); ++j)
        raw(i, j) = raw(j, i) = dy(f(i), f(j)) + 0.25 * static_cast<double>(g.uniform_size(1, 4));
    const auto dx = metric_closure(x, raw);
    const LipschitzClass n(static_cast<int>(g.uniform_size(1, 4)));
    const auto a = g.measure(x), b = g.measure(x);
    if (dhat(n, dy, pushforward(f, a), pushforward(f, b)) <= dhat(n, dx, a, b) + 1e-12) return std::nullopt;
    return "pushforward expands dhat";
  });
  return report;
}

}  // namespace maslov
