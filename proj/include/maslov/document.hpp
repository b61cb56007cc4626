#pragma once

/**
 * @file document.hpp
 * @brief JSON interchange format.
 *
 * Every document is an object with a "kind". A file holds one document or an
 * array of them. Spaces are defined once by name and referenced by name from
 * other documents; a reference may also be an inline space object.
 *
 *   {"kind":"space","name":"X","points":["a","b"]}
 *   {"kind":"space","name":"XY","factors":["X","Y"]}            full product
 *   {"kind":"space","name":"F","factors":["X","Y"],"points":[["a","c"]]}
 *   {"kind":"metric_space","name":"X","points":["a","b"],"dist":[[0,1],[1,0]]}
 *   {"kind":"measure","space":"X","atoms":{"a":0.0,"b":"-inf"}}
 *   {"kind":"measure","space":"XY","atoms":[[["a","c"],0.0]]}
 *   {"kind":"function","space":"X","values":{"a":1,"b":2}}
 *   {"kind":"map","source":"X","target":"Y","table":{"a":"c","b":"c"}}
 *   {"kind":"outer_measure","space":"X","inner":[{"atoms":{...}}],"weights":[0]}
 *   {"kind":"coupling","rows":"X","cols":"Y","table":[[0,"-inf"],["-inf",0]]}
 *   {"kind":"cloud","space":"X","embed":{"a":[0,1],"b":[2,"-inf"]}}
 *   {"kind":"cover_levels","space":"Y","levels":[[{"U":["a"],"V":["a","b"],"alpha":{"b":-1}}]]}
 *
 * -inf is the string "-inf". Atoms omitted from a measure are -inf, and
 * measures are normalized on input. Output preserves canonical point order.
 */

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "maslov/convexity.hpp"
#include "maslov/error.hpp"
#include "maslov/functor.hpp"
#include "maslov/measure.hpp"
#include "maslov/metric_space.hpp"
#include "maslov/monad.hpp"
#include "maslov/openness.hpp"
#include "maslov/space.hpp"
#include "maslov/weight.hpp"

namespace maslov::io {

using Json = nlohmann::ordered_json;

inline const std::vector<std::string>& document_kinds() {
  static const std::vector<std::string> kinds{"space",         "metric_space", "measure", "map",         "function",
                                              "outer_measure", "coupling",     "cloud",   "cover_levels"};
  return kinds;
}

inline Weight parse_weight(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return Weight::bottom();
    throw Error("weight strings must be \"-inf\", got \"" + j.get<std::string>() + "\"");
  }
  if (!j.is_number()) throw Error("weight must be a number or \"-inf\"");
  return Weight(j.get<double>());
}

inline Json weight_json(Weight w) {
  if (w.is_bottom()) return "-inf";
  return w.value();
}

inline double parse_real(const Json& j) {
  if (!j.is_number()) throw Error("expected a number");
  return j.get<double>();
}

inline const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw Error(std::string("missing field \"") + key + "\"");
  return doc.at(key);
}

inline std::string kind_of(const Json& doc) {
  const Json& k = field(doc, "kind");
  if (!k.is_string()) throw Error("\"kind\" must be a string");
  return k.get<std::string>();
}

/// Point index from a label (plain space) or an array of components (product).
inline std::size_t parse_point(const FiniteSpace& s, const Json& j) {
  if (!s.is_product()) {
    if (!j.is_string()) throw Error("point of '" + s.name() + "' must be a label string");
    return s.index(j.get<std::string>());
  }
  if (!j.is_array() || j.size() != s.arity())
    throw Error("point of product '" + s.name() + "' must be an array of " + std::to_string(s.arity()) + " labels");
  Tuple t;
  for (std::size_t k = 0; k < s.arity(); ++k) t.push_back(parse_point(*s.factor(k), j[k]));
  if (auto i = s.find_tuple(t)) return *i;
  throw Error("point " + j.dump() + " is not in '" + s.name() + "'");
}

inline Json point_json(const FiniteSpace& s, std::size_t i) {
  if (!s.is_product()) return s.label(i);
  Json a = Json::array();
  const Tuple& t = s.tuple(i);
  for (std::size_t k = 0; k < t.size(); ++k) a.push_back(point_json(*s.factor(k), t[k]));
  return a;
}

/// Reads a point-indexed table: an object keyed by label (plain spaces) or an
/// array of [point, value] pairs (any space).
template <class F>
void for_each_entry(const FiniteSpace& s, const Json& table, F&& fn) {
  if (table.is_object()) {
    if (s.is_product()) throw Error("tables over product spaces must be arrays of [point, value] pairs");
    for (const auto& [label, v] : table.items()) fn(s.index(label), v);
  } else if (table.is_array()) {
    for (const auto& e : table) {
      if (!e.is_array() || e.size() != 2) throw Error("table entries must be [point, value] pairs");
      fn(parse_point(s, e[0]), e[1]);
    }
  } else {
    throw Error("table must be an object or an array of pairs");
  }
}

template <class F>
Json table_json(const FiniteSpace& s, std::size_t n, F&& value) {
  if (!s.is_product()) {
    Json o = Json::object();
    for (std::size_t i = 0; i < n; ++i) o[s.label(i)] = value(i);
    return o;
  }
  Json a = Json::array();
  for (std::size_t i = 0; i < n; ++i) a.push_back(Json::array({point_json(s, i), value(i)}));
  return a;
}

/// A set of loaded documents: named spaces and metrics, plus every other
/// document in input order.
class DocumentSet {
 public:
  /// Adds one document or an array of documents.
  void load(const Json& j) {
    if (j.is_array()) {
      for (const auto& d : j) load(d);
      return;
    }
    const std::string kind = kind_of(j);
    if (std::find(document_kinds().begin(), document_kinds().end(), kind) == document_kinds().end())
      throw Error("unknown document kind \"" + kind + "\"");
    if (kind == "space") {
      define(parse_space(j));
    } else if (kind == "metric_space") {
      MetricSpace m = parse_metric_space(j);
      metrics_.emplace_back(m);
    } else {
      docs_.push_back(j);
    }
  }

  Space space(const std::string& name) const {
    auto it = spaces_.find(name);
    if (it == spaces_.end()) throw Error("unresolved space reference \"" + name + "\"");
    return it->second;
  }
  bool has_space(const std::string& name) const { return spaces_.count(name) != 0; }
  /// Whether `s` is the very space registered under its name.
  bool is_registered(const Space& s) const {
    auto it = spaces_.find(s->name());
    return it != spaces_.end() && it->second == s;
  }

  const std::vector<Json>& documents() const { return docs_; }
  std::vector<Json> documents(const std::string& kind) const {
    std::vector<Json> out;
    for (const auto& d : docs_)
      if (kind_of(d) == kind) out.push_back(d);
    return out;
  }
  const std::vector<MetricSpace>& metrics() const { return metrics_; }

  void define(const Space& s) {
    auto [it, fresh] = spaces_.emplace(s->name(), s);
    if (!fresh && !same_space(it->second, s)) throw Error("space \"" + s->name() + "\" defined twice differently");
  }

  /// A name, or an inline space object (registered under its name).
  Space resolve(const Json& ref) {
    if (ref.is_string()) return space(ref.get<std::string>());
    if (ref.is_object()) {
      Space s = parse_space(ref);
      if (has_space(s->name()) && same_space(space(s->name()), s)) return space(s->name());
      define(s);
      return s;
    }
    throw Error("space reference must be a name or a space object");
  }

  Space parse_space(const Json& j) {
    const Json& name = field(j, "name");
    if (!name.is_string()) throw Error("space name must be a string");
    if (j.contains("factors")) {
      std::vector<Space> factors;
      for (const auto& f : field(j, "factors")) factors.push_back(resolve(f));
      if (!j.contains("points")) return FiniteSpace::product(std::move(factors), name.get<std::string>());
      std::vector<Tuple> tuples;
      for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() != factors.size()) throw Error("product points must be label arrays");
        Tuple t;
        for (std::size_t k = 0; k < factors.size(); ++k) t.push_back(parse_point(*factors[k], p[k]));
        tuples.push_back(std::move(t));
      }
      return FiniteSpace::subproduct(std::move(factors), std::move(tuples), name.get<std::string>());
    }
    std::vector<std::string> labels;
    for (const auto& p : field(j, "points")) {
      if (!p.is_string()) throw Error("point labels must be strings");
      labels.push_back(p.get<std::string>());
    }
    return FiniteSpace::make(name.get<std::string>(), std::move(labels));
  }

  MetricSpace parse_metric_space(const Json& j) {
    Space s;
    if (j.contains("points")) {
      Json sd = j;
      sd["kind"] = "space";
      s = parse_space(sd);
      define(s);
    } else {
      s = resolve(field(j, "space"));
    }
    std::vector<std::vector<double>> rows;
    for (const auto& r : field(j, "dist")) {
      std::vector<double> row;
      for (const auto& v : r) row.push_back(parse_real(v));
      rows.push_back(std::move(row));
    }
    return metric_closure(s, DistanceTable::from_rows(rows));
  }

  IdempotentMeasure parse_measure(const Json& j, std::optional<Space> default_space = std::nullopt) {
    Space s = j.contains("space") ? resolve(j.at("space")) : default_space ? *default_space : resolve(field(j, "space"));
    std::vector<Weight> w(s->size());
    for_each_entry(*s, field(j, "atoms"), [&](std::size_t i, const Json& v) { w[i] = parse_weight(v); });
    return normalize(s, std::move(w));
  }

  FiniteFunction parse_function(const Json& j) {
    Space s = resolve(field(j, "space"));
    std::vector<double> v(s->size());
    std::vector<bool> seen(s->size(), false);
    for_each_entry(*s, field(j, "values"), [&](std::size_t i, const Json& x) {
      v[i] = parse_real(x);
      seen[i] = true;
    });
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) throw Error("function has no value at '" + s->label(i) + "'");
    return FiniteFunction(s, std::move(v));
  }

  PointMap parse_map(const Json& j) {
    Space src = resolve(field(j, "source"));
    Space dst = resolve(field(j, "target"));
    std::vector<std::size_t> t(src->size(), dst->size());
    for_each_entry(*src, field(j, "table"), [&](std::size_t i, const Json& y) { t[i] = parse_point(*dst, y); });
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] == dst->size()) throw Error("map has no value at '" + src->label(i) + "'");
    return PointMap(src, dst, std::move(t));
  }

  OuterMeasure parse_outer(const Json& j) {
    Space s = resolve(field(j, "space"));
    std::vector<IdempotentMeasure> items;
    for (const auto& in : field(j, "inner")) items.push_back(parse_measure(in, s));
    std::vector<Weight> w;
    for (const auto& x : field(j, "weights")) w.push_back(parse_weight(x));
    if (w.size() != items.size()) throw Error("outer measure needs one weight per inner measure");
    const Weight top = oplus_all(w);
    if (top.is_bottom()) throw Error("outer measure weights are all -inf");
    for (Weight& x : w)
      if (x.is_finite()) x = x == top ? Weight::zero() : Weight(x.value() - top.value());
    return OuterMeasure(std::move(items), std::move(w));
  }

  Coupling parse_coupling(const Json& j) {
    Coupling c{resolve(field(j, "rows")), resolve(field(j, "cols")), {}};
    const Json& t = field(j, "table");
    if (!t.is_array() || t.size() != c.rows->size()) throw Error("coupling table needs one row per row point");
    for (const auto& r : t) {
      if (!r.is_array() || r.size() != c.cols->size()) throw Error("coupling row has the wrong length");
      for (const auto& v : r) c.cells.push_back(parse_weight(v));
    }
    return c;
  }

  PointCloud parse_cloud(const Json& j) {
    Space s = resolve(field(j, "space"));
    std::vector<TropicalPoint> pts(s->size());
    std::vector<bool> seen(s->size(), false);
    for_each_entry(*s, field(j, "embed"), [&](std::size_t i, const Json& v) {
      if (!v.is_array()) throw Error("cloud coordinates must be arrays");
      for (const auto& c : v) pts[i].push_back(parse_weight(c));
      seen[i] = true;
    });
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) throw Error("cloud has no coordinates for '" + s->label(i) + "'");
    return PointCloud(s, std::move(pts));
  }

  std::pair<Space, std::vector<MilyutinLevel>> parse_cover_levels(const Json& j) {
    Space s = resolve(field(j, "space"));
    std::vector<MilyutinLevel> levels;
    for (const auto& lv : field(j, "levels")) {
      MilyutinLevel level;
      for (const auto& p : lv) {
        CoverPair cp;
        for (const auto& u : field(p, "U")) cp.u.push_back(parse_point(*s, u));
        for (const auto& v : field(p, "V")) cp.v.push_back(parse_point(*s, v));
        cp.alpha.assign(s->size(), Weight::bottom());
        for (std::size_t v : cp.v) cp.alpha[v] = Weight::zero();
        if (p.contains("alpha"))
          for_each_entry(*s, p.at("alpha"), [&](std::size_t i, const Json& w) { cp.alpha[i] = parse_weight(w); });
        level.pairs.push_back(std::move(cp));
      }
      levels.push_back(std::move(level));
    }
    return {s, std::move(levels)};
  }

 private:
  std::map<std::string, Space> spaces_;
  std::vector<MetricSpace> metrics_;
  std::vector<Json> docs_;
};

// ---------------------------------------------------------------------------
// Writers. A space registered in `known` is written by name, anything else
// inline, so outputs stay self-contained.

inline Json space_ref(const Space& s, const DocumentSet* known);

inline Json space_json(const Space& s, const DocumentSet* known) {
  Json j{{"kind", "space"}, {"name", s->name()}};
  if (!s->is_product()) {
    j["points"] = s->labels();
    return j;
  }
  Json f = Json::array();
  for (const auto& x : s->factors()) f.push_back(space_ref(x, known));
  j["factors"] = f;
  if (!s->is_full_product()) {
    Json pts = Json::array();
    for (std::size_t i = 0; i < s->size(); ++i) pts.push_back(point_json(*s, i));
    j["points"] = pts;
  }
  return j;
}

inline Json space_ref(const Space& s, const DocumentSet* known) {
  if (known && known->is_registered(s)) return s->name();
  return space_json(s, known);
}

inline Json measure_json(const IdempotentMeasure& mu, const DocumentSet* known = nullptr) {
  return Json{{"kind", "measure"},
              {"space", space_ref(mu.space(), known)},
              {"atoms", table_json(*mu.space(), mu.size(), [&](std::size_t i) { return weight_json(mu[i]); })}};
}

inline Json function_json(const FiniteFunction& f, const DocumentSet* known = nullptr) {
  return Json{{"kind", "function"},
              {"space", space_ref(f.space(), known)},
              {"values", table_json(*f.space(), f.size(), [&](std::size_t i) { return Json(f[i]); })}};
}

inline Json map_json(const PointMap& f, const DocumentSet* known = nullptr) {
  return Json{{"kind", "map"},
              {"source", space_ref(f.source(), known)},
              {"target", space_ref(f.target(), known)},
              {"table", table_json(*f.source(), f.source()->size(),
                                   [&](std::size_t i) { return point_json(*f.target(), f(i)); })}};
}

inline Json outer_json(const OuterMeasure& m, const DocumentSet* known = nullptr) {
  Json inner = Json::array(), weights = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& mu = m.item(i);
    inner.push_back(Json{{"atoms", table_json(*mu.space(), mu.size(), [&](std::size_t k) { return weight_json(mu[k]); })}});
    weights.push_back(weight_json(m.weight(i)));
  }
  return Json{{"kind", "outer_measure"}, {"space", space_ref(m.base(), known)}, {"inner", inner}, {"weights", weights}};
}

inline Json coupling_json(const Coupling& c, const DocumentSet* known = nullptr) {
  Json t = Json::array();
  for (std::size_t r = 0; r < c.rows->size(); ++r) {
    Json row = Json::array();
    for (std::size_t k = 0; k < c.cols->size(); ++k) row.push_back(weight_json(c(r, k)));
    t.push_back(row);
  }
  return Json{{"kind", "coupling"}, {"rows", space_ref(c.rows, known)}, {"cols", space_ref(c.cols, known)}, {"table", t}};
}

inline Json point_coords_json(const TropicalPoint& p) {
  Json a = Json::array();
  for (Weight w : p) a.push_back(weight_json(w));
  return a;
}

inline Json cloud_json(const PointCloud& c, const DocumentSet* known = nullptr) {
  return Json{{"kind", "cloud"},
              {"space", space_ref(c.space(), known)},
              {"embed", table_json(*c.space(), c.space()->size(), [&](std::size_t i) { return point_coords_json(c[i]); })}};
}

inline Json metric_json(const MetricSpace& m, const DocumentSet* known = nullptr) {
  Json d = Json::array();
  for (std::size_t i = 0; i < m.dist().size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.dist().size(); ++j) row.push_back(m(i, j));
    d.push_back(row);
  }
  return Json{{"kind", "metric_space"}, {"space", space_ref(m.space(), known)}, {"dist", d}};
}

inline Json cover_levels_json(const Space& y, const std::vector<MilyutinLevel>& levels,
                              const DocumentSet* known = nullptr) {
  Json lv = Json::array();
  for (const auto& level : levels) {
    Json pairs = Json::array();
    for (const auto& p : level.pairs) {
      Json u = Json::array(), v = Json::array(), alpha = Json::object();
      for (std::size_t i : p.u) u.push_back(y->label(i));
      for (std::size_t i : p.v) {
        v.push_back(y->label(i));
        alpha[y->label(i)] = weight_json(p.alpha[i]);
      }
      pairs.push_back(Json{{"U", u}, {"V", v}, {"alpha", alpha}});
    }
    lv.push_back(pairs);
  }
  return Json{{"kind", "cover_levels"}, {"space", space_ref(y, known)}, {"levels", lv}};
}

}  // namespace maslov::io
