// maslov: command-line front end over JSON documents.
//
// Every subcommand reads one or more JSON files ("-" is standard input), each
// holding a document or an array of documents, and prints one JSON result.
// Exit codes: 0 success, 1 invalid input, 2 infeasible instance, 3 law
// violation (check-laws).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maslov/maslov.hpp"

namespace {

using maslov::io::Json;
namespace io = maslov::io;

constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitLawViolation = 3;

Json read_file(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw maslov::Error("cannot open '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw maslov::Error("'" + path + "' is not valid JSON: " + e.what());
  }
}

io::DocumentSet load_all(const std::vector<std::string>& files) {
  io::DocumentSet set;
  for (const auto& f : files) set.load(read_file(f));
  return set;
}

/// Exactly `count` documents of `kind`, in input order.
std::vector<Json> need(const io::DocumentSet& set, const std::string& kind, std::size_t count) {
  auto docs = set.documents(kind);
  if (docs.size() != count)
    throw maslov::Error("expected " + std::to_string(count) + " " + kind + " document(s), got " +
                        std::to_string(docs.size()));
  return docs;
}

std::vector<Json> at_least(const io::DocumentSet& set, const std::string& kind, std::size_t count) {
  auto docs = set.documents(kind);
  if (docs.size() < count)
    throw maslov::Error("expected at least " + std::to_string(count) + " " + kind + " document(s), got " +
                        std::to_string(docs.size()));
  return docs;
}

std::vector<maslov::IdempotentMeasure> measures(io::DocumentSet& set, const std::vector<Json>& docs) {
  std::vector<maslov::IdempotentMeasure> out;
  for (const auto& d : docs) out.push_back(set.parse_measure(d));
  return out;
}

Json labels_json(const maslov::Space& s, const std::vector<std::size_t>& idx) {
  Json a = Json::array();
  for (std::size_t i : idx) a.push_back(io::point_json(*s, i));
  return a;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

int cmd_validate(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  Json counts = Json::object();
  for (const auto& kind : io::document_kinds()) counts[kind] = 0;
  for (const auto& d : set.documents()) {
    const std::string k = io::kind_of(d);
    if (k == "measure") set.parse_measure(d);
    else if (k == "function") set.parse_function(d);
    else if (k == "map") set.parse_map(d);
    else if (k == "outer_measure") set.parse_outer(d);
    else if (k == "coupling") set.parse_coupling(d);
    else if (k == "cloud") set.parse_cloud(d);
    else if (k == "cover_levels") set.parse_cover_levels(d);
    counts[k] = counts[k].get<int>() + 1;
  }
  counts["metric_space"] = set.metrics().size();
  emit(Json{{"valid", true}, {"documents", counts}});
  return 0;
}

int cmd_integrate(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const auto mu = set.parse_measure(need(set, "measure", 1)[0]);
  const auto phi = set.parse_function(need(set, "function", 1)[0]);
  emit(Json{{"value", maslov::integrate(mu, phi)}});
  return 0;
}

int cmd_push(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const auto f = set.parse_map(need(set, "map", 1)[0]);
  const auto mu = set.parse_measure(need(set, "measure", 1)[0]);
  emit(io::measure_json(maslov::pushforward(f, mu), &set));
  return 0;
}

int cmd_lift(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const auto f = set.parse_map(need(set, "map", 1)[0]);
  const auto nu = set.parse_measure(need(set, "measure", 1)[0]);
  emit(io::measure_json(maslov::lift_along_surjection(f, nu), &set));
  return 0;
}

int cmd_tensor(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const auto ms = measures(set, at_least(set, "measure", 2));
  emit(io::measure_json(maslov::tensor_many(ms), &set));
  return 0;
}

int cmd_zeta(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const auto m = set.parse_outer(need(set, "outer_measure", 1)[0]);
  emit(io::measure_json(maslov::multiply(m), &set));
  return 0;
}

int cmd_marginal(const std::vector<std::string>& files, std::size_t axis) {
  io::DocumentSet set = load_all(files);
  const auto mu = set.parse_measure(need(set, "measure", 1)[0]);
  emit(io::measure_json(maslov::marginal(mu, axis), &set));
  return 0;
}

int cmd_barycenter(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const auto cloud = set.parse_cloud(need(set, "cloud", 1)[0]);
  const auto mu = set.parse_measure(need(set, "measure", 1)[0]);
  const auto b = maslov::barycenter(cloud, mu);
  Json out{{"barycenter", io::point_coords_json(b)}};
  bool finite = true;
  for (const auto& p : cloud.points())
    for (auto w : p) finite = finite && w.is_finite();
  if (finite) {
    const auto h = maslov::hull_membership(cloud.points(), b);
    out["in_hull"] = h.member;
    out["hull_witness"] = io::point_coords_json(h.witness);
  }
  emit(out);
  return 0;
}

int cmd_dist(const std::vector<std::string>& files, int n, bool oracle, double step) {
  io::DocumentSet set = load_all(files);
  if (set.metrics().size() != 1) throw maslov::Error("expected 1 metric_space document");
  const auto& x = set.metrics().front();
  const auto docs = need(set, "measure", 2);
  const auto mu = set.parse_measure(docs[0], x.space());
  const auto nu = set.parse_measure(docs[1], x.space());
  const maslov::LipschitzClass lip(n);
  Json out{{"n", n}, {"dhat", maslov::dhat(lip, x, mu, nu)}, {"dtilde", maslov::dtilde(lip, x, mu, nu)}};
  if (oracle) {
    maslov::OracleOptions opt;
    opt.step = step;
    out["oracle"] = maslov::dhat_oracle(lip, x, mu, nu, opt);
    out["step"] = step;
  }
  emit(out);
  return 0;
}

int cmd_sup(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const auto ms = measures(set, at_least(set, "measure", 1));
  emit(io::measure_json(maslov::pointwise_sup(ms), &set));
  return 0;
}

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_hyper(const std::vector<std::string>& files, const std::string& space_name,
              const std::vector<std::string>& members) {
  io::DocumentSet set = load_all(files);
  if (members.empty()) throw maslov::Error("hyper needs at least one --members set");
  const maslov::Space s = set.space(space_name);
  std::vector<maslov::ClosedSet> family;
  for (const auto& m : members) family.emplace_back(s, split_labels(m));
  const auto u = maslov::hyperspace_union(family);
  // zeta(I(j)(j_expX(family))) computed through the monad, equal to j(u(family)).
  const auto nested = maslov::fmap([](const maslov::ClosedSet& a) { return maslov::hyperspace_embed(a); },
                                   maslov::hyperspace_embed_family(family));
  Json sets = Json::array();
  for (const auto& a : family) sets.push_back(labels_json(s, a.members()));
  emit(Json{{"sets", sets},
            {"union", labels_json(s, u.members())},
            {"embedding", io::measure_json(maslov::hyperspace_embed(u), &set)},
            {"via_monad", io::measure_json(maslov::multiply(nested), &set)}});
  return 0;
}

int cmd_fuzzy(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const auto g = set.parse_function(need(set, "function", 1)[0]);
  const maslov::FuzzySet chi(g.space(), std::vector<double>(g.values().begin(), g.values().end()));
  emit(io::measure_json(maslov::fuzzy_embed(chi), &set));
  return 0;
}

/// The first measure is mu0 on the source; the rest form the sequence on the
/// target.
int cmd_lift_open(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const auto f = set.parse_map(need(set, "map", 1)[0]);
  const auto docs = at_least(set, "measure", 1);
  const auto mu0 = set.parse_measure(docs[0]);
  std::vector<maslov::IdempotentMeasure> seq;
  for (std::size_t i = 1; i < docs.size(); ++i) seq.push_back(set.parse_measure(docs[i]));
  const auto lifts = maslov::lift_open_surjection(f, mu0, seq);
  Json arr = Json::array();
  Json dist = Json::array();
  for (const auto& mu : lifts) {
    arr.push_back(io::measure_json(mu, &set));
    double worst = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) worst = std::max(worst, maslov::weight_distance(mu[i], mu0[i]));
    dist.push_back(worst);
  }
  emit(Json{{"lifts", arr}, {"distance_to_mu0", dist}});
  return 0;
}

int cmd_bicommute(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const maslov::CollapseMap f(set.parse_map(need(set, "map", 1)[0]));
  const auto docs = need(set, "measure", 2);
  auto a = set.parse_measure(docs[0]);
  auto b = set.parse_measure(docs[1]);
  if (a.space()->is_product() && !b.space()->is_product()) std::swap(a, b);
  emit(io::measure_json(maslov::bicommutative_lift(f, a, b), &set));
  return 0;
}

int cmd_couplings(const std::vector<std::string>& files) {
  io::DocumentSet set = load_all(files);
  const auto all = measures(set, set.documents("measure"));
  std::vector<maslov::IdempotentMeasure> marg, target;
  for (const auto& m : all) (m.space()->is_product() ? target : marg).push_back(m);
  if (marg.size() != 2) throw maslov::Error("couplings needs exactly two marginal measures");
  if (target.size() > 1) throw maslov::Error("couplings takes at most one target measure on the product");

  const auto en = maslov::enumerate_tight_patterns(marg[0], marg[1]);
  const auto top = maslov::maximal_coupling(marg[0], marg[1]);
  Json boxes = Json::array();
  const std::size_t nc = marg[1].size();
  for (const auto& b : en.boxes) {
    Json cells = Json::array();
    for (std::size_t c = 0; c < marg[0].size() * nc; ++c)
      if (b.is_forced(c))
        cells.push_back(Json::array({io::point_json(*marg[0].space(), c / nc), io::point_json(*marg[1].space(), c % nc)}));
    boxes.push_back(Json{{"forced", cells}});
  }
  Json out{{"coupling_exists", true},
           {"patterns", en.patterns},
           {"boxes", boxes},
           {"maximal_coupling", io::coupling_json(top, &set)}};
  Json checks = Json::array();
  for (const auto& d : set.documents("coupling")) {
    const auto c = set.parse_coupling(d);
    checks.push_back(maslov::coupling_feasible(c, marg[0], marg[1]));
  }
  bool all_feasible = true;
  for (const auto& c : checks) all_feasible = all_feasible && c.get<bool>();
  if (!checks.empty()) out["couplings_feasible"] = checks;
  if (!target.empty()) {
    const auto g = maslov::coupling_gap(target[0], marg[0], marg[1]);
    out["target_feasible"] = maslov::coupling_feasible(maslov::to_coupling(target[0]), marg[0], marg[1]);
    out["gap"] = g.gap;
    out["closest_coupling"] = io::measure_json(g.coupling, &set);
    out["witness_phi"] = io::function_json(g.witness, &set);
  }
  emit(out);
  return all_feasible ? 0 : kExitInfeasible;
}

int cmd_counterexample(int l) {
  const auto inst = maslov::counterexample_instance(l);
  const auto g = maslov::coupling_gap(inst.target, inst.mu1, inst.mu2);
  emit(Json{{"l", l},
            {"gap", g.gap},
            {"target", io::measure_json(inst.target)},
            {"marginals", Json::array({io::measure_json(inst.mu1), io::measure_json(inst.mu2)})},
            {"closest_coupling", io::measure_json(g.coupling)},
            {"witness_phi", io::function_json(g.witness)}});
  return 0;
}

int cmd_milyutin(const std::vector<std::string>& files, std::size_t depth) {
  io::DocumentSet set = load_all(files);
  const auto [y, levels] = set.parse_cover_levels(need(set, "cover_levels", 1)[0]);
  const auto m = maslov::milyutin_build(y, levels, depth);
  Json sel = Json::object();
  for (std::size_t pt = 0; pt < y->size(); ++pt) sel[y->label(pt)] = io::measure_json(m.selection[pt], &set);
  emit(Json{{"depth", depth},
            {"domain", io::space_json(m.domain, &set)},
            {"map", io::map_json(m.projection, &set)},
            {"selection", sel}});
  return 0;
}

int cmd_check_laws(std::uint64_t seed, std::size_t cases, std::size_t max_points) {
  maslov::LawSettings s;
  s.seed = seed;
  s.cases = cases;
  s.max_points = max_points;
  const auto report = maslov::check_all_laws(s);
  Json out = Json::object();
  Json details = Json::array();
  for (const auto& r : report.results) {
    out[r.group] = report.group_ok(r.group) ? "ok" : "fail";
    Json d{{"group", r.group}, {"law", r.law}, {"cases", r.cases}, {"failures", r.failures}};
    if (r.failures) d["counterexample"] = r.counterexample;
    details.push_back(d);
  }
  out["seed"] = seed;
  out["laws"] = details;
  emit(out);
  return report.ok() ? 0 : kExitLawViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-plus measure toolkit over JSON documents"};
  app.require_subcommand(1);
  std::vector<std::string> files;

  const auto with_files = [&](const std::string& name, const std::string& help, bool required = true) {
    auto* sub = app.add_subcommand(name, help);
    auto* opt = sub->add_option("files", files, "JSON files, '-' for standard input");
    if (required) opt->required();
    return sub;
  };

  auto* validate = with_files("validate", "parse and validate documents");
  auto* integrate = with_files("integrate", "Maslov integral of a function against a measure");
  auto* push = with_files("push", "pushforward of a measure along a map");
  auto* lift = with_files("lift", "maximal lift of a measure along a surjection");
  auto* tensor = with_files("tensor", "tensor product of two or more measures");
  auto* zeta = with_files("zeta", "monad multiplication of an outer measure");
  auto* marginal = with_files("marginal", "marginal of a measure on a product");
  std::size_t axis = 0;
  marginal->add_option("--axis", axis, "factor index")->capture_default_str();
  auto* bary = with_files("barycenter", "idempotent barycenter of a measure on a point cloud");
  auto* dist = with_files("dist", "Lipschitz-dual distances between two measures");
  int lip_n = 1;
  bool oracle = false;
  double step = 0.01;
  dist->add_option("--n", lip_n, "Lipschitz bound")->capture_default_str();
  dist->add_flag("--oracle", oracle, "also run the brute-force grid oracle");
  dist->add_option("--step", step, "oracle grid step")->capture_default_str();
  auto* sup = with_files("sup", "pointwise supremum of measures");
  auto* hyper = with_files("hyper", "hyperspace union and embedding of closed sets");
  std::string hyper_space;
  std::vector<std::string> members;
  hyper->add_option("--space", hyper_space, "name of the ambient space")->required();
  hyper->add_option("--members", members, "comma-separated labels of one set (repeatable)")->required();
  auto* fuzzy = with_files("fuzzy", "measure of a fuzzy set given as a function of grades");
  auto* lift_open = with_files("lift-open", "lift a measure sequence along an open surjection");
  auto* bicommute = with_files("bicommute", "lift a coupling along a collapse");
  auto* couplings = with_files("couplings", "coupling feasibility, tight patterns and gap to a target");
  auto* counter = app.add_subcommand("counterexample", "gap of the non-openness example");
  int l = 1;
  counter->add_option("--l", l, "positive integer parameter")->capture_default_str();
  auto* milyutin = with_files("milyutin", "finite-depth Milyutin map from cover levels");
  std::size_t depth = 1;
  milyutin->add_option("--depth", depth, "number of cover levels")->capture_default_str();
  auto* laws = app.add_subcommand("check-laws", "randomized sweep of every algebraic law");
  std::uint64_t seed = 42;
  std::size_t cases = 200, max_points = 5;
  laws->add_option("--seed", seed)->capture_default_str();
  laws->add_option("--cases", cases)->capture_default_str();
  laws->add_option("--max-points", max_points)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*validate) return cmd_validate(files);
    if (*integrate) return cmd_integrate(files);
    if (*push) return cmd_push(files);
    if (*lift) return cmd_lift(files);
    if (*tensor) return cmd_tensor(files);
    if (*zeta) return cmd_zeta(files);
    if (*marginal) return cmd_marginal(files, axis);
    if (*bary) return cmd_barycenter(files);
    if (*dist) return cmd_dist(files, lip_n, oracle, step);
    if (*sup) return cmd_sup(files);
    if (*hyper) return cmd_hyper(files, hyper_space, members);
    if (*fuzzy) return cmd_fuzzy(files);
    if (*lift_open) return cmd_lift_open(files);
    if (*bicommute) return cmd_bicommute(files);
    if (*couplings) return cmd_couplings(files);
    if (*counter) return cmd_counterexample(l);
    if (*milyutin) return cmd_milyutin(files, depth);
    if (*laws) return cmd_check_laws(seed, cases, max_points);
  } catch (const maslov::Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const maslov::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
