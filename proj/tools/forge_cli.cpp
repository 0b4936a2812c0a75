// forge: finite-group engine and theorem-verification harness CLI.
//
// Subcommands:
//   verify  --check <id> [--formation <name>] [--sigma "2,3/5"] [--corpus <path>]
//   compute --invariant <name> --group <spec> [--arg <subgroup-gens>]
//   search  --formation <name> [--sigma ...] [--corpus <path>]
//   graph   [--corpus <path>]
//
// Reports are JSON on stdout. Exit codes: 0 = all hard checks pass,
// 1 = a hard check failed, 2 = input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "forge/checks.hpp"
#include "forge/corpus.hpp"
#include "forge/groupspec.hpp"

namespace {

using forge::Json;

std::vector<forge::CorpusEntry> corpus_from(const std::string& path) {
  if (path.empty()) return forge::default_corpus();
  std::ifstream in(path);
  if (!in) throw forge::InputError("cannot open corpus file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return forge::load_corpus_text(ss.str());
}

std::optional<forge::Formation> formation_from(const std::string& name,
                                               const std::string& sigma_text) {
  if (name.empty()) {
    if (!sigma_text.empty())
      throw forge::InputError("--sigma requires --formation sigma_nilpotent");
    return std::nullopt;
  }
  std::optional<forge::SigmaPartition> sigma;
  if (!sigma_text.empty()) sigma = forge::SigmaPartition::parse(sigma_text);
  return forge::registry_lookup(name, sigma);
}

Json fingerprint(const forge::Subgroup& s) {
  forge::Materialized m = forge::materialize(s);
  Json j = Json::object();
  j["order"] = s.order();
  j["abelian"] = forge::is_abelian(m.group);
  j["exponent"] = forge::exponent_of(m.group);
  return j;
}

Json value_json(const forge::Subgroup& s) {
  Json j = forge::subgroup_json(s);
  j["fingerprint"] = fingerprint(s);
  return j;
}

forge::Subgroup parse_subgroup_arg(const forge::FiniteGroup& g, const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw forge::InputError("--arg is not valid JSON");
  std::vector<forge::Elem> seed;
  if (j.is_object() && j.contains("indices")) {
    for (const Json& v : j.at("indices")) {
      if (!v.is_number_unsigned() || v.get<std::size_t>() >= g.order())
        throw forge::InputError("--arg: element index out of range");
      seed.push_back(static_cast<forge::Elem>(v.get<std::size_t>()));
    }
  } else if (j.is_array()) {
    if (!g.has_realization())
      throw forge::InputError("--arg image lists need a permutation-realized group; "
                              "use {\"indices\": [...]} instead");
    const std::size_t deg = g.perm_of(0).degree();
    for (const Json& pj : j) {
      if (!pj.is_array() || pj.size() != deg)
        throw forge::InputError("--arg: image list has wrong degree");
      std::vector<forge::Elem> img;
      for (const Json& v : pj) img.push_back(static_cast<forge::Elem>(v.get<std::size_t>()));
      forge::Perm p(img);
      bool found = false;
      for (std::size_t i = 0; i < g.order(); ++i)
        if (g.perm_of(static_cast<forge::Elem>(i)) == p) {
          seed.push_back(static_cast<forge::Elem>(i));
          found = true;
          break;
        }
      if (!found) throw forge::InputError("--arg: permutation is not an element of the group");
    }
  } else {
    throw forge::InputError("--arg must be a list of image lists or {\"indices\": [...]}");
  }
  return forge::subgroup_closure(g, seed);
}

int run_verify(const std::string& check, const std::string& formation, const std::string& sigma,
               const std::string& corpus_path) {
  auto corpus = corpus_from(corpus_path);
  forge::Harness h(corpus);
  auto user_f = formation_from(formation, sigma);
  std::vector<forge::CheckReport> reports;
  if (check == "all") {
    if (user_f) throw forge::InputError("--formation cannot be combined with --check all");
    reports = forge::run_all_checks(h);
  } else {
    reports = forge::run_check(h, check, user_f);
  }
  Json out = Json::array();
  bool hard_fail = false;
  for (const auto& rep : reports) {
    for (const auto& j : rep.to_json()) out.push_back(j);
    if (rep.hard && rep.any_fail()) hard_fail = true;
  }
  std::cout << out.dump(2) << "\n";
  return hard_fail ? 1 : 0;
}

int run_compute(const std::string& invariant, const std::string& group_spec,
                const std::string& formation, const std::string& sigma, const std::string& arg) {
  forge::GroupSpec spec = forge::parse_group_spec(group_spec);
  forge::FiniteGroup g = forge::build_group(spec);
  Json out = Json::object();
  out["invariant"] = invariant;
  out["group"] = g.label();
  out["order"] = g.order();

  auto need_formation = [&]() {
    auto f = formation_from(formation, sigma);
    if (!f) throw forge::InputError("invariant '" + invariant + "' needs --formation");
    return *f;
  };

  if (invariant == "center") {
    out["value"] = value_json(forge::center_subgroup(g));
  } else if (invariant == "hypercenter") {
    out["value"] = value_json(forge::hypercenter(g));
  } else if (invariant == "frattini") {
    out["value"] = value_json(forge::frattini(forge::all_subgroups(g)));
  } else if (invariant == "fitting") {
    out["value"] = value_json(forge::fitting(forge::all_subgroups(g)));
  } else if (invariant == "socle") {
    out["value"] = value_json(forge::socle(g));
  } else if (invariant == "fstar") {
    out["value"] = value_json(forge::generalized_fitting(g, forge::all_subgroups(g)));
  } else if (invariant == "ftilde") {
    out["value"] = value_json(forge::f_tilde(g, forge::all_subgroups(g)));
  } else if (invariant == "zf") {
    out["value"] = value_json(forge::f_hypercenter(g, need_formation()));
  } else if (invariant == "intf") {
    out["value"] = value_json(forge::int_f(forge::all_subgroups(g), need_formation()));
  } else if (invariant == "deltaf") {
    out["value"] = value_json(forge::delta_f(forge::all_subgroups(g), need_formation()));
  } else if (invariant == "residual") {
    out["value"] = value_json(forge::f_residual(g, need_formation(), forge::all_subgroups(g)));
  } else if (invariant == "sf" || invariant == "cf") {
    forge::SubgroupLattice lat = forge::all_subgroups(g);
    forge::KsnContext ctx(lat, need_formation());
    out["value"] = value_json(invariant == "sf" ? forge::s_f(ctx) : forge::c_f(ctx));
  } else if (invariant == "ncgraph") {
    forge::NCriticalGraph graph = forge::n_critical_graph(forge::all_subgroups(g));
    Json edges = Json::array();
    for (const auto& [p, q] : graph.edges) edges.push_back(Json::array({p, q}));
    out["value"] = Json::object({{"vertices", graph.vertices}, {"edges", edges}});
  } else if (invariant == "schmidt") {
    forge::SubgroupLattice lat = forge::all_subgroups(g);
    auto sig = forge::schmidt_signature_sub(lat, forge::whole_group(g).members);
    Json v = Json::object();
    v["schmidt"] = sig.has_value();
    v["signature"] = sig ? Json::array({sig->first, sig->second}) : Json();
    out["value"] = v;
  } else if (invariant == "ksn" || invariant == "weaksub") {
    if (arg.empty()) throw forge::InputError("invariant '" + invariant + "' needs --arg");
    forge::Subgroup hsub = parse_subgroup_arg(g, arg);
    forge::SubgroupLattice lat = forge::all_subgroups(g);
    forge::KsnContext ctx(lat, need_formation());
    if (invariant == "ksn") {
      auto chain = forge::is_k_f_subnormal(ctx, hsub);
      Json v = Json::object();
      v["subgroup"] = value_json(hsub);
      v["subnormal"] = chain.has_value();
      if (chain) {
        Json links = Json::array();
        for (std::size_t i = 0; i < chain->links.size(); ++i) {
          Json l = forge::subgroup_json(chain->links[i]);
          if (i > 0)
            l["step"] = chain->steps[i - 1] == forge::SubnormalChain::Step::kNormal
                            ? "normal"
                            : "quotient-in-F";
          links.push_back(std::move(l));
        }
        v["chain"] = std::move(links);
      }
      out["value"] = v;
    } else {
      auto ws = forge::weak_k_f_subnormalizers(ctx, hsub);
      Json v = Json::object();
      v["subgroup"] = value_json(hsub);
      Json ms = Json::array();
      for (const auto& m : ws.maximals) ms.push_back(forge::subgroup_json(m));
      v["maximals"] = std::move(ms);
      out["value"] = v;
    }
  } else {
    throw forge::InputError(
        "unknown invariant '" + invariant +
        "' (expected center, hypercenter, frattini, fitting, socle, fstar, ftilde, zf, intf, "
        "deltaf, sf, cf, residual, ncgraph, schmidt, ksn, weaksub)");
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_search(const std::string& formation, const std::string& sigma,
               const std::string& corpus_path) {
  auto f = formation_from(formation, sigma);
  if (!f) throw forge::InputError("search needs --formation");
  auto corpus = corpus_from(corpus_path);
  forge::Harness h(corpus);
  forge::CheckReport rep = forge::search_boundary(h, *f);
  std::cout << rep.to_json().dump(2) << "\n";
  return 0;
}

int run_graph(const std::string& corpus_path) {
  auto corpus = corpus_from(corpus_path);
  Json groups = Json::array();
  std::vector<std::pair<std::string, forge::NCriticalGraph>> graphs;
  for (const auto& e : corpus) {
    Json gj = Json::object();
    gj["group"] = e.label;
    try {
      forge::NCriticalGraph gr = forge::n_critical_graph(forge::all_subgroups(e.group));
      Json edges = Json::array();
      for (const auto& [p, q] : gr.edges) edges.push_back(Json::array({p, q}));
      gj["vertices"] = gr.vertices;
      gj["edges"] = edges;
      graphs.emplace_back(e.label, std::move(gr));
    } catch (const forge::BoundError& err) {
      gj["notice"] = err.what();
    }
    groups.push_back(std::move(gj));
  }
  forge::NCriticalGraph uni = forge::corpus_graph(graphs);
  Json cj = Json::object();
  cj["vertices"] = uni.vertices;
  Json edges = Json::array();
  for (const auto& [p, q] : uni.edges) edges.push_back(Json::array({p, q}));
  cj["edges"] = edges;
  Json prov = Json::object();
  for (const auto& [e, labels] : uni.provenance)
    prov[std::to_string(e.first) + "," + std::to_string(e.second)] = labels;
  cj["provenance"] = prov;
  Json out = Json::object();
  out["groups"] = groups;
  out["corpus"] = cj;
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-group engine and theorem-verification harness"};
  app.require_subcommand(1);

  std::string check, formation, sigma, corpus_path, invariant, group_spec, arg;

  CLI::App* verify = app.add_subcommand("verify", "run a theorem check over the corpus");
  verify->add_option("--check", check, "check id (or 'all')")->required();
  verify->add_option("--formation", formation, "formation name from the registry");
  verify->add_option("--sigma", sigma, "sigma partition, e.g. \"2,3/5\"");
  verify->add_option("--corpus", corpus_path, "corpus JSON file (default: built-in corpus)");

  CLI::App* compute = app.add_subcommand("compute", "compute an invariant of one group");
  compute->add_option("--invariant", invariant, "invariant name")->required();
  compute->add_option("--group", group_spec, "group spec (name or JSON)")->required();
  compute->add_option("--formation", formation, "formation name for F-dependent invariants");
  compute->add_option("--sigma", sigma, "sigma partition");
  compute->add_option("--arg", arg, "subgroup generators (JSON)");

  CLI::App* search = app.add_subcommand("search", "boundary search for a formation");
  search->add_option("--formation", formation, "formation name")->required();
  search->add_option("--sigma", sigma, "sigma partition");
  search->add_option("--corpus", corpus_path, "corpus JSON file");

  CLI::App* graph = app.add_subcommand("graph", "N-critical graphs of the corpus");
  graph->add_option("--corpus", corpus_path, "corpus JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return run_verify(check, formation, sigma, corpus_path);
    if (compute->parsed()) return run_compute(invariant, group_spec, formation, sigma, arg);
    if (search->parsed()) return run_search(formation, sigma, corpus_path);
    if (graph->parsed()) return run_graph(corpus_path);
  } catch (const forge::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const forge::BoundError& e) {
    std::cerr << "bound exceeded: " << e.what() << "\n";
    return 2;
  } catch (const forge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
