#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/error.hpp"
#include "forge/group.hpp"
#include "forge/groupspec.hpp"

namespace forge {

struct CorpusEntry {
  std::string label;
  std::string note;
  FiniteGroup group;
};

// The shipped corpus. Each entry records why it is included; together the
// entries cover nilpotent, supersoluble-not-nilpotent, soluble-not-
// supersoluble, non-soluble, and Schmidt exemplars across small orders.
inline const char* default_corpus_json() {
  return R"JSON([
  {"name": "C1",      "note": "trivial group; identity edge cases"},
  {"name": "C2",      "note": "smallest group; prime cyclic"},
  {"name": "C3",      "note": "odd prime cyclic"},
  {"name": "C4",      "note": "cyclic prime power; one cyclic primary subgroup tower"},
  {"name": "C6",      "note": "cyclic with two primes; two chief series"},
  {"name": "C12",     "note": "nilpotent non-primary cyclic; sigma-block interactions"},
  {"label": "V4", "degree": 4, "generators": [[1,0,3,2],[2,3,0,1]],
   "note": "elementary abelian 2-rank 2, given by raw generators"},
  {"name": "C2xC2xC2","note": "elementary abelian of rank 3; many maximal subgroups"},
  {"name": "S3",      "note": "smallest non-nilpotent; Schmidt (3,2)-group; supersoluble"},
  {"name": "D8",      "note": "nonabelian 2-group; nontrivial Frattini subgroup"},
  {"name": "Q8",      "note": "quaternion; unique involution; Phi = Z = C2"},
  {"name": "D10",     "note": "Schmidt (5,2)-group; Frobenius of order 10"},
  {"name": "D12",     "note": "C2 x S3; Schmidt subgroup S3 inside a larger soluble group"},
  {"name": "A4",      "note": "Schmidt (2,3)-group; soluble but not supersoluble"},
  {"name": "Dic3",    "note": "dicyclic C3:C4; supersoluble with cyclic Sylow 2"},
  {"name": "S4",      "note": "soluble, not supersoluble; trivial center and Frattini"},
  {"name": "SL23",    "note": "SL(2,3) on the 8 nonzero vectors of F_3^2; Schmidt (2,3) with Phi = C2"},
  {"name": "C7:C3",   "note": "Schmidt (7,3)-group of odd order 21"},
  {"name": "S3xC5",   "note": "sigma-nilpotent for sigma = {2,3}/{5}; direct product decomposition"},
  {"name": "A4xC2",   "note": "Fitting subgroup V4 x C2 spans two primes"},
  {"name": "A5",      "note": "nonabelian simple; F = 1, F* = G"},
  {"name": "S5",      "note": "almost simple; largest corpus lattice (bound-gated)"},
  {"name": "F20",     "note": "Frobenius C5:C4; supersoluble with faithful Sylow 2 action"}
])JSON";
}

inline std::vector<CorpusEntry> load_corpus(const Json& arr,
                                            std::size_t order_bound = kDefaultOrderBound) {
  if (!arr.is_array() || arr.empty())
    throw InputError("corpus must be a nonempty JSON array of group specs");
  std::vector<CorpusEntry> out;
  for (const Json& j : arr) {
    GroupSpec spec = parse_group_spec(j);
    CorpusEntry e;
    e.label = spec.label;
    if (j.is_object() && j.contains("note")) e.note = j.at("note").get<std::string>();
    e.group = build_group(spec, order_bound);
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.label < b.label; });
  for (std::size_t i = 0; i + 1 < out.size(); ++i)
    if (out[i].label == out[i + 1].label)
      throw InputError("corpus labels must be unique: '" + out[i].label + "'");
  return out;
}

inline std::vector<CorpusEntry> load_corpus_text(const std::string& text,
                                                 std::size_t order_bound = kDefaultOrderBound) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("corpus file is not valid JSON");
  return load_corpus(j, order_bound);
}

inline std::vector<CorpusEntry> default_corpus() {
  return load_corpus_text(default_corpus_json());
}

}  // namespace forge
