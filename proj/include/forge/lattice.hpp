#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/arith.hpp"
#include "forge/error.hpp"
#include "forge/group.hpp"

namespace forge {

inline constexpr std::size_t kDefaultLatticeBound = 200;

// Effective lattice bound; FORGE_LATTICE_BOUND overrides the default.
inline std::size_t lattice_bound() {
  if (const char* env = std::getenv("FORGE_LATTICE_BOUND")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw InputError("FORGE_LATTICE_BOUND must be a positive integer");
  }
  return kDefaultLatticeBound;
}

// The complete subgroup lattice of a group, sorted by (order, members).
struct SubgroupLattice {
  FiniteGroup group;
  std::vector<Subgroup> subs;
  std::vector<char> normal_flag;
  std::vector<char> maximal_flag;                 // maximal proper subgroups
  std::vector<std::vector<Elem>> gens_of;         // per-subgroup generating set

  std::size_t size() const { return subs.size(); }
  const Subgroup& at(std::size_t i) const { return subs[i]; }
  std::size_t whole_index() const { return subs.size() - 1; }

  int find(const std::vector<Elem>& members) const {
    auto it = index_.find(members);
    return it == index_.end() ? -1 : it->second;
  }

  // Index of a member set that must be present (any subgroup of the parent).
  std::size_t locate(const std::vector<Elem>& members) const {
    int i = find(members);
    if (i < 0) throw Error("subgroup lattice is missing a subgroup (corrupt lattice)");
    return static_cast<std::size_t>(i);
  }
  std::size_t locate(const Subgroup& H) const { return locate(H.members); }

  std::vector<std::size_t> normal_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (normal_flag[i]) out.push_back(i);
    return out;
  }

  std::vector<Subgroup> normal_subgroups() const {
    std::vector<Subgroup> out;
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (normal_flag[i]) out.push_back(subs[i]);
    return out;
  }

  std::vector<Subgroup> maximal_subgroups() const {
    std::vector<Subgroup> out;
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (maximal_flag[i]) out.push_back(subs[i]);
    return out;
  }

  // All T with H <= T <= G (H itself and G included).
  std::vector<std::size_t> interval_above(std::size_t h) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subset_of(subs[h].members, subs[i].members)) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> contained_in(std::size_t h) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subset_of(subs[i].members, subs[h].members)) out.push_back(i);
    return out;
  }

  std::unordered_map<std::vector<Elem>, int, detail::ElemVecHash> index_;
};

// Complete subgroup enumeration: seed with every cyclic subgroup, then close
// under joins until fixpoint. Every subgroup is the join of its cyclic
// subgroups, so the fixpoint is the full lattice.
inline SubgroupLattice all_subgroups(const FiniteGroup& G, std::size_t bound = 0) {
  if (bound == 0) bound = lattice_bound();
  if (G.order() > bound)
    throw BoundError("all_subgroups: order " + std::to_string(G.order()) +
                     " exceeds lattice bound " + std::to_string(bound));

  std::unordered_map<std::vector<Elem>, int, detail::ElemVecHash> index;
  std::vector<Subgroup> subs;
  auto add = [&](Subgroup s) -> bool {
    auto it = index.find(s.members);
    if (it != index.end()) return false;
    index.emplace(s.members, static_cast<int>(subs.size()));
    subs.push_back(std::move(s));
    return true;
  };

  std::vector<Subgroup> cyclic;
  for (std::size_t x = 0; x < G.order(); ++x) {
    Subgroup c = subgroup_closure(G, {static_cast<Elem>(x)});
    if (index.find(c.members) == index.end()) cyclic.push_back(c);
    add(std::move(c));
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (const Subgroup& c : cyclic) {
      if (subset_of(c.members, subs[i].members)) continue;
      add(join(subs[i], c));
    }
  }

  SubgroupLattice lat;
  lat.group = G;
  lat.subs = std::move(subs);
  std::sort(lat.subs.begin(), lat.subs.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  lat.index_.reserve(lat.subs.size());
  for (std::size_t i = 0; i < lat.subs.size(); ++i)
    lat.index_.emplace(lat.subs[i].members, static_cast<int>(i));

  lat.normal_flag.resize(lat.subs.size());
  lat.gens_of.resize(lat.subs.size());
  for (std::size_t i = 0; i < lat.subs.size(); ++i) {
    lat.normal_flag[i] = is_normal(G, lat.subs[i]);
    lat.gens_of[i] = generating_set(G, lat.subs[i].members);
  }
  lat.maximal_flag.assign(lat.subs.size(), 0);
  for (std::size_t i = 0; i + 1 < lat.subs.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = i + 1; j + 1 < lat.subs.size() && maximal; ++j)
      if (lat.subs[j].order() > lat.subs[i].order() &&
          subset_of(lat.subs[i].members, lat.subs[j].members))
        maximal = false;
    lat.maximal_flag[i] = maximal;
  }
  return lat;
}

// Minimal normal subgroups, computed from single-element normal closures
// (no lattice needed). A minimal normal subgroup equals the normal closure
// of each of its nontrivial elements.
inline std::vector<Subgroup> minimal_normal_subgroups(const FiniteGroup& G) {
  std::vector<Elem> gens(G.generators().begin(), G.generators().end());
  if (gens.empty() && G.order() > 1) gens = generating_set(G, whole_group(G).members);
  std::unordered_map<std::vector<Elem>, char, detail::ElemVecHash> seen;
  std::vector<Subgroup> cands;
  for (std::size_t x = 1; x < G.order(); ++x) {
    Elem xe = static_cast<Elem>(x);
    Subgroup n = normal_closure(G, gens, std::span<const Elem>(&xe, 1));
    if (seen.emplace(n.members, 1).second) cands.push_back(std::move(n));
  }
  std::vector<Subgroup> out;
  for (const Subgroup& c : cands) {
    bool minimal = true;
    for (const Subgroup& d : cands) {
      if (d.order() < c.order() && subgroup_le(d, c)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return out;
}

// A maximal chain of normal subgroups of G; every factor is a chief factor.
struct ChiefSeries {
  std::vector<Subgroup> terms;  // 1 = terms[0] < ... < terms.back() = G
};

inline ChiefSeries chief_series(const FiniteGroup& G) {
  ChiefSeries series;
  series.terms.push_back(trivial_subgroup(G));
  while (series.terms.back().order() < G.order()) {
    QuotientMap q = quotient_group(G, series.terms.back());
    auto mins = minimal_normal_subgroups(q.target);
    if (mins.empty()) throw Error("chief_series: no minimal normal subgroup (kernel bug)");
    series.terms.push_back(q.preimage(mins.front()));
  }
  return series;
}

inline std::vector<Subgroup> sylow_subgroups(const SubgroupLattice& lat, std::uint64_t p) {
  std::vector<Subgroup> out;
  if (lat.group.order() % p != 0) return out;
  const std::uint64_t target = p_part(lat.group.order(), p);
  for (const Subgroup& s : lat.subs)
    if (s.order() == target) out.push_back(s);
  return out;
}

inline std::vector<Subgroup> all_hall_subgroups(const SubgroupLattice& lat,
                                                const std::vector<std::uint64_t>& pi) {
  const std::uint64_t target = pi_part(lat.group.order(), pi);
  std::vector<Subgroup> out;
  for (const Subgroup& s : lat.subs)
    if (s.order() == target) out.push_back(s);
  return out;
}

inline std::optional<Subgroup> hall_subgroup(const SubgroupLattice& lat,
                                             const std::vector<std::uint64_t>& pi) {
  auto all = all_hall_subgroups(lat, pi);
  if (all.empty()) return std::nullopt;
  return all.front();
}

// All <x> with x of prime-power order > 1, deduplicated.
inline std::vector<Subgroup> cyclic_primary_subgroups(const FiniteGroup& G) {
  std::unordered_map<std::vector<Elem>, char, detail::ElemVecHash> seen;
  std::vector<Subgroup> out;
  for (std::size_t x = 1; x < G.order(); ++x) {
    if (!is_prime_power(G.element_order(static_cast<Elem>(x)))) continue;
    Subgroup c = subgroup_closure(G, {static_cast<Elem>(x)});
    if (seen.emplace(c.members, 1).second) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return out;
}

inline std::vector<Subgroup> intermediate_subgroups(const SubgroupLattice& lat,
                                                    const Subgroup& H) {
  std::vector<Subgroup> out;
  for (const Subgroup& s : lat.subs)
    if (subset_of(H.members, s.members)) out.push_back(s);
  return out;
}

}  // namespace forge
