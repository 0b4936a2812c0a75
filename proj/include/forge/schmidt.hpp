#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forge/canonical.hpp"
#include "forge/formation.hpp"
#include "forge/group.hpp"
#include "forge/lattice.hpp"

namespace forge {

// Directed graph on primes: (p, q) is an edge iff a Schmidt (p, q)-subgroup
// exists (normal Sylow p, cyclic Sylow q).
struct NCriticalGraph {
  std::vector<std::uint64_t> vertices;                       // sorted
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;  // sorted
  // Which groups contributed each edge (corpus graphs only).
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<std::string>> provenance;

  bool has_edge(std::uint64_t p, std::uint64_t q) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(p, q));
  }
};

// Maximal subgroups of the member set S, read off the lattice.
inline std::vector<std::size_t> maximal_indices_within(const SubgroupLattice& lat,
                                                       const std::vector<Elem>& members) {
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (lat.at(i).order() < members.size() && subset_of(lat.at(i).members, members))
      inside.push_back(i);
  std::vector<std::size_t> out;
  for (std::size_t i : inside) {
    bool maximal = true;
    for (std::size_t j : inside)
      if (j != i && lat.at(j).order() > lat.at(i).order() &&
          subset_of(lat.at(i).members, lat.at(j).members)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(i);
  }
  return out;
}

// Schmidt group: not nilpotent, but every maximal (hence every proper)
// subgroup nilpotent.
inline bool is_schmidt_sub(const SubgroupLattice& lat, const std::vector<Elem>& members) {
  if (is_nilpotent_sub(lat.group, members)) return false;
  for (std::size_t m : maximal_indices_within(lat, members))
    if (!is_nilpotent_sub(lat.group, lat.at(m).members)) return false;
  return true;
}

// (p, q) with the normal Sylow p-subgroup; requires a Schmidt group.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> schmidt_signature_sub(
    const SubgroupLattice& lat, const std::vector<Elem>& members) {
  if (!is_schmidt_sub(lat, members)) return std::nullopt;
  auto primes = prime_divisors(members.size());
  if (primes.size() != 2)
    throw Error("schmidt_signature: Schmidt group without exactly two primes (kernel bug)");
  const bool n0 = has_normal_hall_sub(lat.group, members, {primes[0]});
  const bool n1 = has_normal_hall_sub(lat.group, members, {primes[1]});
  if (n0 == n1)
    throw Error("schmidt_signature: expected exactly one normal Sylow subgroup (kernel bug)");
  return n0 ? std::make_pair(primes[0], primes[1]) : std::make_pair(primes[1], primes[0]);
}

inline bool is_schmidt(const FiniteGroup& G) {
  SubgroupLattice lat = all_subgroups(G);
  return is_schmidt_sub(lat, whole_group(G).members);
}

inline std::optional<std::pair<std::uint64_t, std::uint64_t>> schmidt_signature(
    const FiniteGroup& G) {
  SubgroupLattice lat = all_subgroups(G);
  return schmidt_signature_sub(lat, whole_group(G).members);
}

// Scan every subgroup for Schmidt members and collect their signatures.
inline NCriticalGraph n_critical_graph(const SubgroupLattice& lat) {
  NCriticalGraph g;
  g.vertices = prime_divisors(lat.group.order());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (auto sig = schmidt_signature_sub(lat, lat.at(i).members)) edges.push_back(*sig);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  return g;
}

inline NCriticalGraph corpus_graph(
    const std::vector<std::pair<std::string, NCriticalGraph>>& graphs) {
  NCriticalGraph g;
  for (const auto& [label, gg] : graphs) {
    g.vertices.insert(g.vertices.end(), gg.vertices.begin(), gg.vertices.end());
    for (const auto& e : gg.edges) {
      g.edges.push_back(e);
      g.provenance[e].push_back(label);
    }
  }
  std::sort(g.vertices.begin(), g.vertices.end());
  g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

// Proposition 5.4 consequence: when no edge of the N-critical graph joins
// distinct sigma-blocks, G must be the internal direct product of its normal
// Hall subgroups over the blocks meeting pi(G). Vacuously true when an edge
// crosses blocks.
inline bool sigma_decomposition_check(const SubgroupLattice& lat, const SigmaPartition& sigma) {
  const FiniteGroup& G = lat.group;
  NCriticalGraph graph = n_critical_graph(lat);
  for (const auto& [p, q] : graph.edges)
    if (!sigma.same_block(p, q)) return true;
  const std::vector<Elem> all = whole_group(G).members;
  std::vector<Subgroup> halls;
  std::uint64_t prod = 1;
  for (const auto& block : sigma_blocks_of(G.order(), sigma)) {
    Subgroup t = pi_element_closure(G, all, block);
    if (t.order() != pi_part(G.order(), block)) return false;
    if (!is_normal(G, t)) return false;
    prod *= t.order();
    halls.push_back(std::move(t));
  }
  if (prod != G.order()) return false;
  for (std::size_t i = 0; i < halls.size(); ++i)
    for (std::size_t j = i + 1; j < halls.size(); ++j)
      for (Elem a : halls[i].members)
        for (Elem b : halls[j].members)
          if (G.mul(a, b) != G.mul(b, a)) return false;
  return true;
}

}  // namespace forge
