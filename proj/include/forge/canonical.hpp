#pragma once

#include <numeric>
#include <vector>

#include "forge/arith.hpp"
#include "forge/group.hpp"
#include "forge/lattice.hpp"

namespace forge {

// ---------------------------------------------------------------------------
// Structural predicates

inline bool is_abelian(const FiniteGroup& G) {
  for (std::size_t a = 1; a < G.order(); ++a)
    for (std::size_t b = a + 1; b < G.order(); ++b)
      if (G.mul(static_cast<Elem>(a), static_cast<Elem>(b)) !=
          G.mul(static_cast<Elem>(b), static_cast<Elem>(a)))
        return false;
  return true;
}

// Subgroup generated by all elements of H whose order is a pi-number.
inline Subgroup pi_element_closure(const FiniteGroup& parent, const std::vector<Elem>& members,
                                   const std::vector<std::uint64_t>& pi) {
  std::vector<Elem> seed;
  for (Elem x : members)
    if (is_pi_number(parent.element_order(x), pi)) seed.push_back(x);
  return subgroup_closure(parent, seed);
}

// H (given by its members inside parent) has a normal Hall pi-subgroup iff
// the subgroup generated by all its pi-elements has exactly the pi-part of
// |H| as its order: that subgroup contains every pi-element of H, so a
// normal Hall pi-subgroup must equal it.
inline bool has_normal_hall_sub(const FiniteGroup& parent, const std::vector<Elem>& members,
                                const std::vector<std::uint64_t>& pi) {
  return pi_element_closure(parent, members, pi).order() == pi_part(members.size(), pi);
}

inline bool is_nilpotent_sub(const FiniteGroup& parent, const std::vector<Elem>& members) {
  for (std::uint64_t p : prime_divisors(members.size()))
    if (!has_normal_hall_sub(parent, members, {p})) return false;
  return true;
}

// Nilpotent iff every Sylow subgroup is normal.
inline bool is_nilpotent(const FiniteGroup& G) {
  return is_nilpotent_sub(G, whole_group(G).members);
}

inline std::vector<Elem> subgroup_generators(const FiniteGroup& G, const Subgroup& H) {
  if (H.is_whole()) {
    std::vector<Elem> gens(G.generators().begin(), G.generators().end());
    if (!gens.empty() || G.order() == 1) return gens;
  }
  return generating_set(G, H.members);
}

// [H, H] as a subgroup of the parent: the closure of generator commutators
// under conjugation by H.
inline Subgroup derived_subgroup_of(const FiniteGroup& G, const Subgroup& H) {
  std::vector<Elem> gens = subgroup_generators(G, H);
  std::vector<Elem> seed;
  for (Elem a : gens)
    for (Elem b : gens) {
      Elem c = G.commutator(a, b);
      if (c != 0) seed.push_back(c);
    }
  return normal_closure(G, gens, seed);
}

inline Subgroup derived_subgroup(const FiniteGroup& G) {
  return derived_subgroup_of(G, whole_group(G));
}

inline bool is_soluble(const FiniteGroup& G) {
  Subgroup d = whole_group(G);
  for (;;) {
    Subgroup next = derived_subgroup_of(G, d);
    if (next.order() == 1) return true;
    if (next.order() == d.order()) return false;
    d = std::move(next);
  }
}

inline bool is_pi_group(const FiniteGroup& G, const std::vector<std::uint64_t>& pi) {
  return is_pi_number(G.order(), pi);
}

// ---------------------------------------------------------------------------
// Classical distinguished subgroups

// Terminal term of the upper central series.
inline Subgroup hypercenter(const FiniteGroup& G) {
  Subgroup z = trivial_subgroup(G);
  for (;;) {
    QuotientMap q = quotient_group(G, z);
    Subgroup zq = center_subgroup(q.target);
    if (zq.order() == 1) return z;
    z = q.preimage(zq);
  }
}

// Intersection of all maximal subgroups (G itself when none exist).
inline Subgroup frattini(const SubgroupLattice& lat) {
  Subgroup phi = whole_group(lat.group);
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (lat.maximal_flag[i]) phi = intersect(phi, lat.at(i));
  return phi;
}

// Join of all minimal normal subgroups.
inline Subgroup socle(const FiniteGroup& G) {
  Subgroup s = trivial_subgroup(G);
  for (const Subgroup& m : minimal_normal_subgroups(G)) s = join(s, m);
  return s;
}

// Largest normal pi-subgroup, built by pulling back pi-minimal-normals.
inline Subgroup o_pi(const FiniteGroup& G, const std::vector<std::uint64_t>& pi) {
  Subgroup cur = trivial_subgroup(G);
  for (;;) {
    QuotientMap q = quotient_group(G, cur);
    Subgroup step = trivial_subgroup(q.target);
    for (const Subgroup& m : minimal_normal_subgroups(q.target))
      if (is_pi_number(m.order(), pi)) step = join(step, m);
    if (step.order() == 1) return cur;
    cur = q.preimage(step);
  }
}

inline Subgroup o_p(const FiniteGroup& G, std::uint64_t p) { return o_pi(G, {p}); }

// Largest normal nilpotent subgroup: the join of all normal nilpotent
// subgroups, scanned from the lattice.
inline Subgroup fitting(const SubgroupLattice& lat) {
  const FiniteGroup& G = lat.group;
  Subgroup f = trivial_subgroup(G);
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (lat.normal_flag[i] && is_nilpotent_sub(G, lat.at(i).members)) f = join(f, lat.at(i));
  if (!is_normal(G, f) || !is_nilpotent_sub(G, f.members))
    throw Error("fitting: join of normal nilpotent subgroups is not normal nilpotent");
  return f;
}

// Minimal normal subgroups of G that lie inside the given normal subgroup.
inline std::vector<Subgroup> minimal_normals_within(const FiniteGroup& G,
                                                    const Subgroup& N) {
  std::vector<Elem> gens(G.generators().begin(), G.generators().end());
  if (gens.empty() && G.order() > 1) gens = generating_set(G, whole_group(G).members);
  std::unordered_map<std::vector<Elem>, char, detail::ElemVecHash> seen;
  std::vector<Subgroup> cands;
  for (Elem x : N.members) {
    if (x == 0) continue;
    Subgroup c = normal_closure(G, gens, std::span<const Elem>(&x, 1));
    if (seen.emplace(c.members, 1).second) cands.push_back(std::move(c));
  }
  std::vector<Subgroup> out;
  for (const Subgroup& c : cands) {
    bool minimal = true;
    for (const Subgroup& d : cands)
      if (d.order() < c.order() && subgroup_le(d, c)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return out;
}

// Bender's formula: F*(G)/F(G) = Soc(F(G) C_G(F(G)) / F(G)), the socle taken
// as a G-section (join of minimal G-invariant subgroups of N/F).
inline Subgroup generalized_fitting(const FiniteGroup& G, const SubgroupLattice& lat) {
  Subgroup f = fitting(lat);
  Subgroup c = centralizer(G, f);
  Subgroup n = join(f, c);
  QuotientMap q = quotient_group(G, f);
  Subgroup nbar = q.image(n);
  Subgroup soc = trivial_subgroup(q.target);
  for (const Subgroup& m : minimal_normals_within(q.target, nbar)) soc = join(soc, m);
  return q.preimage(soc);
}

// F~(G): the preimage of Soc(G/Phi(G)). Also computes Forster's form
// F*(G/Phi(G)) and requires the two to agree.
inline Subgroup f_tilde(const FiniteGroup& G, const SubgroupLattice& lat,
                        std::size_t bound = 0) {
  Subgroup phi = frattini(lat);
  QuotientMap q = quotient_group(G, phi);
  Subgroup result = q.preimage(socle(q.target));
  SubgroupLattice qlat = all_subgroups(q.target, bound ? bound : G.order());
  Subgroup forster = q.preimage(generalized_fitting(q.target, qlat));
  if (!same_members(result, forster))
    throw Error("f_tilde: Schmid/Shemetkov and Forster definitions disagree (kernel bug)");
  return result;
}

// Chief factors all of prime order + soluble. The chief series is computed
// bottom-up; Jordan-Holder invariance makes one series enough.
inline bool is_supersoluble(const FiniteGroup& G) {
  if (!is_soluble(G)) return false;
  ChiefSeries cs = chief_series(G);
  for (std::size_t i = 1; i < cs.terms.size(); ++i) {
    std::size_t factor = cs.terms[i].order() / cs.terms[i - 1].order();
    if (!is_prime(factor)) return false;
  }
  return true;
}

inline std::size_t exponent_of(const FiniteGroup& G) {
  std::size_t e = 1;
  for (std::size_t x = 0; x < G.order(); ++x)
    e = std::lcm(e, G.element_order(static_cast<Elem>(x)));
  return e;
}

// Per-group record of the distinguished subgroups.
struct CanonicalReport {
  Subgroup center, hypercenter, frattini, fitting, socle, fstar, ftilde;
};

inline CanonicalReport canonical_report(const FiniteGroup& G, const SubgroupLattice& lat) {
  return CanonicalReport{center_subgroup(G), forge::hypercenter(G),  forge::frattini(lat),
                         forge::fitting(lat), forge::socle(G),
                         generalized_fitting(G, lat), f_tilde(G, lat)};
}

}  // namespace forge
