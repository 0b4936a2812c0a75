#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/canonical.hpp"
#include "forge/group.hpp"
#include "forge/lattice.hpp"

namespace forge {

// A partition of the primes, described by finitely many blocks; every prime
// not listed is implicitly its own singleton block.
class SigmaPartition {
 public:
  SigmaPartition() = default;

  explicit SigmaPartition(std::vector<std::vector<std::uint64_t>> blocks) {
    for (auto& b : blocks) {
      if (b.empty()) throw InputError("sigma partition: empty block");
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      for (std::uint64_t p : b)
        if (!is_prime(p))
          throw InputError("sigma partition: " + std::to_string(p) + " is not prime");
      if (b.size() > 1) blocks_.push_back(std::move(b));
    }
    std::sort(blocks_.begin(), blocks_.end());
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      for (std::size_t j = i + 1; j < blocks_.size(); ++j)
        for (std::uint64_t p : blocks_[i])
          if (std::binary_search(blocks_[j].begin(), blocks_[j].end(), p))
            throw InputError("sigma partition: blocks are not disjoint");
  }

  // "2,3/5" means {{2,3},{5}}; unlisted primes are singletons.
  static SigmaPartition parse(const std::string& text) {
    std::vector<std::vector<std::uint64_t>> blocks;
    std::vector<std::uint64_t> cur;
    std::string num;
    auto flush_num = [&]() {
      if (num.empty()) throw InputError("sigma partition: malformed '" + text + "'");
      cur.push_back(std::stoull(num));
      num.clear();
    };
    if (text.empty()) return SigmaPartition();
    for (char c : text) {
      if (c >= '0' && c <= '9') {
        num += c;
      } else if (c == ',') {
        flush_num();
      } else if (c == '/') {
        flush_num();
        blocks.push_back(std::move(cur));
        cur.clear();
      } else if (c != ' ') {
        throw InputError("sigma partition: unexpected character in '" + text + "'");
      }
    }
    flush_num();
    blocks.push_back(std::move(cur));
    return SigmaPartition(std::move(blocks));
  }

  static SigmaPartition singletons() { return SigmaPartition(); }

  std::vector<std::uint64_t> block_of(std::uint64_t p) const {
    for (const auto& b : blocks_)
      if (std::binary_search(b.begin(), b.end(), p)) return b;
    return {p};
  }

  bool same_block(std::uint64_t p, std::uint64_t q) const {
    if (p == q) return true;
    for (const auto& b : blocks_)
      if (std::binary_search(b.begin(), b.end(), p))
        return std::binary_search(b.begin(), b.end(), q);
    return false;
  }

  const std::vector<std::vector<std::uint64_t>>& listed_blocks() const { return blocks_; }

  // The induced partition of a prime subset; equal semantics on any group
  // whose order only involves those primes.
  SigmaPartition restricted_to(const std::vector<std::uint64_t>& primes) const {
    std::vector<std::vector<std::uint64_t>> blocks;
    for (const auto& b : blocks_) {
      std::vector<std::uint64_t> nb;
      for (std::uint64_t p : b)
        if (std::find(primes.begin(), primes.end(), p) != primes.end()) nb.push_back(p);
      if (!nb.empty()) blocks.push_back(std::move(nb));
    }
    return SigmaPartition(std::move(blocks));
  }

  std::string to_string() const {
    std::string out;
    for (const auto& b : blocks_) {
      if (!out.empty()) out += '/';
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(b[i]);
      }
    }
    return out;
  }

 private:
  std::vector<std::vector<std::uint64_t>> blocks_;  // sorted nontrivial blocks
};

// The blocks of sigma meeting the primes of n, one representative list each.
inline std::vector<std::vector<std::uint64_t>> sigma_blocks_of(std::uint64_t n,
                                                               const SigmaPartition& sigma) {
  std::vector<std::vector<std::uint64_t>> out;
  for (std::uint64_t p : prime_divisors(n)) {
    auto b = sigma.block_of(p);
    bool have = false;
    for (const auto& o : out)
      if (o == b) {
        have = true;
        break;
      }
    if (!have) out.push_back(std::move(b));
  }
  return out;
}

// sigma-nilpotency of the member set inside its parent: a normal Hall
// subgroup per block, cross-checked by the direct-product decomposition.
inline bool is_sigma_nilpotent_sub(const FiniteGroup& parent, const std::vector<Elem>& members,
                                   const SigmaPartition& sigma) {
  std::vector<Subgroup> halls;
  for (const auto& block : sigma_blocks_of(members.size(), sigma)) {
    Subgroup t = pi_element_closure(parent, members, block);
    if (t.order() != pi_part(members.size(), block)) return false;
    halls.push_back(std::move(t));
  }
  // Internal direct product: coprime normal Halls must commute elementwise
  // and their orders must fill the group.
  std::uint64_t prod = 1;
  for (const Subgroup& h : halls) prod *= h.order();
  bool ok = prod == members.size();
  for (std::size_t i = 0; i < halls.size() && ok; ++i)
    for (std::size_t j = i + 1; j < halls.size() && ok; ++j)
      for (Elem a : halls[i].members) {
        for (Elem b : halls[j].members)
          if (parent.mul(a, b) != parent.mul(b, a)) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
  if (!ok)
    throw Error("sigma-nilpotency: normal Hall subgroups fail the direct-product cross-check");
  return true;
}

inline bool is_sigma_nilpotent(const FiniteGroup& G, const SigmaPartition& sigma) {
  return is_sigma_nilpotent_sub(G, whole_group(G).members, sigma);
}

// ---------------------------------------------------------------------------
// Formations

// A named membership predicate over finite groups. The flags record the
// declared closure properties; they are spot-verified on the corpus by the
// test suite, not proved.
struct Formation {
  std::string name;
  bool hereditary = false;
  bool saturated = false;
  std::optional<SigmaPartition> sigma;
  std::function<bool(const FiniteGroup&)> member;
  // Optional fast path deciding membership of a subgroup inside an already
  // built parent lattice; must agree with member on the materialized group.
  std::function<bool(const SubgroupLattice&, const Subgroup&)> member_in;

  bool test(const FiniteGroup& g) const { return member(g); }
  bool test_in(const SubgroupLattice& lat, const Subgroup& h) const {
    if (member_in) return member_in(lat, h);
    return member(materialize(h).group);
  }
};

inline Formation formation_all() {
  Formation f;
  f.name = "all";
  f.hereditary = true;
  f.saturated = true;
  f.member = [](const FiniteGroup&) { return true; };
  f.member_in = [](const SubgroupLattice&, const Subgroup&) { return true; };
  return f;
}

inline Formation formation_nilpotent() {
  Formation f;
  f.name = "nilpotent";
  f.hereditary = true;
  f.saturated = true;
  f.member = [](const FiniteGroup& g) { return is_nilpotent(g); };
  f.member_in = [](const SubgroupLattice& lat, const Subgroup& h) {
    return is_nilpotent_sub(lat.group, h.members);
  };
  return f;
}

inline Formation formation_soluble() {
  Formation f;
  f.name = "soluble";
  f.hereditary = true;
  f.saturated = true;
  f.member = [](const FiniteGroup& g) { return is_soluble(g); };
  f.member_in = [](const SubgroupLattice& lat, const Subgroup& h) {
    Subgroup d = h;
    for (;;) {
      Subgroup next = derived_subgroup_of(lat.group, d);
      if (next.order() == 1) return true;
      if (next.order() == d.order()) return false;
      d = std::move(next);
    }
  };
  return f;
}

inline Formation formation_supersoluble() {
  Formation f;
  f.name = "supersoluble";
  f.hereditary = true;
  f.saturated = true;
  f.member = [](const FiniteGroup& g) { return is_supersoluble(g); };
  return f;
}

inline Formation formation_abelian() {
  Formation f;
  f.name = "abelian";
  f.hereditary = true;
  f.saturated = false;
  f.member = [](const FiniteGroup& g) { return is_abelian(g); };
  return f;
}

inline Formation formation_sigma_nilpotent(SigmaPartition sigma) {
  Formation f;
  f.name = "sigma_nilpotent";
  f.hereditary = true;
  f.saturated = true;
  f.sigma = sigma;
  f.member = [sigma](const FiniteGroup& g) { return is_sigma_nilpotent(g, sigma); };
  f.member_in = [sigma](const SubgroupLattice& lat, const Subgroup& h) {
    return is_sigma_nilpotent_sub(lat.group, h.members, sigma);
  };
  return f;
}

inline std::vector<std::string> registry_names() {
  return {"all", "nilpotent", "soluble", "supersoluble", "abelian", "sigma_nilpotent"};
}

inline Formation registry_lookup(const std::string& name,
                                 const std::optional<SigmaPartition>& sigma = std::nullopt) {
  if (name == "all") return formation_all();
  if (name == "nilpotent") return formation_nilpotent();
  if (name == "soluble") return formation_soluble();
  if (name == "supersoluble") return formation_supersoluble();
  if (name == "abelian") return formation_abelian();
  if (name == "sigma_nilpotent")
    return formation_sigma_nilpotent(sigma.value_or(SigmaPartition::singletons()));
  throw InputError("unknown formation '" + name + "'");
}

// ---------------------------------------------------------------------------
// F-central chief factors

struct CentralityWitness {
  Subgroup upper, lower;     // the chief factor H/K
  Subgroup centralizer;      // C_G(H/K)
  FiniteGroup test_group;    // (H/K) x| (G / C_G(H/K))
  bool verdict = false;
};

// C_G(H/K) = {g : [g, h] in K for all h in H}.
inline Subgroup factor_centralizer(const FiniteGroup& G, const Subgroup& H, const Subgroup& K) {
  std::vector<char> km = K.mask();
  std::vector<Elem> mem;
  for (std::size_t g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (Elem h : H.members) {
      Elem lhs = G.conj(static_cast<Elem>(g), h);
      if (!km[G.mul(lhs, G.inv(h))]) {
        ok = false;
        break;
      }
    }
    if (ok) mem.push_back(static_cast<Elem>(g));
  }
  return Subgroup{G, std::move(mem)};
}

namespace detail {

// (H/K) x| (G/C) with the conjugation action; assumes H/K is G-invariant.
inline CentralityWitness build_centrality_witness(const FiniteGroup& G, const Subgroup& H,
                                                  const Subgroup& K, const Formation& F) {
  SectionGroup sec = section_group(G, H, K);
  Subgroup c = factor_centralizer(G, H, K);
  QuotientMap q = quotient_group(G, c);
  std::vector<std::vector<Elem>> action(q.target.order());
  for (std::size_t i = 0; i < q.target.order(); ++i)
    action[i] = section_conj_action(G, sec, q.lift(static_cast<Elem>(i)));
  FiniteGroup test = semidirect_product(sec.group, q.target, action);
  const bool verdict = F.member(test);
  return CentralityWitness{H, K, std::move(c), std::move(test), verdict};
}

}  // namespace detail

// Builds the test group for a chief factor H/K of G and evaluates membership.
inline CentralityWitness is_f_central_factor(const FiniteGroup& G, const Subgroup& H,
                                             const Subgroup& K, const Formation& F) {
  if (!is_normal(G, H) || !is_normal(G, K) || !subgroup_le(K, H) || H.order() == K.order())
    throw Error("is_f_central_factor: (H, K) is not a chief factor");
  QuotientMap q = quotient_group(G, K);
  Subgroup hbar = q.image(H);
  bool chief = false;
  for (const Subgroup& m : minimal_normal_subgroups(q.target))
    if (same_members(m, hbar)) {
      chief = true;
      break;
    }
  if (!chief) throw Error("is_f_central_factor: (H, K) is not a chief factor");
  return detail::build_centrality_witness(G, H, K, F);
}

namespace detail {

// Verdicts for minimal-normal centrality tests are memoized by content:
// the same quotient groups get rebuilt across checks, and each verdict can
// cost a membership test on a group of order |H/K| * |G/C|.
struct CentralityKey {
  std::size_t order;
  std::uint64_t table_hash;
  std::vector<Elem> members;
  std::string fkey;
  bool operator==(const CentralityKey&) const = default;
};

struct CentralityKeyHash {
  std::size_t operator()(const CentralityKey& k) const {
    std::size_t h = k.order * 1099511628211ull ^ k.table_hash;
    h = h * 1099511628211ull ^ ElemVecHash{}(k.members);
    for (char c : k.fkey) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    return h;
  }
};

inline std::uint64_t table_fingerprint(const FiniteGroup& g) {
  std::uint64_t h = 1469598103934665603ull;
  for (Elem x : g.impl()->table) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

// Fast path for a minimal normal subgroup M of G (the factor M/1).
inline bool min_normal_f_central(const FiniteGroup& G, const Subgroup& M, const Formation& F) {
  if (G.impl()->table.empty())
    return detail::build_centrality_witness(G, M, trivial_subgroup(G), F).verdict;
  static std::mutex mu;
  static std::unordered_map<detail::CentralityKey, bool, detail::CentralityKeyHash> cache;
  // Sigma blocks outside pi(G) never influence the verdict: the test group's
  // primes all divide |G|. Restricting collapses equivalent partitions.
  std::string fkey = F.name + "|";
  if (F.sigma) fkey += F.sigma->restricted_to(prime_divisors(G.order())).to_string();
  detail::CentralityKey key{G.order(), detail::table_fingerprint(G), M.members, std::move(fkey)};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const bool verdict = detail::build_centrality_witness(G, M, trivial_subgroup(G), F).verdict;
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::move(key), verdict);
  return verdict;
}

// ---------------------------------------------------------------------------
// F-hypercenter

inline constexpr std::size_t kHypercenterVerifyBound = 100;

namespace detail {

// Every chief factor of G below N is F-central, decided along one
// G-composition series of N (Jordan-Holder makes one series enough).
inline bool is_f_hypercentral(const FiniteGroup& G, const Subgroup& N, const Formation& F) {
  Subgroup cur = trivial_subgroup(G);
  while (cur.order() < N.order()) {
    QuotientMap q = quotient_group(G, cur);
    Subgroup nbar = q.image(N);
    auto mins = minimal_normals_within(q.target, nbar);
    if (mins.empty()) throw Error("is_f_hypercentral: missing minimal normal subgroup");
    if (!min_normal_f_central(q.target, mins.front(), F)) return false;
    cur = q.preimage(mins.front());
  }
  return true;
}

}  // namespace detail

// Largest normal subgroup whose G-chief factors are all F-central, computed
// by the ascending F-central-socle series. For small groups the defining
// property is re-verified against all normal subgroups.
inline Subgroup f_hypercenter(const FiniteGroup& G, const Formation& F) {
  Subgroup cur = trivial_subgroup(G);
  for (;;) {
    QuotientMap q = quotient_group(G, cur);
    Subgroup step = trivial_subgroup(q.target);
    for (const Subgroup& m : minimal_normal_subgroups(q.target))
      if (min_normal_f_central(q.target, m, F)) step = join(step, m);
    if (step.order() == 1) break;
    cur = q.preimage(step);
  }
  if (G.order() <= kHypercenterVerifyBound) {
    SubgroupLattice lat = all_subgroups(G, G.order());
    for (std::size_t i = 0; i < lat.size(); ++i) {
      if (!lat.normal_flag[i]) continue;
      bool hyper = detail::is_f_hypercentral(G, lat.at(i), F);
      if (hyper != subgroup_le(lat.at(i), cur))
        throw Error("f_hypercenter: series value disagrees with the defining property");
    }
  }
  return cur;
}

// Smallest normal subgroup with quotient in F.
inline Subgroup f_residual(const FiniteGroup& G, const Formation& F, const SubgroupLattice& lat) {
  Subgroup res = whole_group(G);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!lat.normal_flag[i]) continue;
    if (subgroup_le(res, lat.at(i))) continue;  // cannot shrink the intersection
    if (F.member(quotient_group(G, lat.at(i)).target)) res = intersect(res, lat.at(i));
  }
  if (!F.member(quotient_group(G, res).target))
    throw Error("f_residual: quotient by the residual is not in the formation");
  return res;
}

// F-maximal subgroups: F-members with no larger F-member above them.
inline std::vector<Subgroup> f_maximal_subgroups(const SubgroupLattice& lat, const Formation& F) {
  std::vector<char> in_f(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) in_f[i] = F.test_in(lat, lat.at(i));
  std::vector<Subgroup> out;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!in_f[i]) continue;
    bool maximal = true;
    for (std::size_t j = i + 1; j < lat.size() && maximal; ++j)
      if (in_f[j] && lat.at(j).order() > lat.at(i).order() &&
          subset_of(lat.at(i).members, lat.at(j).members))
        maximal = false;
    if (maximal) out.push_back(lat.at(i));
  }
  return out;
}

inline Subgroup int_f(const SubgroupLattice& lat, const Formation& F) {
  Subgroup r = whole_group(lat.group);
  for (const Subgroup& m : f_maximal_subgroups(lat, F)) r = intersect(r, m);
  return r;
}

// Intersection of the maximal subgroups M with G/Core_G(M) not in F;
// G itself when no maximal subgroup qualifies.
inline Subgroup delta_f(const SubgroupLattice& lat, const Formation& F) {
  const FiniteGroup& G = lat.group;
  Subgroup r = whole_group(G);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!lat.maximal_flag[i]) continue;
    Subgroup core = normal_core(G, lat.at(i));
    if (!F.member(quotient_group(G, core).target)) r = intersect(r, lat.at(i));
  }
  return r;
}

}  // namespace forge
