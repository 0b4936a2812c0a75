#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "forge/formation.hpp"
#include "forge/group.hpp"
#include "forge/lattice.hpp"

namespace forge {

// Core_T(M) for subgroups M <= T of a common parent.
inline Subgroup core_in(const FiniteGroup& G, const Subgroup& T, const Subgroup& M) {
  std::vector<char> core = M.mask();
  for (Elem t : T.members) {
    std::vector<char> cm(G.order(), 0);
    for (Elem m : M.members) cm[G.conj(t, m)] = 1;
    for (std::size_t x = 0; x < G.order(); ++x) core[x] = core[x] && cm[x];
  }
  std::vector<Elem> mem;
  for (std::size_t x = 0; x < G.order(); ++x)
    if (core[x]) mem.push_back(static_cast<Elem>(x));
  return Subgroup{G, std::move(mem)};
}

// A witness chain H = links[0] <= ... <= links.back(), each step either a
// normal step or a quotient-over-core-in-F step.
struct SubnormalChain {
  enum class Step : std::uint8_t { kNormal, kQuotientInF };
  std::vector<Subgroup> links;
  std::vector<Step> steps;  // steps[i] justifies links[i] <= links[i+1]
};

// Decision state for K-F-subnormality questions inside one subgroup lattice.
// The recursion ranges over all intermediate subgroups; step verdicts and
// per-base tables are memoized, so repeated queries are cheap.
class KsnContext {
 public:
  KsnContext(const SubgroupLattice& lat, Formation f) : lat_(&lat), f_(std::move(f)) {}

  const SubgroupLattice& lattice() const { return *lat_; }
  const Formation& formation() const { return f_; }

  bool step_is_normal(std::size_t m, std::size_t t) {
    const std::uint64_t key = (static_cast<std::uint64_t>(m) << 32) | t;
    auto it = normal_memo_.find(key);
    if (it != normal_memo_.end()) return it->second;
    const FiniteGroup& G = lat_->group;
    bool ok = true;
    std::vector<char> mm = lat_->at(m).mask();
    for (Elem g : lat_->gens_of[t]) {
      for (Elem x : lat_->at(m).members)
        if (!mm[G.conj(g, x)]) {
          ok = false;
          break;
        }
      if (!ok) break;
    }
    normal_memo_.emplace(key, ok);
    return ok;
  }

  // Step M -> T of a chain: M normal in T, or T/Core_T(M) in F.
  bool step_ok(std::size_t m, std::size_t t) {
    const std::uint64_t key = (static_cast<std::uint64_t>(m) << 32) | t;
    auto it = step_memo_.find(key);
    if (it != step_memo_.end()) return it->second;
    bool ok = step_is_normal(m, t);
    if (!ok) {
      Subgroup core = core_in(lat_->group, lat_->at(t), lat_->at(m));
      SectionGroup q = section_group(lat_->group, lat_->at(t), core);
      ok = f_.member(q.group);
    }
    step_memo_.emplace(key, ok);
    return ok;
  }

  // H K-F-sn T for lattice indices; requires subs[h] <= subs[t].
  bool subnormal(std::size_t h, std::size_t t) {
    const BaseTable& bt = table(h);
    return bt.sn[t] != 0;
  }

  std::optional<SubnormalChain> chain(std::size_t h, std::size_t t) {
    const BaseTable& bt = table(h);
    if (!bt.sn[t]) return std::nullopt;
    std::vector<std::size_t> path;
    for (std::size_t cur = t; cur != h; cur = static_cast<std::size_t>(bt.pred[cur]))
      path.push_back(cur);
    path.push_back(h);
    std::reverse(path.begin(), path.end());
    SubnormalChain out;
    for (std::size_t i : path) out.links.push_back(lat_->at(i));
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      // Re-verify the declared step kind on construction.
      if (step_is_normal(path[i], path[i + 1])) {
        out.steps.push_back(SubnormalChain::Step::kNormal);
      } else {
        Subgroup core = core_in(lat_->group, lat_->at(path[i + 1]), lat_->at(path[i]));
        SectionGroup q = section_group(lat_->group, lat_->at(path[i + 1]), core);
        if (!f_.member(q.group))
          throw Error("subnormal chain re-verification failed (kernel bug)");
        out.steps.push_back(SubnormalChain::Step::kQuotientInF);
      }
    }
    return out;
  }

  // Indices of the maximal T with subs[h] K-F-sn T.
  std::vector<std::size_t> weak_subnormalizer_indices(std::size_t h) {
    const BaseTable& bt = table(h);
    std::vector<std::size_t> in;
    for (std::size_t i = 0; i < lat_->size(); ++i)
      if (bt.sn[i]) in.push_back(i);
    std::vector<std::size_t> out;
    for (std::size_t i : in) {
      bool maximal = true;
      for (std::size_t j : in)
        if (j != i && lat_->at(j).order() > lat_->at(i).order() &&
            subset_of(lat_->at(i).members, lat_->at(j).members)) {
          maximal = false;
          break;
        }
      if (maximal) out.push_back(i);
    }
    return out;
  }

 private:
  struct BaseTable {
    std::vector<std::int8_t> sn;
    std::vector<std::int32_t> pred;
  };

  const BaseTable& table(std::size_t h) {
    auto it = tables_.find(h);
    if (it != tables_.end()) return it->second;
    BaseTable bt;
    bt.sn.assign(lat_->size(), 0);
    bt.pred.assign(lat_->size(), -1);
    bt.sn[h] = 1;
    const auto& base = lat_->at(h).members;
    std::vector<std::size_t> interval;
    for (std::size_t i = 0; i < lat_->size(); ++i)
      if (subset_of(base, lat_->at(i).members)) interval.push_back(i);
    // Indices are sorted by order, so strict subgroups precede supergroups.
    for (std::size_t ti = 0; ti < interval.size(); ++ti) {
      const std::size_t t = interval[ti];
      if (t == h) continue;
      for (std::size_t mi = 0; mi < ti && !bt.sn[t]; ++mi) {
        const std::size_t m = interval[mi];
        if (!bt.sn[m]) continue;
        if (lat_->at(m).order() == lat_->at(t).order()) continue;
        if (!subset_of(lat_->at(m).members, lat_->at(t).members)) continue;
        if (step_ok(m, t)) {
          bt.sn[t] = 1;
          bt.pred[t] = static_cast<std::int32_t>(m);
        }
      }
    }
    return tables_.emplace(h, std::move(bt)).first->second;
  }

  const SubgroupLattice* lat_;
  Formation f_;
  std::unordered_map<std::uint64_t, bool> step_memo_;
  std::unordered_map<std::uint64_t, bool> normal_memo_;
  std::unordered_map<std::size_t, BaseTable> tables_;
};

// H K-F-sn G with a witness chain, or absent.
inline std::optional<SubnormalChain> is_k_f_subnormal(KsnContext& ctx, const Subgroup& H) {
  const SubgroupLattice& lat = ctx.lattice();
  return ctx.chain(lat.locate(H), lat.whole_index());
}

inline bool is_k_f_subnormal_in(KsnContext& ctx, const Subgroup& H, const Subgroup& T) {
  if (!subgroup_le(H, T)) throw Error("is_k_f_subnormal_in: H is not a subgroup of T");
  const SubgroupLattice& lat = ctx.lattice();
  return ctx.subnormal(lat.locate(H), lat.locate(T));
}

// Definition 1: H is K-F-subnormal in <H, R>.
inline bool is_r_k_f_subnormal(KsnContext& ctx, const Subgroup& H, const Subgroup& R) {
  return is_k_f_subnormal_in(ctx, H, join(H, R));
}

struct WeakSubnormalizerSet {
  Subgroup base;
  std::vector<Subgroup> maximals;
};

inline WeakSubnormalizerSet weak_k_f_subnormalizers(KsnContext& ctx, const Subgroup& H) {
  const SubgroupLattice& lat = ctx.lattice();
  WeakSubnormalizerSet out{H, {}};
  for (std::size_t i : ctx.weak_subnormalizer_indices(lat.locate(H))) out.maximals.push_back(lat.at(i));
  return out;
}

// Sylow subgroups of a member set, read off the parent lattice.
inline std::vector<std::size_t> sylow_indices_within(const SubgroupLattice& lat,
                                                     const std::vector<Elem>& members) {
  std::vector<std::size_t> out;
  for (std::uint64_t p : prime_divisors(members.size())) {
    const std::uint64_t target = p_part(members.size(), p);
    for (std::size_t i = 0; i < lat.size(); ++i)
      if (lat.at(i).order() == target && subset_of(lat.at(i).members, members)) out.push_back(i);
  }
  return out;
}

inline std::vector<std::size_t> cyclic_primary_indices_within(const SubgroupLattice& lat,
                                                              const std::vector<Elem>& members) {
  std::unordered_map<std::vector<Elem>, char, detail::ElemVecHash> seen;
  std::vector<std::size_t> out;
  const FiniteGroup& G = lat.group;
  for (Elem x : members) {
    if (x == 0 || !is_prime_power(G.element_order(x))) continue;
    Subgroup c = subgroup_closure(G, {x});
    if (seen.emplace(c.members, 1).second) out.push_back(lat.locate(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline void require_hereditary(const Formation& f, const char* who) {
  if (!f.hereditary) throw Error(std::string(who) + ": formation must be hereditary");
}

// Proposition p1 cross-check: for hereditary F the normal subgroups N with
// P K-F-sn PN for every base P are exactly those inside R, so verify the
// full equivalence over all normal subgroups.
inline void check_largest_normal(KsnContext& ctx, const Subgroup& R,
                                 const std::vector<std::size_t>& bases, const char* who) {
  const SubgroupLattice& lat = ctx.lattice();
  if (!is_normal(lat.group, R)) throw Error(std::string(who) + ": intersection is not normal");
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!lat.normal_flag[i]) continue;
    const Subgroup& n = lat.at(i);
    bool property = true;
    for (std::size_t b : bases) {
      Subgroup pn = join(lat.at(b), n);
      if (!ctx.subnormal(b, lat.locate(pn))) {
        property = false;
        break;
      }
    }
    if (property != subgroup_le(n, R))
      throw Error(std::string(who) + ": largest-normal characterization failed");
  }
}

inline Subgroup intersect_weak_subnormalizers(KsnContext& ctx,
                                              const std::vector<std::size_t>& bases) {
  const SubgroupLattice& lat = ctx.lattice();
  Subgroup r = whole_group(lat.group);
  for (std::size_t b : bases)
    for (std::size_t t : ctx.weak_subnormalizer_indices(b)) r = intersect(r, lat.at(t));
  return r;
}

}  // namespace detail

// Intersection of all weak K-F-subnormalizers of all Sylow subgroups,
// cross-checked against Proposition p1.
inline Subgroup s_f(KsnContext& ctx) {
  detail::require_hereditary(ctx.formation(), "s_f");
  const SubgroupLattice& lat = ctx.lattice();
  auto bases = sylow_indices_within(lat, whole_group(lat.group).members);
  Subgroup r = detail::intersect_weak_subnormalizers(ctx, bases);
  detail::check_largest_normal(ctx, r, bases, "s_f");
  return r;
}

// Same intersection over all cyclic primary subgroups; S_F(G) <= C_F(G) is
// asserted (Proposition p2(3)).
inline Subgroup c_f(KsnContext& ctx) {
  detail::require_hereditary(ctx.formation(), "c_f");
  const SubgroupLattice& lat = ctx.lattice();
  auto bases = cyclic_primary_indices_within(lat, whole_group(lat.group).members);
  Subgroup r = detail::intersect_weak_subnormalizers(ctx, bases);
  detail::check_largest_normal(ctx, r, bases, "c_f");
  if (!subgroup_le(s_f(ctx), r)) throw Error("c_f: S_F(G) is not contained in C_F(G)");
  return r;
}

// Membership in wbar(F) for a member set inside the context's lattice:
// every Sylow subgroup of H must be K-F-subnormal in H.
inline bool wbar_member_sub(KsnContext& ctx, const std::vector<Elem>& members) {
  const SubgroupLattice& lat = ctx.lattice();
  const std::size_t hidx = lat.locate(members);
  for (std::size_t p : sylow_indices_within(lat, members))
    if (!ctx.subnormal(p, hidx)) return false;
  return true;
}

inline bool vstar_member_sub(KsnContext& ctx, const std::vector<Elem>& members) {
  const SubgroupLattice& lat = ctx.lattice();
  const std::size_t hidx = lat.locate(members);
  for (std::size_t c : cyclic_primary_indices_within(lat, members))
    if (!ctx.subnormal(c, hidx)) return false;
  return true;
}

inline bool wbar_member(const FiniteGroup& G, const Formation& F) {
  detail::require_hereditary(F, "wbar_member");
  SubgroupLattice lat = all_subgroups(G);
  KsnContext ctx(lat, F);
  return wbar_member_sub(ctx, whole_group(G).members);
}

inline bool vstar_member(const FiniteGroup& G, const Formation& F) {
  detail::require_hereditary(F, "vstar_member");
  SubgroupLattice lat = all_subgroups(G);
  KsnContext ctx(lat, F);
  return vstar_member_sub(ctx, whole_group(G).members);
}

// wbar(F) / vstar(F) wrapped as Formation values. Hereditary per
// Proposition wv(1); Z-saturated per p2(4), which is weaker than the
// Frattini saturation flag, so `saturated` stays false.
inline Formation make_wbar_formation(const Formation& F) {
  detail::require_hereditary(F, "make_wbar_formation");
  Formation w;
  w.name = "wbar(" + F.name + ")";
  w.hereditary = true;
  w.sigma = F.sigma;
  w.member = [F](const FiniteGroup& g) { return wbar_member(g, F); };
  w.member_in = [F](const SubgroupLattice& lat, const Subgroup& h) {
    KsnContext ctx(lat, F);
    return wbar_member_sub(ctx, h.members);
  };
  return w;
}

inline Formation make_vstar_formation(const Formation& F) {
  detail::require_hereditary(F, "make_vstar_formation");
  Formation v;
  v.name = "vstar(" + F.name + ")";
  v.hereditary = true;
  v.sigma = F.sigma;
  v.member = [F](const FiniteGroup& g) { return vstar_member(g, F); };
  v.member_in = [F](const SubgroupLattice& lat, const Subgroup& h) {
    KsnContext ctx(lat, F);
    return vstar_member_sub(ctx, h.members);
  };
  return v;
}

// Int_{wbar F}(G) and Int_{vstar F}(G) with the context's memo shared across
// all subgroup membership tests.
inline Subgroup int_wbar(KsnContext& ctx) {
  const SubgroupLattice& lat = ctx.lattice();
  std::vector<char> in_f(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) in_f[i] = wbar_member_sub(ctx, lat.at(i).members);
  Subgroup r = whole_group(lat.group);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!in_f[i]) continue;
    bool maximal = true;
    for (std::size_t j = i + 1; j < lat.size() && maximal; ++j)
      if (in_f[j] && lat.at(j).order() > lat.at(i).order() &&
          subset_of(lat.at(i).members, lat.at(j).members))
        maximal = false;
    if (maximal) r = intersect(r, lat.at(i));
  }
  return r;
}

inline Subgroup int_vstar(KsnContext& ctx) {
  const SubgroupLattice& lat = ctx.lattice();
  std::vector<char> in_f(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) in_f[i] = vstar_member_sub(ctx, lat.at(i).members);
  Subgroup r = whole_group(lat.group);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!in_f[i]) continue;
    bool maximal = true;
    for (std::size_t j = i + 1; j < lat.size() && maximal; ++j)
      if (in_f[j] && lat.at(j).order() > lat.at(i).order() &&
          subset_of(lat.at(i).members, lat.at(j).members))
        maximal = false;
    if (maximal) r = intersect(r, lat.at(i));
  }
  return r;
}

// H^r H = H H^r for all r in R.
inline bool is_conjugate_permutable(const FiniteGroup& G, const Subgroup& H, const Subgroup& R) {
  for (Elem r : R.members) {
    std::vector<Elem> hr;
    hr.reserve(H.order());
    for (Elem h : H.members) hr.push_back(G.conj(r, h));
    std::sort(hr.begin(), hr.end());
    if (product_set(G, hr, H.members) != product_set(G, H.members, hr)) return false;
  }
  return true;
}

}  // namespace forge
