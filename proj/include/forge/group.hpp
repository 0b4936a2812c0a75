#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forge/arith.hpp"
#include "forge/error.hpp"
#include "forge/perm.hpp"

namespace forge {

// Largest group order representable with Elem indices.
inline constexpr std::size_t kElemLimit = 65535;
// Orders up to this get an explicit multiplication table; larger groups
// multiply through a stored function (products of table groups).
inline constexpr std::size_t kTableLimit = 2048;
// Default refusal bound for closure enumeration.
inline constexpr std::size_t kDefaultOrderBound = 5000;

// An explicitly enumerated finite group. Elements are indices 0..order-1
// with 0 the identity. Immutable after construction; cheap to copy (shared
// internals), so it behaves as a value.
class FiniteGroup {
 public:
  struct Impl {
    std::size_t order = 0;
    std::string label;
    std::vector<Elem> gens;
    std::vector<Elem> table;   // row-major order*order; empty when functional
    std::vector<Elem> invtab;  // empty when functional
    std::function<Elem(Elem, Elem)> mul_fn;
    std::function<Elem(Elem)> inv_fn;
    std::vector<Perm> realization;  // optional; size == order when present
  };

  FiniteGroup() = default;
  explicit FiniteGroup(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::size_t order() const { return impl_->order; }
  const std::string& label() const { return impl_->label; }
  std::span<const Elem> generators() const { return impl_->gens; }

  Elem mul(Elem a, Elem b) const {
    const Impl& im = *impl_;
    return im.table.empty() ? im.mul_fn(a, b) : im.table[a * im.order + b];
  }

  Elem inv(Elem a) const {
    const Impl& im = *impl_;
    return im.invtab.empty() ? im.inv_fn(a) : im.invtab[a];
  }

  Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inv(g)); }
  Elem commutator(Elem a, Elem b) const {
    return mul(mul(a, b), mul(inv(a), inv(b)));  // a b a^-1 b^-1
  }

  std::size_t element_order(Elem x) const {
    std::size_t n = 1;
    Elem y = x;
    while (y != 0) {
      y = mul(y, x);
      ++n;
    }
    return n;
  }

  bool has_realization() const { return !impl_->realization.empty(); }
  const Perm& perm_of(Elem i) const { return impl_->realization[i]; }

  bool same_group(const FiniteGroup& o) const { return impl_ == o.impl_; }
  const void* id() const { return impl_.get(); }
  const std::shared_ptr<const Impl>& impl() const { return impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

// A subgroup of a fixed parent group: the sorted set of member indices.
struct Subgroup {
  FiniteGroup parent;
  std::vector<Elem> members;  // sorted ascending; always contains 0

  std::size_t order() const { return members.size(); }
  bool contains(Elem x) const { return std::binary_search(members.begin(), members.end(), x); }
  bool is_trivial() const { return members.size() == 1; }
  bool is_whole() const { return members.size() == parent.order(); }

  std::vector<char> mask() const {
    std::vector<char> m(parent.order(), 0);
    for (Elem x : members) m[x] = 1;
    return m;
  }
};

inline bool same_members(const Subgroup& a, const Subgroup& b) { return a.members == b.members; }

// A <= B as sorted sets.
inline bool subset_of(const std::vector<Elem>& a, const std::vector<Elem>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}
inline bool subgroup_le(const Subgroup& a, const Subgroup& b) {
  return subset_of(a.members, b.members);
}

namespace detail {

struct ElemVecHash {
  std::size_t operator()(const std::vector<Elem>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (Elem x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

inline std::shared_ptr<const FiniteGroup::Impl> finish_table_impl(FiniteGroup::Impl im) {
  const std::size_t n = im.order;
  if (!im.table.empty()) {
    if (im.table.size() != n * n) throw Error("group table has wrong size");
    // Latin-square + identity sanity; associativity is exercised by tests.
    std::vector<char> seen(n);
    for (std::size_t j = 0; j < n; ++j)
      if (im.table[j] != j) throw Error("index 0 is not a left identity");
    for (std::size_t i = 0; i < n; ++i)
      if (im.table[i * n] != i) throw Error("index 0 is not a right identity");
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t j = 0; j < n; ++j) {
        Elem v = im.table[i * n + j];
        if (v >= n || seen[v]) throw Error("group table row is not a permutation");
        seen[v] = 1;
      }
    }
    im.invtab.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      bool found = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (im.table[i * n + j] == 0) {
          if (im.table[j * n + i] != 0) throw Error("one-sided inverse in group table");
          im.invtab[i] = static_cast<Elem>(j);
          found = true;
          break;
        }
      }
      if (!found) throw Error("element without inverse in group table");
    }
  }
  return std::make_shared<const FiniteGroup::Impl>(std::move(im));
}

}  // namespace detail

// Smallest subgroup of G containing seed (and the identity).
inline Subgroup subgroup_closure(const FiniteGroup& G, std::span<const Elem> seed) {
  const std::size_t n = G.order();
  std::vector<char> mask(n, 0);
  std::vector<Elem> mem;
  mem.reserve(16);
  mask[0] = 1;
  mem.push_back(0);
  for (Elem s : seed) {
    if (s >= n) throw Error("subgroup_closure: element index out of range");
    if (!mask[s]) {
      mask[s] = 1;
      mem.push_back(s);
    }
  }
  // Worklist: when x is processed, multiply it with everything currently
  // present, both sides. Every pair ends up covered.
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const Elem x = mem[i];
    for (std::size_t j = 0; j < mem.size(); ++j) {
      const Elem y = mem[j];
      Elem p = G.mul(x, y);
      if (!mask[p]) {
        mask[p] = 1;
        mem.push_back(p);
      }
      p = G.mul(y, x);
      if (!mask[p]) {
        mask[p] = 1;
        mem.push_back(p);
      }
    }
  }
  std::sort(mem.begin(), mem.end());
  return Subgroup{G, std::move(mem)};
}

inline Subgroup subgroup_closure(const FiniteGroup& G, std::initializer_list<Elem> seed) {
  return subgroup_closure(G, std::span<const Elem>(seed.begin(), seed.size()));
}

inline Subgroup trivial_subgroup(const FiniteGroup& G) {
  return Subgroup{G, std::vector<Elem>{0}};
}

inline Subgroup whole_group(const FiniteGroup& G) {
  std::vector<Elem> mem(G.order());
  for (std::size_t i = 0; i < mem.size(); ++i) mem[i] = static_cast<Elem>(i);
  return Subgroup{G, std::move(mem)};
}

// Deterministic small generating set for a member-closed set.
inline std::vector<Elem> generating_set(const FiniteGroup& G, const std::vector<Elem>& members) {
  std::vector<Elem> gens;
  Subgroup cur = trivial_subgroup(G);
  for (Elem m : members) {
    if (!cur.contains(m)) {
      gens.push_back(m);
      std::vector<Elem> seed = cur.members;
      seed.push_back(m);
      cur = subgroup_closure(G, seed);
      if (cur.order() == members.size()) break;
    }
  }
  return gens;
}

inline FiniteGroup group_from_table(std::vector<Elem> table, std::string label,
                                    std::vector<Elem> gens = {}) {
  FiniteGroup::Impl im;
  std::size_t n = 0;
  while (n * n < table.size()) ++n;
  if (n * n != table.size() || n == 0) throw Error("group table is not square");
  im.order = n;
  im.label = std::move(label);
  im.table = std::move(table);
  im.gens = std::move(gens);
  FiniteGroup g(detail::finish_table_impl(std::move(im)));
  if (g.generators().empty() && n > 1) {
    std::vector<Elem> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Elem>(i);
    FiniteGroup::Impl im2 = *g.impl();
    im2.gens = generating_set(g, all);
    g = FiniteGroup(std::make_shared<const FiniteGroup::Impl>(std::move(im2)));
  }
  return g;
}

// Smallest subgroup containing seed that is closed under conjugation by the
// given elements. Equals the normal closure of <seed> in <conjugators> when
// the conjugators generate the ambient group of interest.
inline Subgroup normal_closure(const FiniteGroup& G, std::span<const Elem> conjugators,
                               std::span<const Elem> seed) {
  const std::size_t n = G.order();
  std::vector<char> mask(n, 0);
  std::vector<Elem> mem;
  mask[0] = 1;
  mem.push_back(0);
  auto add = [&](Elem x) {
    if (!mask[x]) {
      mask[x] = 1;
      mem.push_back(x);
    }
  };
  for (Elem s : seed) add(s);
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const Elem x = mem[i];
    for (Elem c : conjugators) add(G.conj(c, x));
    for (std::size_t j = 0; j < mem.size(); ++j) {
      add(G.mul(x, mem[j]));
      add(G.mul(mem[j], x));
    }
  }
  std::sort(mem.begin(), mem.end());
  return Subgroup{G, std::move(mem)};
}

inline Subgroup conjugate_subgroup(const FiniteGroup& G, const Subgroup& H, Elem g) {
  std::vector<Elem> mem;
  mem.reserve(H.order());
  for (Elem h : H.members) mem.push_back(G.conj(g, h));
  std::sort(mem.begin(), mem.end());
  return Subgroup{G, std::move(mem)};
}

inline bool is_normal(const FiniteGroup& G, const Subgroup& H) {
  // Conjugation by a generating set suffices: normalizers are subgroups.
  std::vector<char> m = H.mask();
  auto gens = G.generators();
  for (Elem g : gens)
    for (Elem h : H.members)
      if (!m[G.conj(g, h)]) return false;
  if (gens.empty()) {
    for (std::size_t g = 0; g < G.order(); ++g)
      for (Elem h : H.members)
        if (!m[G.conj(static_cast<Elem>(g), h)]) return false;
  }
  return true;
}

inline Subgroup centralizer(const FiniteGroup& G, const Subgroup& S) {
  std::vector<Elem> mem;
  for (std::size_t g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (Elem s : S.members) {
      if (G.mul(static_cast<Elem>(g), s) != G.mul(s, static_cast<Elem>(g))) {
        ok = false;
        break;
      }
    }
    if (ok) mem.push_back(static_cast<Elem>(g));
  }
  return Subgroup{G, std::move(mem)};
}

inline Subgroup center_subgroup(const FiniteGroup& G) { return centralizer(G, whole_group(G)); }

inline Subgroup normalizer(const FiniteGroup& G, const Subgroup& H) {
  std::vector<char> m = H.mask();
  std::vector<Elem> mem;
  for (std::size_t g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (Elem h : H.members) {
      if (!m[G.conj(static_cast<Elem>(g), h)]) {
        ok = false;
        break;
      }
    }
    if (ok) mem.push_back(static_cast<Elem>(g));
  }
  return Subgroup{G, std::move(mem)};
}

// Largest normal subgroup of G inside H: the intersection of all conjugates.
inline Subgroup normal_core(const FiniteGroup& G, const Subgroup& H) {
  std::vector<char> core = H.mask();
  for (std::size_t g = 0; g < G.order(); ++g) {
    std::vector<char> cm(G.order(), 0);
    for (Elem h : H.members) cm[G.conj(static_cast<Elem>(g), h)] = 1;
    for (std::size_t x = 0; x < G.order(); ++x) core[x] = core[x] && cm[x];
  }
  std::vector<Elem> mem;
  for (std::size_t x = 0; x < G.order(); ++x)
    if (core[x]) mem.push_back(static_cast<Elem>(x));
  return Subgroup{G, std::move(mem)};
}

inline Subgroup intersect(const Subgroup& A, const Subgroup& B) {
  std::vector<Elem> mem;
  std::set_intersection(A.members.begin(), A.members.end(), B.members.begin(), B.members.end(),
                        std::back_inserter(mem));
  return Subgroup{A.parent, std::move(mem)};
}

inline Subgroup join(const Subgroup& A, const Subgroup& B) {
  if (subgroup_le(A, B)) return B;
  if (subgroup_le(B, A)) return A;
  std::vector<Elem> seed = A.members;
  seed.insert(seed.end(), B.members.begin(), B.members.end());
  return subgroup_closure(A.parent, seed);
}

// The set product AB = {ab}; a subgroup only in special cases.
inline std::vector<Elem> product_set(const FiniteGroup& G, const std::vector<Elem>& A,
                                     const std::vector<Elem>& B) {
  std::vector<char> m(G.order(), 0);
  for (Elem a : A)
    for (Elem b : B) m[G.mul(a, b)] = 1;
  std::vector<Elem> out;
  for (std::size_t x = 0; x < G.order(); ++x)
    if (m[x]) out.push_back(static_cast<Elem>(x));
  return out;
}

// ---------------------------------------------------------------------------
// Group construction

inline FiniteGroup generate_group(const std::vector<Perm>& gens, std::string label,
                                  std::size_t order_bound = kDefaultOrderBound) {
  if (gens.empty()) throw InputError("generate_group: no generators");
  const std::size_t deg = gens[0].degree();
  if (deg == 0) throw InputError("generate_group: degree must be positive");
  for (const Perm& g : gens)
    if (g.degree() != deg) throw InputError("generate_group: generator degree mismatch");
  if (order_bound > kElemLimit) order_bound = kElemLimit;

  using VecHash = detail::ElemVecHash;
  std::unordered_map<std::vector<Elem>, Elem, VecHash> index;
  std::vector<Perm> elems;
  elems.push_back(Perm::identity(deg));
  index.emplace(elems[0].images(), 0);
  // BFS closure; discovery order fixes element indices.
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const Perm& g : gens) {
      Perm p = compose(elems[i], g);
      auto it = index.find(p.images());
      if (it == index.end()) {
        if (elems.size() >= order_bound)
          throw BoundError("generate_group: closure of '" + label + "' exceeds order bound " +
                           std::to_string(order_bound));
        index.emplace(p.images(), static_cast<Elem>(elems.size()));
        elems.push_back(std::move(p));
      }
    }
  }

  FiniteGroup::Impl im;
  im.order = elems.size();
  im.label = std::move(label);
  for (const Perm& g : gens) im.gens.push_back(index.at(g.images()));
  if (im.order <= kTableLimit) {
    im.table.resize(im.order * im.order);
    for (std::size_t i = 0; i < im.order; ++i)
      for (std::size_t j = 0; j < im.order; ++j)
        im.table[i * im.order + j] = index.at(compose(elems[i], elems[j]).images());
  } else {
    auto elems_p = std::make_shared<std::vector<Perm>>(elems);
    auto index_p = std::make_shared<std::unordered_map<std::vector<Elem>, Elem, VecHash>>(
        std::move(index));
    im.mul_fn = [elems_p, index_p](Elem a, Elem b) {
      return index_p->at(compose((*elems_p)[a], (*elems_p)[b]).images());
    };
    im.inv_fn = [elems_p, index_p](Elem a) { return index_p->at(inverse((*elems_p)[a]).images()); };
  }
  im.realization = std::move(elems);
  return FiniteGroup(detail::finish_table_impl(std::move(im)));
}

inline FiniteGroup direct_product(const FiniteGroup& A, const FiniteGroup& B) {
  const std::size_t n = A.order() * B.order();
  if (n > kElemLimit)
    throw BoundError("direct_product: order " + std::to_string(n) + " exceeds element limit");
  FiniteGroup::Impl im;
  im.order = n;
  im.label = A.label() + "x" + B.label();
  const std::size_t nb = B.order();
  for (Elem g : A.generators()) im.gens.push_back(static_cast<Elem>(g * nb));
  for (Elem g : B.generators()) im.gens.push_back(g);
  if (n <= kTableLimit) {
    im.table.resize(n * n);
    for (std::size_t a1 = 0; a1 < A.order(); ++a1)
      for (std::size_t b1 = 0; b1 < nb; ++b1)
        for (std::size_t a2 = 0; a2 < A.order(); ++a2)
          for (std::size_t b2 = 0; b2 < nb; ++b2)
            im.table[(a1 * nb + b1) * n + (a2 * nb + b2)] = static_cast<Elem>(
                A.mul(static_cast<Elem>(a1), static_cast<Elem>(a2)) * nb +
                B.mul(static_cast<Elem>(b1), static_cast<Elem>(b2)));
  } else {
    auto ai = A.impl(), bi = B.impl();
    FiniteGroup av(ai), bv(bi);
    im.mul_fn = [av, bv, nb](Elem x, Elem y) {
      return static_cast<Elem>(av.mul(static_cast<Elem>(x / nb), static_cast<Elem>(y / nb)) * nb +
                               bv.mul(static_cast<Elem>(x % nb), static_cast<Elem>(y % nb)));
    };
    im.inv_fn = [av, bv, nb](Elem x) {
      return static_cast<Elem>(av.inv(static_cast<Elem>(x / nb)) * nb +
                               bv.inv(static_cast<Elem>(x % nb)));
    };
  }
  if (A.has_realization() && B.has_realization()) {
    // Act on the disjoint union of the two point sets.
    const std::size_t da = A.perm_of(0).degree(), db = B.perm_of(0).degree();
    im.realization.reserve(n);
    for (std::size_t a = 0; a < A.order(); ++a)
      for (std::size_t b = 0; b < nb; ++b) {
        std::vector<Elem> img(da + db);
        for (std::size_t x = 0; x < da; ++x) img[x] = A.perm_of(static_cast<Elem>(a))(static_cast<Elem>(x));
        for (std::size_t x = 0; x < db; ++x)
          img[da + x] = static_cast<Elem>(da + B.perm_of(static_cast<Elem>(b))(static_cast<Elem>(x)));
        im.realization.emplace_back(std::move(img));
      }
  }
  return FiniteGroup(detail::finish_table_impl(std::move(im)));
}

// Index of (a, b) inside direct_product(A, B).
inline Elem dp_index(const FiniteGroup& B, Elem a, Elem b) {
  return static_cast<Elem>(a * B.order() + b);
}

// N x| Q under a left action: action[q] is the automorphism of N induced by q,
// multiplication (n1,q1)(n2,q2) = (n1 * action[q1](n2), q1 q2).
inline FiniteGroup semidirect_product(const FiniteGroup& N, const FiniteGroup& Q,
                                      const std::vector<std::vector<Elem>>& action) {
  const std::size_t nn = N.order(), nq = Q.order();
  if (action.size() != nq) throw Error("semidirect_product: need one automorphism per Q element");
  for (const auto& row : action)
    if (row.size() != nn) throw Error("semidirect_product: automorphism has wrong size");
  for (std::size_t x = 0; x < nn; ++x)
    if (action[0][x] != x) throw Error("semidirect_product: identity must act trivially");
  // Each action[q] must be a bijective endomorphism of N.
  for (std::size_t q = 0; q < nq; ++q) {
    std::vector<char> seen(nn, 0);
    for (std::size_t x = 0; x < nn; ++x) {
      Elem v = action[q][x];
      if (v >= nn || seen[v])
        throw Error("semidirect_product: action of element " + std::to_string(q) +
                    " is not a bijection");
      seen[v] = 1;
    }
    if (action[q][0] != 0)
      throw Error("semidirect_product: action does not fix the identity");
    for (std::size_t x = 0; x < nn; ++x)
      for (std::size_t y = 0; y < nn; ++y)
        if (action[q][N.mul(static_cast<Elem>(x), static_cast<Elem>(y))] !=
            N.mul(action[q][x], action[q][y]))
          throw Error("semidirect_product: action of element " + std::to_string(q) +
                      " is not a homomorphism");
  }
  // action must itself be a homomorphism Q -> Aut(N) for the left convention.
  for (std::size_t q1 = 0; q1 < nq; ++q1)
    for (std::size_t q2 = 0; q2 < nq; ++q2) {
      Elem q12 = Q.mul(static_cast<Elem>(q1), static_cast<Elem>(q2));
      for (std::size_t x = 0; x < nn; ++x)
        if (action[q12][x] != action[q1][action[q2][x]])
          throw Error("semidirect_product: action is not a homomorphism into Aut(N)");
    }

  const std::size_t n = nn * nq;
  if (n > kElemLimit)
    throw BoundError("semidirect_product: order " + std::to_string(n) + " exceeds element limit");
  FiniteGroup::Impl im;
  im.order = n;
  im.label = N.label() + ":" + Q.label();
  for (Elem g : N.generators()) im.gens.push_back(static_cast<Elem>(g * nq));
  for (Elem g : Q.generators()) im.gens.push_back(g);
  if (n <= kTableLimit) {
    im.table.resize(n * n);
    for (std::size_t n1 = 0; n1 < nn; ++n1)
      for (std::size_t q1 = 0; q1 < nq; ++q1)
        for (std::size_t n2 = 0; n2 < nn; ++n2)
          for (std::size_t q2 = 0; q2 < nq; ++q2)
            im.table[(n1 * nq + q1) * n + (n2 * nq + q2)] = static_cast<Elem>(
                N.mul(static_cast<Elem>(n1), action[q1][n2]) * nq +
                Q.mul(static_cast<Elem>(q1), static_cast<Elem>(q2)));
  } else {
    auto act = std::make_shared<std::vector<std::vector<Elem>>>(action);
    FiniteGroup nv(N.impl()), qv(Q.impl());
    im.mul_fn = [nv, qv, act, nq](Elem x, Elem y) {
      const Elem n1 = static_cast<Elem>(x / nq), q1 = static_cast<Elem>(x % nq);
      const Elem n2 = static_cast<Elem>(y / nq), q2 = static_cast<Elem>(y % nq);
      return static_cast<Elem>(nv.mul(n1, (*act)[q1][n2]) * nq + qv.mul(q1, q2));
    };
    im.inv_fn = [nv, qv, act, nq](Elem x) {
      const Elem n1 = static_cast<Elem>(x / nq), q1 = static_cast<Elem>(x % nq);
      const Elem qi = qv.inv(q1);
      return static_cast<Elem>((*act)[qi][nv.inv(n1)] * nq + qi);
    };
  }
  return FiniteGroup(detail::finish_table_impl(std::move(im)));
}

// Index of (n, q) inside semidirect_product(N, Q, _).
inline Elem sdp_index(const FiniteGroup& Q, Elem n, Elem q) {
  return static_cast<Elem>(n * Q.order() + q);
}

// ---------------------------------------------------------------------------
// Quotients and sections

struct QuotientMap {
  FiniteGroup source;
  Subgroup kernel;
  FiniteGroup target;
  std::vector<Elem> projection;  // source index -> target index
  std::vector<Elem> section;     // target index -> least coset representative

  Elem project(Elem g) const { return projection[g]; }
  Elem lift(Elem q) const { return section[q]; }

  Subgroup image(const Subgroup& H) const {
    std::vector<char> m(target.order(), 0);
    for (Elem h : H.members) m[projection[h]] = 1;
    std::vector<Elem> mem;
    for (std::size_t x = 0; x < target.order(); ++x)
      if (m[x]) mem.push_back(static_cast<Elem>(x));
    return Subgroup{target, std::move(mem)};
  }

  Subgroup preimage(const Subgroup& S) const { return preimage_members(S.members); }

  Subgroup preimage_members(const std::vector<Elem>& target_members) const {
    std::vector<char> m(target.order(), 0);
    for (Elem x : target_members) m[x] = 1;
    std::vector<Elem> mem;
    for (std::size_t g = 0; g < source.order(); ++g)
      if (m[projection[g]]) mem.push_back(static_cast<Elem>(g));
    return Subgroup{source, std::move(mem)};
  }
};

inline QuotientMap quotient_group(const FiniteGroup& G, const Subgroup& N) {
  if (!is_normal(G, N)) throw Error("quotient_group: subgroup is not normal");
  const std::size_t n = G.order(), k = N.order();
  std::vector<Elem> proj(n, 0);
  std::vector<char> assigned(n, 0);
  std::vector<Elem> reps;
  for (std::size_t g = 0; g < n; ++g) {
    if (assigned[g]) continue;
    const Elem q = static_cast<Elem>(reps.size());
    reps.push_back(static_cast<Elem>(g));
    for (Elem x : N.members) {
      Elem gx = G.mul(static_cast<Elem>(g), x);
      assigned[gx] = 1;
      proj[gx] = q;
    }
  }
  const std::size_t m = reps.size();
  if (m * k != n) throw Error("quotient_group: coset count mismatch");
  FiniteGroup::Impl im;
  im.order = m;
  im.label = G.label() + "/" + std::to_string(k);
  im.table.resize(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) im.table[a * m + b] = proj[G.mul(reps[a], reps[b])];
  for (Elem g : G.generators()) {
    Elem q = proj[g];
    if (q != 0 && std::find(im.gens.begin(), im.gens.end(), q) == im.gens.end())
      im.gens.push_back(q);
  }
  FiniteGroup target(detail::finish_table_impl(std::move(im)));
  if (target.generators().empty() && target.order() > 1) {
    // Rebuild with a greedy generating set (source had no usable generators).
    std::vector<Elem> allm(target.order());
    for (std::size_t i = 0; i < allm.size(); ++i) allm[i] = static_cast<Elem>(i);
    auto gens = generating_set(target, allm);
    FiniteGroup::Impl im2 = *target.impl();
    im2.gens = std::move(gens);
    target = FiniteGroup(std::make_shared<const FiniteGroup::Impl>(std::move(im2)));
  }
  return QuotientMap{G, N, target, std::move(proj), std::move(reps)};
}

// A subgroup re-indexed as a standalone group, with the index map back.
struct Materialized {
  FiniteGroup group;
  std::vector<Elem> to_parent;  // group index -> parent element index

  Subgroup lift(const std::vector<Elem>& sub_members, const FiniteGroup& parent) const {
    std::vector<Elem> mem;
    mem.reserve(sub_members.size());
    for (Elem x : sub_members) mem.push_back(to_parent[x]);
    std::sort(mem.begin(), mem.end());
    return Subgroup{parent, std::move(mem)};
  }
};

inline Materialized materialize(const Subgroup& H) {
  const std::size_t k = H.order();
  std::vector<Elem> back(H.parent.order(), 0);
  for (std::size_t i = 0; i < k; ++i) back[H.members[i]] = static_cast<Elem>(i);
  FiniteGroup::Impl im;
  im.order = k;
  im.label = H.parent.label() + ".sub" + std::to_string(k);
  im.table.resize(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      im.table[i * k + j] = back[H.parent.mul(H.members[i], H.members[j])];
  if (H.parent.has_realization()) {
    im.realization.reserve(k);
    for (Elem x : H.members) im.realization.push_back(H.parent.perm_of(x));
  }
  FiniteGroup g(detail::finish_table_impl(std::move(im)));
  std::vector<Elem> allm(k);
  for (std::size_t i = 0; i < k; ++i) allm[i] = static_cast<Elem>(i);
  FiniteGroup::Impl im2 = *g.impl();
  im2.gens = generating_set(g, allm);
  g = FiniteGroup(std::make_shared<const FiniteGroup::Impl>(std::move(im2)));
  return Materialized{g, H.members};
}

// Abstract group on the cosets hK for h in H, K normal in H.
struct SectionGroup {
  FiniteGroup group;
  Subgroup h, k;                 // the defining subgroups of the parent
  std::vector<Elem> reps;        // section index -> least coset rep (parent elem)
  std::vector<Elem> coset_of;    // parent element (member of H) -> section index
                                 // (size = parent order; undefined off H)

  Elem coset(Elem parent_elem) const { return coset_of[parent_elem]; }
};

inline SectionGroup section_group(const FiniteGroup& G, const Subgroup& H, const Subgroup& K) {
  if (!subgroup_le(K, H)) throw Error("section_group: K is not contained in H");
  {
    std::vector<char> km = K.mask();
    for (Elem h : H.members)
      for (Elem x : K.members)
        if (!km[G.conj(h, x)]) throw Error("section_group: K is not normal in H");
  }
  const std::size_t k = K.order();
  std::vector<Elem> coset_of(G.order(), 0);
  std::vector<char> assigned(G.order(), 0);
  std::vector<Elem> reps;
  for (Elem h : H.members) {
    if (assigned[h]) continue;
    const Elem q = static_cast<Elem>(reps.size());
    reps.push_back(h);
    for (Elem x : K.members) {
      Elem hx = G.mul(h, x);
      assigned[hx] = 1;
      coset_of[hx] = q;
    }
  }
  const std::size_t m = reps.size();
  if (m * k != H.order()) throw Error("section_group: coset count mismatch");
  FiniteGroup::Impl im;
  im.order = m;
  im.label = G.label() + ".sec" + std::to_string(m);
  im.table.resize(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) im.table[a * m + b] = coset_of[G.mul(reps[a], reps[b])];
  FiniteGroup sec(detail::finish_table_impl(std::move(im)));
  std::vector<Elem> allm(m);
  for (std::size_t i = 0; i < m; ++i) allm[i] = static_cast<Elem>(i);
  FiniteGroup::Impl im2 = *sec.impl();
  im2.gens = generating_set(sec, allm);
  sec = FiniteGroup(std::make_shared<const FiniteGroup::Impl>(std::move(im2)));
  return SectionGroup{sec, H, K, std::move(reps), std::move(coset_of)};
}

// The automorphism of the section induced by conjugation with g; requires g
// to normalize both H and K (the chief-factor case).
inline std::vector<Elem> section_conj_action(const FiniteGroup& G, const SectionGroup& sec,
                                             Elem g) {
  {
    std::vector<char> hm = sec.h.mask(), km = sec.k.mask();
    for (Elem h : sec.h.members)
      if (!hm[G.conj(g, h)]) throw Error("section conjugation: element does not normalize H");
    for (Elem x : sec.k.members)
      if (!km[G.conj(g, x)]) throw Error("section conjugation: element does not normalize K");
  }
  std::vector<Elem> img(sec.reps.size());
  for (std::size_t c = 0; c < sec.reps.size(); ++c) img[c] = sec.coset_of[G.conj(g, sec.reps[c])];
  return img;
}

}  // namespace forge
