#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/error.hpp"
#include "forge/group.hpp"
#include "forge/perm.hpp"

namespace forge {

using Json = nlohmann::ordered_json;

// C_n x| C_m where the generator of C_m acts as x -> x^k. Elements of a
// cyclic generate_group are indexed by generator powers, so automorphism
// rows are index multiplications.
inline FiniteGroup cyclic_semidirect(std::size_t n, std::size_t m, std::uint64_t k,
                                     const std::string& label) {
  std::vector<Elem> cn(n), cm(m);
  for (std::size_t i = 0; i < n; ++i) cn[i] = static_cast<Elem>((i + 1) % n);
  for (std::size_t i = 0; i < m; ++i) cm[i] = static_cast<Elem>((i + 1) % m);
  FiniteGroup N = generate_group({Perm(cn)}, "C" + std::to_string(n));
  FiniteGroup Q = generate_group({Perm(cm)}, "C" + std::to_string(m));
  std::vector<std::vector<Elem>> action(m, std::vector<Elem>(n));
  std::uint64_t kq = 1;
  for (std::size_t q = 0; q < m; ++q) {
    for (std::size_t x = 0; x < n; ++x) action[q][x] = static_cast<Elem>((x * kq) % n);
    kq = (kq * k) % n;
  }
  FiniteGroup g = semidirect_product(N, Q, action);
  FiniteGroup::Impl im = *g.impl();
  im.label = label;
  return FiniteGroup(std::make_shared<const FiniteGroup::Impl>(std::move(im)));
}

namespace detail {

inline FiniteGroup make_cyclic(std::size_t n, const std::string& label, std::size_t bound) {
  if (n == 1) return generate_group({Perm::identity(1)}, label, bound);
  std::vector<Elem> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Elem>((i + 1) % n);
  return generate_group({Perm(img)}, label, bound);
}

inline FiniteGroup make_symmetric(std::size_t n, const std::string& label, std::size_t bound) {
  if (n < 2) return make_cyclic(1, label, bound);
  std::vector<Elem> cyc(n), tr(n);
  for (std::size_t i = 0; i < n; ++i) cyc[i] = static_cast<Elem>((i + 1) % n);
  for (std::size_t i = 0; i < n; ++i) tr[i] = static_cast<Elem>(i);
  std::swap(tr[0], tr[1]);
  return generate_group({Perm(cyc), Perm(tr)}, label, bound);
}

inline FiniteGroup make_alternating(std::size_t n, const std::string& label, std::size_t bound) {
  if (n < 3) return make_cyclic(1, label, bound);
  std::vector<Elem> three(n);
  for (std::size_t i = 0; i < n; ++i) three[i] = static_cast<Elem>(i);
  three[0] = 1;
  three[1] = 2;
  three[2] = 0;
  std::vector<Elem> big(n);
  if (n % 2 == 1) {
    for (std::size_t i = 0; i < n; ++i) big[i] = static_cast<Elem>((i + 1) % n);
  } else {
    big[0] = 0;
    for (std::size_t i = 1; i < n; ++i) big[i] = static_cast<Elem>(i % (n - 1) + 1);
  }
  return generate_group({Perm(three), Perm(big)}, label, bound);
}

// Dihedral group of order 2n acting on n points.
inline FiniteGroup make_dihedral(std::size_t order, const std::string& label, std::size_t bound) {
  if (order % 2 != 0 || order < 6) throw InputError("dihedral constructor needs even order >= 6");
  const std::size_t n = order / 2;
  std::vector<Elem> rot(n), refl(n);
  for (std::size_t i = 0; i < n; ++i) rot[i] = static_cast<Elem>((i + 1) % n);
  for (std::size_t i = 0; i < n; ++i) refl[i] = static_cast<Elem>((n - i) % n);
  return generate_group({Perm(rot), Perm(refl)}, label, bound);
}

inline FiniteGroup make_q8(const std::string& label, std::size_t bound) {
  // Left regular action on {1, i, -1, -i, j, -j, k, -k}.
  return generate_group({Perm({1, 2, 3, 0, 6, 7, 5, 4}), Perm({4, 7, 5, 6, 2, 0, 1, 3})}, label,
                        bound);
}

// SL(2,3) acting on the 8 nonzero vectors of F_3^2, listed lexicographically.
inline FiniteGroup make_sl23(const std::string& label, std::size_t bound) {
  std::vector<std::pair<int, int>> pts;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if (x || y) pts.emplace_back(x, y);
  auto index_of = [&](int x, int y) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (pts[i].first == x && pts[i].second == y) return static_cast<Elem>(i);
    throw Error("sl23: point lookup failed");
  };
  auto act = [&](int a, int b, int c, int d) {
    std::vector<Elem> img(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      int x = pts[i].first, y = pts[i].second;
      img[i] = index_of((a * x + b * y) % 3, (c * x + d * y) % 3);
    }
    return Perm(img);
  };
  return generate_group({act(1, 1, 0, 1), act(0, 2, 1, 0)}, label, bound);
}

inline bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline FiniteGroup make_named_atom(const std::string& name, std::size_t bound) {
  if (name == "V4")
    return generate_group({Perm({1, 0, 3, 2}), Perm({2, 3, 0, 1})}, name, bound);
  if (name == "Q8") return make_q8(name, bound);
  if (name == "SL23") return make_sl23(name, bound);
  if (name == "Dic3" || name == "C3:C4") return cyclic_semidirect(3, 4, 2, name);
  if (name == "F20" || name == "C5:C4") return cyclic_semidirect(5, 4, 2, name);
  if (name == "C7:C3") return cyclic_semidirect(7, 3, 2, name);
  if (name.size() >= 2 && all_digits(name.substr(1))) {
    const std::size_t n = std::stoul(name.substr(1));
    switch (name[0]) {
      case 'C':
        if (n >= 1) return make_cyclic(n, name, bound);
        break;
      case 'S':
        if (n >= 2 && n <= 8) return make_symmetric(n, name, bound);
        break;
      case 'A':
        if (n >= 3 && n <= 8) return make_alternating(n, name, bound);
        break;
      case 'D':
        return make_dihedral(n, name, bound);
      default:
        break;
    }
  }
  throw InputError("unknown group name '" + name +
                   "' (expected Cn, Sn, An, D<order>, V4, Q8, SL23, Dic3, F20, C7:C3, or a "
                   "product with 'x')");
}

inline FiniteGroup make_named(const std::string& expr, std::size_t bound) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : expr) {
    if (c == 'x') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  FiniteGroup g = make_named_atom(parts[0], bound);
  for (std::size_t i = 1; i < parts.size(); ++i)
    g = direct_product(g, make_named_atom(parts[i], bound));
  if (parts.size() > 1) {
    FiniteGroup::Impl im = *g.impl();
    im.label = expr;
    g = FiniteGroup(std::make_shared<const FiniteGroup::Impl>(std::move(im)));
  }
  return g;
}

}  // namespace detail

// A parsed group description: named constructor, raw permutation generators,
// or an explicit semidirect action spec.
struct GroupSpec {
  Json raw;
  std::string label;
};

inline GroupSpec parse_group_spec(const Json& j);

inline GroupSpec parse_group_spec(const std::string& text) {
  std::string t = text;
  while (!t.empty() && t.front() == ' ') t.erase(t.begin());
  while (!t.empty() && t.back() == ' ') t.pop_back();
  if (t.empty()) throw InputError("empty group spec");
  if (t.front() == '{' || t.front() == '"') {
    Json j = Json::parse(t, nullptr, false);
    if (j.is_discarded()) throw InputError("group spec is not valid JSON: " + text);
    return parse_group_spec(j);
  }
  return GroupSpec{Json(t), t};
}

inline GroupSpec parse_group_spec(const Json& j) {
  if (j.is_string()) return GroupSpec{j, j.get<std::string>()};
  if (!j.is_object()) throw InputError("group spec must be a name or an object");
  GroupSpec spec{j, ""};
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw InputError("group spec: label must be a string");
    spec.label = j.at("label").get<std::string>();
  }
  if (j.contains("name")) {
    if (spec.label.empty()) spec.label = j.at("name").get<std::string>();
    return spec;
  }
  if (j.contains("generators")) {
    if (!j.contains("degree") || !j.at("degree").is_number_unsigned() ||
        j.at("degree").get<std::size_t>() < 1)
      throw InputError("group spec: raw generators need a positive degree");
    if (!j.at("generators").is_array() || j.at("generators").empty())
      throw InputError("group spec: generators must be a nonempty array of image lists");
    if (spec.label.empty()) throw InputError("group spec: raw generators need a label");
    return spec;
  }
  if (j.contains("normal") && j.contains("quotient") && j.contains("action")) {
    if (spec.label.empty()) throw InputError("group spec: semidirect spec needs a label");
    return spec;
  }
  throw InputError("group spec: expected a name, raw generators, or a semidirect description");
}

inline FiniteGroup build_group(const GroupSpec& spec,
                               std::size_t order_bound = kDefaultOrderBound) {
  const Json& j = spec.raw;
  if (j.is_string()) return detail::make_named(j.get<std::string>(), order_bound);
  if (j.contains("name")) {
    FiniteGroup g = detail::make_named(j.at("name").get<std::string>(), order_bound);
    if (!spec.label.empty() && spec.label != g.label()) {
      FiniteGroup::Impl im = *g.impl();
      im.label = spec.label;
      g = FiniteGroup(std::make_shared<const FiniteGroup::Impl>(std::move(im)));
    }
    return g;
  }
  if (j.contains("generators")) {
    const std::size_t degree = j.at("degree").get<std::size_t>();
    std::vector<Perm> gens;
    for (const Json& gj : j.at("generators")) {
      if (!gj.is_array() || gj.size() != degree)
        throw InputError("group spec: generator image list has wrong length");
      std::vector<Elem> img;
      img.reserve(degree);
      for (const Json& v : gj) {
        if (!v.is_number_unsigned() || v.get<std::size_t>() >= degree)
          throw InputError("group spec: image entry out of range");
        img.push_back(static_cast<Elem>(v.get<std::size_t>()));
      }
      gens.emplace_back(std::move(img));
    }
    return generate_group(gens, spec.label, order_bound);
  }
  // Semidirect: action rows are full automorphism tables per quotient element.
  FiniteGroup N = build_group(parse_group_spec(j.at("normal")), order_bound);
  FiniteGroup Q = build_group(parse_group_spec(j.at("quotient")), order_bound);
  const Json& aj = j.at("action");
  if (!aj.is_array() || aj.size() != Q.order())
    throw InputError("group spec: action needs one row per quotient element");
  std::vector<std::vector<Elem>> action;
  for (const Json& row : aj) {
    if (!row.is_array() || row.size() != N.order())
      throw InputError("group spec: action row has wrong length");
    std::vector<Elem> r;
    for (const Json& v : row) {
      if (!v.is_number_unsigned() || v.get<std::size_t>() >= N.order())
        throw InputError("group spec: action entry out of range");
      r.push_back(static_cast<Elem>(v.get<std::size_t>()));
    }
    action.push_back(std::move(r));
  }
  FiniteGroup g;
  try {
    g = semidirect_product(N, Q, action);
  } catch (const BoundError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(std::string("group spec: ") + e.what());
  }
  FiniteGroup::Impl im = *g.impl();
  im.label = spec.label;
  return FiniteGroup(std::make_shared<const FiniteGroup::Impl>(std::move(im)));
}

}  // namespace forge
