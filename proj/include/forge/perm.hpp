#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "forge/error.hpp"

namespace forge {

// Element index inside a FiniteGroup. Index 0 is always the identity.
using Elem = std::uint16_t;

// A permutation of {0, ..., degree-1}, stored as its image list.
class Perm {
 public:
  Perm() = default;

  explicit Perm(std::vector<Elem> images) : img_(std::move(images)) {
    std::vector<char> seen(img_.size(), 0);
    for (Elem x : img_) {
      if (x >= img_.size() || seen[x])
        throw InputError("permutation image list is not a bijection");
      seen[x] = 1;
    }
  }

  static Perm identity(std::size_t degree) {
    std::vector<Elem> img(degree);
    for (std::size_t i = 0; i < degree; ++i) img[i] = static_cast<Elem>(i);
    return Perm(std::move(img));
  }

  std::size_t degree() const { return img_.size(); }
  Elem operator()(Elem x) const { return img_[x]; }
  const std::vector<Elem>& images() const { return img_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  friend bool operator==(const Perm& a, const Perm& b) { return a.img_ == b.img_; }
  friend auto operator<=>(const Perm& a, const Perm& b) { return a.img_ <=> b.img_; }

 private:
  std::vector<Elem> img_;
};

// result(x) = a(b(x)).
inline Perm compose(const Perm& a, const Perm& b) {
  if (a.degree() != b.degree())
    throw Error("compose: degree mismatch (" + std::to_string(a.degree()) + " vs " +
                std::to_string(b.degree()) + ")");
  std::vector<Elem> img(a.degree());
  for (std::size_t x = 0; x < a.degree(); ++x) img[x] = a(b(static_cast<Elem>(x)));
  return Perm(std::move(img));
}

inline Perm inverse(const Perm& p) {
  std::vector<Elem> img(p.degree());
  for (std::size_t x = 0; x < p.degree(); ++x) img[p(static_cast<Elem>(x))] = static_cast<Elem>(x);
  return Perm(std::move(img));
}

// Cycle notation, identity prints as "()".
inline std::string to_cycles(const Perm& p) {
  std::string out;
  std::vector<char> done(p.degree(), 0);
  for (std::size_t i = 0; i < p.degree(); ++i) {
    if (done[i] || p(static_cast<Elem>(i)) == i) continue;
    out += '(';
    Elem x = static_cast<Elem>(i);
    bool first = true;
    while (!done[x]) {
      done[x] = 1;
      if (!first) out += ' ';
      out += std::to_string(x);
      first = false;
      x = p(x);
    }
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

}  // namespace forge
