#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace multiform {

// Coordinate labels are small positive integers drawn from a window
// W = {1, ..., n}.
using Coord = int;

struct Window {
  int n = 0;

  bool contains(Coord i) const { return i >= 1 && i <= n; }
  std::vector<Coord> labels() const {
    std::vector<Coord> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    return v;
  }
};

enum class Family : std::uint8_t {
  field = 0,      // off-diagonal matrix field entry, serialized "B"
  variation = 1,  // independent variation field, serialized "eta"
  residual = 2,   // first-order residual of the field equations, serialized "G"
};

inline constexpr int kMaxDerivOrder = 4;

// One commuting symbol: a field entry carrying a multiset of formal partial
// derivatives, or a residual symbol G[dir;row,col] which is never
// differentiated.  Diagonal entries (row == col) do not exist.
struct Atom {
  Family fam = Family::field;
  std::uint8_t row = 0;
  std::uint8_t col = 0;
  std::uint8_t nder = 0;
  std::array<std::uint8_t, kMaxDerivOrder> der{};  // sorted ascending, zero padded

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

inline Atom make_atom(Family fam, Coord row, Coord col, std::vector<Coord> derivs = {}) {
  if (row == col) throw std::invalid_argument("Atom: diagonal entries are excluded");
  if (row < 1 || col < 1 || row > 255 || col > 255)
    throw std::invalid_argument("Atom: index out of range");
  if (static_cast<int>(derivs.size()) > kMaxDerivOrder)
    throw std::invalid_argument("Atom: derivative order exceeds cap " +
                                std::to_string(kMaxDerivOrder));
  Atom a;
  a.fam = fam;
  a.row = static_cast<std::uint8_t>(row);
  a.col = static_cast<std::uint8_t>(col);
  a.nder = static_cast<std::uint8_t>(derivs.size());
  std::sort(derivs.begin(), derivs.end());
  for (std::size_t i = 0; i < derivs.size(); ++i) {
    if (derivs[i] < 1 || derivs[i] > 255) throw std::invalid_argument("Atom: bad derivative label");
    a.der[i] = static_cast<std::uint8_t>(derivs[i]);
  }
  return a;
}

inline Atom field_atom(Coord row, Coord col, std::vector<Coord> derivs = {}) {
  return make_atom(Family::field, row, col, std::move(derivs));
}

inline Atom variation_atom(Coord row, Coord col, std::vector<Coord> derivs = {}) {
  return make_atom(Family::variation, row, col, std::move(derivs));
}

// G[dir;row,col]: requires dir, row, col pairwise distinct.
inline Atom residual_atom(Coord dir, Coord row, Coord col) {
  if (dir == row || dir == col) throw std::invalid_argument("residual_atom: indices must be distinct");
  return make_atom(Family::residual, row, col, {dir});
}

// Adds one formal derivative; residual symbols are constants of the extended
// ring and cannot be differentiated.
inline Atom raise_derivative(const Atom& a, Coord j) {
  if (a.fam == Family::residual)
    throw std::logic_error("raise_derivative: residual symbols are not differentiable");
  if (a.nder >= kMaxDerivOrder)
    throw std::invalid_argument("raise_derivative: derivative order exceeds cap");
  Atom r = a;
  std::uint8_t v = static_cast<std::uint8_t>(j);
  int pos = r.nder;
  while (pos > 0 && r.der[static_cast<std::size_t>(pos - 1)] > v) {
    r.der[static_cast<std::size_t>(pos)] = r.der[static_cast<std::size_t>(pos - 1)];
    --pos;
  }
  r.der[static_cast<std::size_t>(pos)] = v;
  ++r.nder;
  return r;
}

inline std::vector<Coord> deriv_labels(const Atom& a) {
  std::vector<Coord> v;
  for (int i = 0; i < a.nder; ++i) v.push_back(a.der[static_cast<std::size_t>(i)]);
  return v;
}

// A monomial is the sorted multiset of its atoms.
using Monomial = std::vector<Atom>;

inline void sort_monomial(Monomial& m) { std::sort(m.begin(), m.end()); }

inline Monomial merge_monomials(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

}  // namespace multiform
