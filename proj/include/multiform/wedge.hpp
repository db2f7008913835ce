#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "multiform/indices.hpp"

namespace multiform {

// Strictly increasing word of coordinate labels with a bitmask for O(1)
// disjointness tests.  Words with repeated labels do not exist; the sorting
// parity is returned to the caller and folded into coefficients.
struct WedgeWord {
  std::vector<std::uint8_t> idx;  // strictly increasing
  std::uint64_t mask = 0;

  int degree() const { return static_cast<int>(idx.size()); }
  bool contains(Coord j) const { return (mask >> j) & 1u; }

  friend bool operator==(const WedgeWord& a, const WedgeWord& b) { return a.idx == b.idx; }
  friend auto operator<=>(const WedgeWord& a, const WedgeWord& b) { return a.idx <=> b.idx; }

  std::vector<Coord> labels() const {
    std::vector<Coord> v;
    v.reserve(idx.size());
    for (auto u : idx) v.push_back(static_cast<Coord>(u));
    return v;
  }
};

inline WedgeWord sorted_word(const std::vector<Coord>& sorted_labels) {
  WedgeWord w;
  w.idx.reserve(sorted_labels.size());
  for (Coord c : sorted_labels) {
    if (c < 1 || c > 63) throw std::invalid_argument("WedgeWord: label out of range");
    if (!w.idx.empty() && static_cast<Coord>(w.idx.back()) >= c)
      throw std::invalid_argument("WedgeWord: labels must be strictly increasing");
    w.idx.push_back(static_cast<std::uint8_t>(c));
    w.mask |= (std::uint64_t{1} << c);
  }
  return w;
}

// Sorts an arbitrary label sequence; returns the canonical word and the
// permutation sign, or nothing when a label repeats.
inline std::optional<std::pair<WedgeWord, int>> word_from_sequence(std::vector<Coord> labels) {
  int sign = 1;
  for (std::size_t i = 1; i < labels.size(); ++i) {  // insertion sort counting swaps
    Coord v = labels[i];
    std::size_t p = i;
    while (p > 0 && labels[p - 1] > v) {
      labels[p] = labels[p - 1];
      --p;
      sign = -sign;
    }
    labels[p] = v;
  }
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] == labels[i - 1]) return std::nullopt;
  return std::make_pair(sorted_word(labels), sign);
}

// Concatenation a.b brought to canonical order; nullopt when the words share
// a label.  Sign is the parity of the merge.
inline std::optional<std::pair<WedgeWord, int>> merge_words(const WedgeWord& a,
                                                            const WedgeWord& b) {
  if (a.mask & b.mask) return std::nullopt;
  WedgeWord r;
  r.idx.reserve(a.idx.size() + b.idx.size());
  r.mask = a.mask | b.mask;
  int sign = 1;
  std::size_t i = 0, j = 0;
  while (i < a.idx.size() && j < b.idx.size()) {
    if (a.idx[i] < b.idx[j]) {
      r.idx.push_back(a.idx[i++]);
    } else {
      // b[j] crosses the remaining elements of a
      if ((a.idx.size() - i) % 2 == 1) sign = -sign;
      r.idx.push_back(b.idx[j++]);
    }
  }
  while (i < a.idx.size()) r.idx.push_back(a.idx[i++]);
  while (j < b.idx.size()) r.idx.push_back(b.idx[j++]);
  return std::make_pair(std::move(r), sign);
}

// dxi_j ^ w with the new label sorted into place.
inline std::optional<std::pair<WedgeWord, int>> prepend_label(Coord j, const WedgeWord& w) {
  if (j < 1 || j > 63) throw std::invalid_argument("prepend_label: label out of range");
  if (w.contains(j)) return std::nullopt;
  WedgeWord r;
  r.idx.reserve(w.idx.size() + 1);
  int sign = 1;
  std::size_t p = 0;
  while (p < w.idx.size() && static_cast<Coord>(w.idx[p]) < j) {
    r.idx.push_back(w.idx[p]);
    ++p;
    sign = -sign;
  }
  r.idx.push_back(static_cast<std::uint8_t>(j));
  for (; p < w.idx.size(); ++p) r.idx.push_back(w.idx[p]);
  r.mask = w.mask | (std::uint64_t{1} << j);
  return std::make_pair(std::move(r), sign);
}

}  // namespace multiform
