#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "multiform/scalar_expr.hpp"
#include "multiform/wedge.hpp"

namespace multiform {

struct MatrixKey {
  Coord row = 0;
  Coord col = 0;
  WedgeWord word;

  friend bool operator==(const MatrixKey& a, const MatrixKey& b) {
    return a.row == b.row && a.col == b.col && a.word == b.word;
  }
  friend auto operator<=>(const MatrixKey& a, const MatrixKey& b) {
    if (auto c = a.row <=> b.row; c != 0) return c;
    if (auto c = a.col <=> b.col; c != 0) return c;
    return a.word <=> b.word;
  }
};

// Matrix-unit-valued exterior form: entry coefficient of dxi_word E_{row,col}.
using MatrixForm = std::map<MatrixKey, ScalarExpr>;
// Scalar-valued exterior form.
using ScalarForm = std::map<WedgeWord, ScalarExpr>;

namespace detail {

template <class Key>
class FormAccum {
 public:
  void add(const Key& k, const ScalarExpr& e) {
    if (e.is_zero()) return;
    Bucket& b = buckets_[k];
    for (const auto& t : e.terms()) b.raw.push_back(t);
    maybe_collapse(b);
  }
  void add_term(const Key& k, ScalarExpr::Term t) {
    Bucket& b = buckets_[k];
    b.raw.push_back(std::move(t));
    maybe_collapse(b);
  }

  std::map<Key, ScalarExpr> finalize() {
    std::map<Key, ScalarExpr> out;
    for (auto& [k, b] : buckets_) {
      ScalarExpr e = ScalarExpr::collect_sorted_atoms(std::move(b.raw));
      if (!e.is_zero()) out.emplace(k, std::move(e));
    }
    return out;
  }

 private:
  struct Bucket {
    std::vector<ScalarExpr::Term> raw;
    std::size_t collapsed = 0;
  };

  // Large products would otherwise hold every raw term until finalize();
  // collapsing once a bucket doubles past the threshold bounds the working
  // set without quadratic re-collection.
  static constexpr std::size_t kCollapseAt = std::size_t{1} << 15;
  static void maybe_collapse(Bucket& b) {
    if (b.raw.size() < kCollapseAt || b.raw.size() < 2 * b.collapsed) return;
    ScalarExpr e = ScalarExpr::collect_sorted_atoms(std::move(b.raw));
    b.raw.assign(e.terms().begin(), e.terms().end());
    b.collapsed = b.raw.size();
  }

  std::map<Key, Bucket> buckets_;
};

}  // namespace detail

// --- construction -----------------------------------------------------------

// Adds coeff * dxi_labels E_{row,col}; the label sequence may be unsorted, its
// parity folds into the coefficient.  Duplicate labels make the term vanish.
inline void add_matrix_term(MatrixForm& f, Coord row, Coord col, const std::vector<Coord>& labels,
                            const ScalarExpr& coeff) {
  auto ws = word_from_sequence(labels);
  if (!ws || coeff.is_zero()) return;
  ScalarExpr c = ws->second == 1 ? coeff : -coeff;
  auto it = f.find(MatrixKey{row, col, ws->first});
  if (it == f.end()) {
    f.emplace(MatrixKey{row, col, ws->first}, std::move(c));
  } else {
    it->second += c;
    if (it->second.is_zero()) f.erase(it);
  }
}

inline void add_scalar_term(ScalarForm& f, const std::vector<Coord>& labels,
                            const ScalarExpr& coeff) {
  auto ws = word_from_sequence(labels);
  if (!ws || coeff.is_zero()) return;
  ScalarExpr c = ws->second == 1 ? coeff : -coeff;
  auto it = f.find(ws->first);
  if (it == f.end()) {
    f.emplace(ws->first, std::move(c));
  } else {
    it->second += c;
    if (it->second.is_zero()) f.erase(it);
  }
}

// --- linear operations ------------------------------------------------------

template <class Key>
std::map<Key, ScalarExpr> form_add(const std::map<Key, ScalarExpr>& a,
                                   const std::map<Key, ScalarExpr>& b) {
  std::map<Key, ScalarExpr> r = a;
  for (const auto& [k, e] : b) {
    auto it = r.find(k);
    if (it == r.end()) {
      r.emplace(k, e);
    } else {
      it->second += e;
      if (it->second.is_zero()) r.erase(it);
    }
  }
  return r;
}

template <class Key>
std::map<Key, ScalarExpr> form_scale(const Rational& c, const std::map<Key, ScalarExpr>& a) {
  std::map<Key, ScalarExpr> r;
  if (c.is_zero()) return r;
  for (const auto& [k, e] : a) r.emplace(k, c * e);
  return r;
}

template <class Key>
std::map<Key, ScalarExpr> form_sub(const std::map<Key, ScalarExpr>& a,
                                   const std::map<Key, ScalarExpr>& b) {
  return form_add(a, form_scale(Rational(-1), b));
}

// --- degree -----------------------------------------------------------------

template <class Key>
std::set<int> degrees(const std::map<Key, ScalarExpr>& f) {
  std::set<int> d;
  for (const auto& [k, e] : f) {
    if constexpr (std::is_same_v<Key, MatrixKey>)
      d.insert(k.word.degree());
    else
      d.insert(k.degree());
  }
  return d;
}

template <class Key>
bool is_homogeneous(const std::map<Key, ScalarExpr>& f, int degree) {
  auto d = degrees(f);
  return d.empty() || (d.size() == 1 && *d.begin() == degree);
}

// --- products ---------------------------------------------------------------

// Wedge of matrix forms through the matrix-unit product E_{kl} E_{mn} =
// delta_{lm} E_{kn}; coefficients are 0-forms and commute.
inline MatrixForm wedge(const MatrixForm& a, const MatrixForm& b) {
  std::unordered_map<int, std::vector<const std::pair<const MatrixKey, ScalarExpr>*>> by_row;
  for (const auto& kv : b) by_row[kv.first.row].push_back(&kv);
  detail::FormAccum<MatrixKey> acc;
  for (const auto& [ka, ea] : a) {
    auto it = by_row.find(ka.col);
    if (it == by_row.end()) continue;
    for (const auto* kv : it->second) {
      const auto& [kb, eb] = *kv;
      if (ka.word.mask & kb.word.mask) continue;
      auto ws = merge_words(ka.word, kb.word);
      ScalarExpr prod = ea * eb;
      if (ws->second == -1) prod = -prod;
      acc.add(MatrixKey{ka.row, kb.col, std::move(ws->first)}, prod);
    }
  }
  return acc.finalize();
}

inline ScalarForm wedge(const ScalarForm& a, const ScalarForm& b) {
  detail::FormAccum<WedgeWord> acc;
  for (const auto& [wa, ea] : a) {
    for (const auto& [wb, eb] : b) {
      if (wa.mask & wb.mask) continue;
      auto ws = merge_words(wa, wb);
      ScalarExpr prod = ea * eb;
      if (ws->second == -1) prod = -prod;
      acc.add(ws->first, prod);
    }
  }
  return acc.finalize();
}

// --- exterior derivative ----------------------------------------------------

inline MatrixForm exterior_derivative(const MatrixForm& f, const Window& w) {
  detail::FormAccum<MatrixKey> acc;
  for (const auto& [k, e] : f) {
    for (Coord j = 1; j <= w.n; ++j) {
      if (k.word.contains(j)) continue;
      ScalarExpr pd = e.partial(j);
      if (pd.is_zero()) continue;
      auto ws = prepend_label(j, k.word);
      if (ws->second == -1) pd = -pd;
      acc.add(MatrixKey{k.row, k.col, std::move(ws->first)}, pd);
    }
  }
  return acc.finalize();
}

inline ScalarForm exterior_derivative(const ScalarForm& f, const Window& w) {
  detail::FormAccum<WedgeWord> acc;
  for (const auto& [word, e] : f) {
    for (Coord j = 1; j <= w.n; ++j) {
      if (word.contains(j)) continue;
      ScalarExpr pd = e.partial(j);
      if (pd.is_zero()) continue;
      auto ws = prepend_label(j, word);
      if (ws->second == -1) pd = -pd;
      acc.add(ws->first, pd);
    }
  }
  return acc.finalize();
}

// --- trace ------------------------------------------------------------------

inline ScalarForm trace(const MatrixForm& f) {
  detail::FormAccum<WedgeWord> acc;
  for (const auto& [k, e] : f)
    if (k.row == k.col) acc.add(k.word, e);
  return acc.finalize();
}

// Trace of a wedge product without materializing the product matrix; only
// entry pairs closing a cycle contribute.
inline ScalarForm trace_wedge(const MatrixForm& a, const MatrixForm& b) {
  std::unordered_map<int, std::vector<const std::pair<const MatrixKey, ScalarExpr>*>> by_pair;
  for (const auto& kv : b) by_pair[kv.first.row * 256 + kv.first.col].push_back(&kv);
  detail::FormAccum<WedgeWord> acc;
  for (const auto& [ka, ea] : a) {
    auto it = by_pair.find(ka.col * 256 + ka.row);
    if (it == by_pair.end()) continue;
    for (const auto* kv : it->second) {
      const auto& [kb, eb] = *kv;
      if (ka.word.mask & kb.word.mask) continue;
      auto ws = merge_words(ka.word, kb.word);
      ScalarExpr prod = ea * eb;
      if (ws->second == -1) prod = -prod;
      acc.add(ws->first, prod);
    }
  }
  return acc.finalize();
}

// --- coefficient access -----------------------------------------------------

// Coefficient of the given (possibly unsorted) label sequence, with the
// permutation sign applied; zero when absent or degenerate.
inline ScalarExpr coefficient(const MatrixForm& f, Coord row, Coord col,
                              const std::vector<Coord>& labels) {
  auto ws = word_from_sequence(labels);
  if (!ws) return {};
  auto it = f.find(MatrixKey{row, col, ws->first});
  if (it == f.end()) return {};
  return ws->second == 1 ? it->second : -it->second;
}

inline ScalarExpr coefficient(const ScalarForm& f, const std::vector<Coord>& labels) {
  auto ws = word_from_sequence(labels);
  if (!ws) return {};
  auto it = f.find(ws->first);
  if (it == f.end()) return {};
  return ws->second == 1 ? it->second : -it->second;
}

}  // namespace multiform
