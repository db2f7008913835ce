#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "multiform/indices.hpp"
#include "multiform/rational.hpp"

namespace multiform {

// Polynomial in the commuting atoms with exact rational coefficients.
// Invariant: terms sorted by monomial, monomials unique, no zero coefficients.
// The canonical representation is therefore unique, so equality of values is
// equality of representations.
class ScalarExpr {
 public:
  struct Term {
    Monomial mono;
    Rational coef;
  };

  ScalarExpr() = default;

  static ScalarExpr constant(const Rational& c) {
    ScalarExpr e;
    if (!c.is_zero()) e.terms_.push_back({Monomial{}, c});
    return e;
  }

  static ScalarExpr atom(const Atom& a, const Rational& c = Rational(1)) {
    ScalarExpr e;
    if (!c.is_zero()) e.terms_.push_back({Monomial{a}, c});
    return e;
  }

  static ScalarExpr monomial(Monomial m, const Rational& c = Rational(1)) {
    ScalarExpr e;
    if (!c.is_zero()) {
      sort_monomial(m);
      e.terms_.push_back({std::move(m), c});
    }
    return e;
  }

  // Collects unsorted (monomial, coefficient) pairs and canonicalizes once.
  static ScalarExpr collect(std::vector<Term>&& raw) {
    for (auto& t : raw) sort_monomial(t.mono);
    return collect_sorted_atoms(std::move(raw));
  }

  // As collect(), for pairs whose monomials are already internally sorted.
  static ScalarExpr collect_sorted_atoms(std::vector<Term>&& raw) {
    std::sort(raw.begin(), raw.end(), [](const Term& a, const Term& b) {
      return MonomialLess{}(a.mono, b.mono);
    });
    ScalarExpr e;
    e.terms_.reserve(raw.size());
    for (auto& t : raw) {
      if (!e.terms_.empty() && e.terms_.back().mono == t.mono) {
        e.terms_.back().coef += t.coef;
        if (e.terms_.back().coef.is_zero()) e.terms_.pop_back();
      } else if (!t.coef.is_zero()) {
        e.terms_.push_back(std::move(t));
      }
    }
    return e;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient_of(Monomial m) const {
    sort_monomial(m);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, const Monomial& k) {
      return MonomialLess{}(t.mono, k);
    });
    if (it != terms_.end() && it->mono == m) return it->coef;
    return Rational(0);
  }

  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].mono == b.terms_[i].mono && a.terms_[i].coef == b.terms_[i].coef))
        return false;
    return true;
  }
  friend bool operator!=(const ScalarExpr& a, const ScalarExpr& b) { return !(a == b); }

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    ScalarExpr r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      if (a.terms_[i].mono == b.terms_[j].mono) {
        Rational c = a.terms_[i].coef + b.terms_[j].coef;
        if (!c.is_zero()) r.terms_.push_back({a.terms_[i].mono, c});
        ++i;
        ++j;
      } else if (MonomialLess{}(a.terms_[i].mono, b.terms_[j].mono)) {
        r.terms_.push_back(a.terms_[i++]);
      } else {
        r.terms_.push_back(b.terms_[j++]);
      }
    }
    while (i < a.terms_.size()) r.terms_.push_back(a.terms_[i++]);
    while (j < b.terms_.size()) r.terms_.push_back(b.terms_[j++]);
    return r;
  }

  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

  ScalarExpr operator-() const {
    ScalarExpr r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
  }

  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Term> raw;
    raw.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_)
        raw.push_back({merge_monomials(ta.mono, tb.mono), ta.coef * tb.coef});
    return collect_sorted_atoms(std::move(raw));
  }

  friend ScalarExpr operator*(const Rational& c, const ScalarExpr& a) {
    if (c.is_zero()) return {};
    ScalarExpr r = a;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
  }

  ScalarExpr& operator+=(const ScalarExpr& b) { return *this = *this + b; }
  ScalarExpr& operator-=(const ScalarExpr& b) { return *this = *this - b; }
  ScalarExpr& operator*=(const ScalarExpr& b) { return *this = *this * b; }

  // Formal partial derivative: Leibniz over atoms, each hit raises the atom's
  // derivative multiset by j.
  ScalarExpr partial(Coord j) const {
    std::vector<Term> raw;
    for (const auto& t : terms_) {
      std::size_t i = 0;
      while (i < t.mono.size()) {
        std::size_t run = i + 1;
        while (run < t.mono.size() && t.mono[run] == t.mono[i]) ++run;
        const auto mult = static_cast<std::int64_t>(run - i);
        Monomial m = t.mono;
        m.erase(m.begin() + static_cast<std::ptrdiff_t>(i));
        Atom raised = raise_derivative(t.mono[i], j);
        auto pos = std::upper_bound(m.begin(), m.end(), raised);
        m.insert(pos, raised);
        raw.push_back({std::move(m), t.coef * Rational(mult)});
        i = run;
      }
    }
    return collect_sorted_atoms(std::move(raw));
  }

  // Ring substitution: atoms mapped to nothing stay; an empty replacement
  // expression kills every monomial containing the atom.
  ScalarExpr substitute(const std::function<std::optional<ScalarExpr>(const Atom&)>& map) const {
    std::vector<Term> raw;
    for (const auto& t : terms_) {
      ScalarExpr acc = ScalarExpr::constant(t.coef);
      std::size_t i = 0;
      while (i < t.mono.size() && !acc.is_zero()) {
        std::size_t run = i + 1;
        while (run < t.mono.size() && t.mono[run] == t.mono[i]) ++run;
        if (auto rep = map(t.mono[i])) {
          for (std::size_t k = i; k < run; ++k) acc *= *rep;
        } else {
          ScalarExpr keep;
          Monomial m(t.mono.begin() + static_cast<std::ptrdiff_t>(i),
                     t.mono.begin() + static_cast<std::ptrdiff_t>(run));
          keep = ScalarExpr::monomial(std::move(m));
          acc *= keep;
        }
        i = run;
      }
      for (auto& term : acc.terms_) raw.push_back(std::move(term));
    }
    return collect_sorted_atoms(std::move(raw));
  }

  // Keeps the terms selected by the predicate.
  ScalarExpr filter(const std::function<bool(const Term&)>& keep) const {
    ScalarExpr r;
    for (const auto& t : terms_)
      if (keep(t)) r.terms_.push_back(t);
    return r;
  }

 private:
  std::vector<Term> terms_;
};

inline ScalarExpr operator*(const ScalarExpr& a, const Rational& c) { return c * a; }

}  // namespace multiform
