#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "multiform/chern_simons.hpp"

namespace multiform {

// Right-hand side of the lattice equation for a transverse derivative:
// d(k) B[i,j] = B[i,k] * B[k,j] with i, j, k pairwise distinct.
inline ScalarExpr darboux_rhs(Coord i, Coord j, Coord k) {
  if (i == j || i == k || j == k)
    throw std::invalid_argument("darboux_rhs: indices must be pairwise distinct");
  return ScalarExpr::atom(field_atom(i, k)) * ScalarExpr::atom(field_atom(k, j));
}

// Derivative labels of a field atom that are transverse to its index pair.
// Only such derivatives are rewritable; own-direction ones are irreducible.
inline std::vector<Coord> transverse_derivs(const Atom& a) {
  std::vector<Coord> v;
  if (a.fam != Family::field) return v;
  for (int i = 0; i < a.nder; ++i) {
    const Coord d = a.der[static_cast<std::size_t>(i)];
    if (d != a.row && d != a.col) v.push_back(d);
  }
  return v;
}

inline bool is_on_shell_reduced(const ScalarExpr& e) {
  for (const auto& t : e.terms())
    for (const Atom& a : t.mono)
      if (!transverse_derivs(a).empty()) return false;
  return true;
}

// Picks which of the available transverse labels to rewrite first; used to
// probe confluence.  Receives the count of candidates, returns an index.
using TransversePick = std::function<std::size_t(std::size_t)>;

// Eliminates every transverse derivative by the lattice equation.  Each
// rewrite lowers the affected derivative orders, so iteration terminates
// regardless of the pick order.
inline ScalarExpr reduce_on_shell(const ScalarExpr& e, const TransversePick& pick = {}) {
  ScalarExpr cur = e;
  for (;;) {
    bool changed = false;
    cur = cur.substitute([&](const Atom& a) -> std::optional<ScalarExpr> {
      const auto tv = transverse_derivs(a);
      if (tv.empty()) return std::nullopt;
      const Coord k = tv[pick ? pick(tv.size()) : 0];
      std::vector<Coord> rest = deriv_labels(a);
      rest.erase(std::find(rest.begin(), rest.end(), k));
      ScalarExpr r = darboux_rhs(a.row, a.col, k);
      for (Coord d : rest) r = r.partial(d);
      changed = true;
      return r;
    });
    if (!changed) return cur;
  }
}

// --- mixed-derivative consistency --------------------------------------------

struct MdcResult {
  int tuples = 0;
  bool consistent = true;
};

// Cross-check of the lattice equations: for pairwise distinct (i, j, k, l)
// the two reduced forms of d(k) d(l) B[i,j] must coincide.
inline MdcResult mdc_check(const Window& w) {
  if (w.n < 4) throw std::invalid_argument("mdc_check: window must hold at least four labels");
  MdcResult r;
  for (Coord i = 1; i <= w.n; ++i)
    for (Coord j = 1; j <= w.n; ++j)
      for (Coord k = 1; k <= w.n; ++k)
        for (Coord l = 1; l <= w.n; ++l) {
          if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
          const ScalarExpr via_k = reduce_on_shell(darboux_rhs(i, j, k).partial(l));
          const ScalarExpr via_l = reduce_on_shell(darboux_rhs(i, j, l).partial(k));
          ++r.tuples;
          if (!(via_k == via_l)) r.consistent = false;
        }
  return r;
}

// --- residual expansion -------------------------------------------------------

// First-order curvature coefficients rewrite as d(j) B[k,l] =
// G[j;k,l] + B[k,j]*B[j,l]; all other atoms pass through.
inline std::optional<ScalarExpr> first_order_expansion(const Atom& a) {
  if (a.fam != Family::field || a.nder != 1) return std::nullopt;
  const Coord j = a.der[0];
  if (j == a.row || j == a.col) return std::nullopt;
  ScalarExpr r = ScalarExpr::atom(residual_atom(j, a.row, a.col));
  r += ScalarExpr::atom(field_atom(a.row, j)) * ScalarExpr::atom(field_atom(j, a.col));
  return r;
}

inline ScalarExpr g_expand(const ScalarExpr& e) { return e.substitute(first_order_expansion); }

inline ScalarForm g_expand(const ScalarForm& f) {
  ScalarForm r;
  for (const auto& [w, e] : f) {
    ScalarExpr x = g_expand(e);
    if (!x.is_zero()) r.emplace(w, std::move(x));
  }
  return r;
}

inline MatrixForm g_expand(const MatrixForm& f) {
  MatrixForm r;
  for (const auto& [k, e] : f) {
    ScalarExpr x = g_expand(e);
    if (!x.is_zero()) r.emplace(k, std::move(x));
  }
  return r;
}

inline ScalarExpr kill_residuals(const ScalarExpr& e) {
  return e.substitute([](const Atom& a) -> std::optional<ScalarExpr> {
    if (a.fam == Family::residual) return ScalarExpr{};
    return std::nullopt;
  });
}

// Per-monomial counts of residual symbols.
inline std::set<int> residual_degrees(const ScalarExpr& e) {
  std::set<int> s;
  for (const auto& t : e.terms()) {
    int d = 0;
    for (const Atom& a : t.mono)
      if (a.fam == Family::residual) ++d;
    s.insert(d);
  }
  return s;
}

template <class Key>
std::set<int> residual_degrees(const std::map<Key, ScalarExpr>& f) {
  std::set<int> s;
  for (const auto& [k, e] : f) s.merge(residual_degrees(e));
  return s;
}

// --- zero certificates --------------------------------------------------------

struct CertificateResult {
  int level = 0;   // n, for the traced (n+1)-th curvature power
  int window = 0;
  int monomials = 0;                // total monomial count of the expanded trace
  std::set<int> residual_fold_set;  // per-monomial residual degrees observed
  bool pure_field_zero = false;     // form vanishes once residual symbols are set to zero
  int boxed_fold = 0;               // claimed n + 1
  int displayed_fold = 0;           // the alternative claim n, reported alongside
  bool matches_boxed = false;
  bool matches_displayed = false;
};

// Expands Tr(F^(n+1)) for the lattice gauge field in residual symbols and
// measures the fold.  Windows below 2n+2 make the trace vanish identically,
// which would certify nothing, hence the guard.
inline CertificateResult nfold_zero_certificate(int n, const Window& w) {
  if (n < 1) throw std::invalid_argument("nfold_zero_certificate: level must be positive");
  if (w.n < 2 * n + 2)
    throw std::invalid_argument(
        "nfold_zero_certificate: window too small, the traced power vanishes identically");
  const MatrixForm f = curvature(darboux_gauge_field(w), w);
  MatrixForm p = f;
  for (int i = 0; i < n; ++i) p = wedge(p, f);
  const ScalarForm expanded = g_expand(trace(p));

  CertificateResult r;
  r.level = n;
  r.window = w.n;
  r.boxed_fold = n + 1;
  r.displayed_fold = n;
  bool pure_zero = true;
  for (const auto& [word, e] : expanded) {
    r.monomials += static_cast<int>(e.size());
    if (!kill_residuals(e).is_zero()) pure_zero = false;
  }
  r.residual_fold_set = residual_degrees(expanded);
  r.pure_field_zero = pure_zero && r.monomials > 0;
  const bool uniform = r.residual_fold_set.size() == 1;
  r.matches_boxed = uniform && *r.residual_fold_set.begin() == r.boxed_fold;
  r.matches_displayed = uniform && *r.residual_fold_set.begin() == r.displayed_fold;
  return r;
}

// Contrast between the traced and untraced second curvature power: the
// untraced matrix entries keep monomials below the fold (own-direction
// derivatives and diagonal products), the trace does not.
struct RemarkResult {
  bool vacuous = false;
  std::set<int> traced_degrees;
  std::set<int> untraced_degrees;
  bool untraced_has_subfold = false;
};

inline RemarkResult remark_check(const Window& w) {
  const MatrixForm f = curvature(darboux_gauge_field(w), w);
  const MatrixForm f2 = wedge(f, f);
  const ScalarForm tr = trace(f2);
  RemarkResult r;
  if (tr.empty()) {
    r.vacuous = true;
    return r;
  }
  r.traced_degrees = residual_degrees(g_expand(tr));
  r.untraced_degrees = residual_degrees(g_expand(f2));
  for (int d : r.untraced_degrees)
    if (d < 2) r.untraced_has_subfold = true;
  return r;
}

// --- field equations of the restricted variation -------------------------------

struct ElEquation {
  Coord dir = 0;  // differentiation direction, transverse to the entry
  Coord row = 0;
  Coord col = 0;
  ScalarExpr residual;  // d(dir) B[row,col] - B[row,dir]*B[dir,col]
};

inline std::vector<ElEquation> restricted_el_equations(const Window& w) {
  std::vector<ElEquation> v;
  for (Coord a = 1; a <= w.n; ++a)
    for (Coord b = 1; b <= w.n; ++b)
      for (Coord c = 1; c <= w.n; ++c) {
        if (a == b || a == c || b == c) continue;
        ScalarExpr res = ScalarExpr::atom(field_atom(b, c, {a})) - darboux_rhs(b, c, a);
        v.push_back(ElEquation{a, b, c, std::move(res)});
      }
  return v;
}

}  // namespace multiform
