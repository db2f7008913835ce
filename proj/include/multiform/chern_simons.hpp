#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "multiform/graded_poly.hpp"

namespace multiform {

// Gauge field of the lattice-direction hierarchy: sum over off-diagonal pairs
// of B[k,l] dxi_k E_{kl}.
inline MatrixForm darboux_gauge_field(const Window& w) {
  MatrixForm f;
  for (Coord k = 1; k <= w.n; ++k)
    for (Coord l = 1; l <= w.n; ++l)
      if (k != l) add_matrix_term(f, k, l, {k}, ScalarExpr::atom(field_atom(k, l)));
  return f;
}

inline void require_gauge_field(const MatrixForm& a, const char* who) {
  if (!is_homogeneous(a, 1))
    throw std::invalid_argument(std::string(who) + ": input must be a homogeneous 1-form");
}

inline MatrixForm curvature(const MatrixForm& a, const Window& w) {
  require_gauge_field(a, "curvature");
  return form_add(exterior_derivative(a, w), wedge(a, a));
}

// Explicit odd forms at levels 3 and 5.
inline ScalarForm cs3(const MatrixForm& a, const Window& w) {
  require_gauge_field(a, "cs3");
  MatrixForm da = exterior_derivative(a, w);
  ScalarForm r = trace(wedge(a, da));
  return form_add(r, form_scale(Rational(2, 3), trace(wedge(wedge(a, a), a))));
}

inline ScalarForm cs5(const MatrixForm& a, const Window& w) {
  require_gauge_field(a, "cs5");
  MatrixForm da = exterior_derivative(a, w);
  MatrixForm a2 = wedge(a, a);
  ScalarForm r = trace(wedge(wedge(a, da), da));
  r = form_add(r, form_scale(Rational(3, 2), trace(wedge(wedge(a, a2), da))));
  r = form_add(r, form_scale(Rational(3, 5), trace(wedge(wedge(a2, a2), a))));
  return r;
}

// Level 2n+1 via the one-parameter interpolation: (n+1) * integral over the
// unit interval of Tr(A ^ (t dA + t^2 A^2)^n), integrated exactly in t.
inline ScalarForm cs_odd(const MatrixForm& a, int n, const Window& w) {
  require_gauge_field(a, "cs_odd");
  if (n < 0) throw std::invalid_argument("cs_odd: level must be nonnegative");
  if (n == 0) return trace(a);
  MatrixPoly f_t{{1, exterior_derivative(a, w)}, {2, wedge(a, a)}};
  for (auto it = f_t.begin(); it != f_t.end();)
    it = it->second.empty() ? f_t.erase(it) : std::next(it);
  MatrixPoly p{{0, a}};
  for (int i = 0; i + 1 < n; ++i) p = poly_wedge(p, f_t);
  // take the trace with the last factor directly; the full product matrix is
  // far larger than its diagonal
  ScalarForm r = integrate_unit(poly_trace_wedge(p, f_t));
  return form_scale(Rational(n + 1), r);
}

// Tr(f^power), built from halved factors so the product matrix itself never
// materializes.
inline ScalarForm traced_power(const MatrixForm& f, int power) {
  if (power < 1) throw std::invalid_argument("traced_power: power must be positive");
  if (power == 1) return trace(f);
  MatrixForm left = f;
  for (int i = 1; i < power / 2; ++i) left = wedge(left, f);
  MatrixForm right = power - power / 2 == power / 2 ? left : wedge(left, f);
  return trace_wedge(right, left);
}

// Interpolation weight attached to each ordered factor pattern of
// Tr(A ^ X_1 ^ ... ^ X_n), X_i in {dA, A^2}; bit i of the pattern set means
// X_{i+1} = A^2.  Weight = (n+1)/(parameter power + 1).
inline std::map<std::uint32_t, Rational> cs_odd_term_weights(int n) {
  if (n < 0) throw std::invalid_argument("cs_odd_term_weights: level must be nonnegative");
  std::map<std::uint32_t, Rational> r;
  for (std::uint32_t pat = 0; pat < (1u << n); ++pat) {
    const int quad = std::popcount(pat);
    r.emplace(pat, Rational(n + 1, n + quad + 1));
  }
  return r;
}

// --- components -------------------------------------------------------------

// Antisymmetric tensor components of a homogeneous scalar form: the canonical
// coefficient of a sorted word equals degree! times its component.
struct ComponentTable {
  int degree = 0;
  std::map<std::vector<Coord>, ScalarExpr> comps;
};

inline std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline ComponentTable extract_components(const ScalarForm& f, int degree) {
  if (!is_homogeneous(f, degree))
    throw std::invalid_argument("extract_components: form is not homogeneous of the given degree");
  ComponentTable t;
  t.degree = degree;
  const Rational inv(1, factorial(degree));
  for (const auto& [w, e] : f) t.comps.emplace(w.labels(), inv * e);
  return t;
}

inline ScalarForm reassemble(const ComponentTable& t) {
  ScalarForm f;
  const Rational fac(factorial(t.degree));
  for (const auto& [labels, e] : t.comps) add_scalar_term(f, labels, fac * e);
  return f;
}

// --- reference densities ----------------------------------------------------

namespace detail {
inline ScalarExpr b(Coord i, Coord j) { return ScalarExpr::atom(field_atom(i, j)); }
inline ScalarExpr db(Coord d, Coord i, Coord j) { return ScalarExpr::atom(field_atom(i, j, {d})); }
}  // namespace detail

// Reference 3-form density for one index triple.
inline ScalarExpr reference_L3(Coord p, Coord q, Coord r) {
  using detail::b;
  using detail::db;
  const Rational half(1, 2);
  ScalarExpr e = half * (b(r, q) * db(p, q, r) - b(q, r) * db(p, r, q));
  e += half * (b(q, p) * db(r, p, q) - b(p, q) * db(r, q, p));
  e += half * (b(p, r) * db(q, r, p) - b(r, p) * db(q, p, r));
  e += b(r, p) * b(p, q) * b(q, r);
  e -= b(r, q) * b(q, p) * b(p, r);
  return e;
}

// Reference 5-form density: signed sum over permutations of the five labels.
inline ScalarExpr reference_L5(Coord j, Coord k, Coord l, Coord m, Coord n) {
  using detail::b;
  using detail::db;
  std::array<Coord, 5> base{j, k, l, m, n};
  std::array<int, 5> perm{0, 1, 2, 3, 4};
  ScalarExpr sum;
  do {
    int sign = 1;  // parity of perm by inversion count
    for (int x = 0; x < 5; ++x)
      for (int y = x + 1; y < 5; ++y)
        if (perm[static_cast<std::size_t>(x)] > perm[static_cast<std::size_t>(y)]) sign = -sign;
    const Coord J = base[static_cast<std::size_t>(perm[0])];
    const Coord K = base[static_cast<std::size_t>(perm[1])];
    const Coord L = base[static_cast<std::size_t>(perm[2])];
    const Coord M = base[static_cast<std::size_t>(perm[3])];
    const Coord N = base[static_cast<std::size_t>(perm[4])];
    ScalarExpr bracket = b(J, L) * db(K, L, N) * db(M, N, J);
    bracket += Rational(3, 2) * (b(J, K) * b(K, L) * b(L, N) * db(M, N, J));
    bracket += Rational(3, 5) * (b(J, K) * b(K, L) * b(L, M) * b(M, N) * b(N, J));
    sum += Rational(sign) * bracket;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return Rational(1, 120) * sum;
}

// Exact proportionality fit: returns c with target == c * reference, or
// nothing when no such rational exists.  reference == 0 demands target == 0.
inline std::optional<Rational> fit_constant(const ScalarExpr& target, const ScalarExpr& reference) {
  if (reference.is_zero()) {
    if (target.is_zero()) return Rational(0);
    return std::nullopt;
  }
  if (target.is_zero()) return std::nullopt;
  const auto& rt = reference.terms().front();
  const Rational c = target.coefficient_of(rt.mono) / rt.coef;
  if (c.is_zero()) return std::nullopt;
  if (target == c * reference) return c;
  return std::nullopt;
}

// Form-level proportionality fit over all words at once.
inline std::optional<Rational> fit_constant(const ScalarForm& target, const ScalarForm& reference) {
  if (reference.empty()) {
    if (target.empty()) return Rational(0);
    return std::nullopt;
  }
  const auto& [w0, e0] = *reference.begin();
  auto it = target.find(w0);
  if (it == target.end()) return std::nullopt;
  const auto c = fit_constant(it->second, e0);
  if (!c) return std::nullopt;
  if (target == form_scale(*c, reference)) return c;
  return std::nullopt;
}

// Largest denominator bound for the interpolation constants at level 2n+1.
inline std::int64_t weight_denominator_lcm(int n) {
  std::int64_t l = 1;
  for (int i = 1; i <= 2 * n + 2; ++i) l = std::lcm(l, static_cast<std::int64_t>(i));
  return l;
}

}  // namespace multiform
