#pragma once

#include <optional>
#include <stdexcept>

#include "multiform/chern_simons.hpp"

namespace multiform {

// Canonical restricted variation: eta[p,q] dxi_p E_{pq}, one independent
// symbol per off-diagonal entry, each attached to its own row direction.
inline MatrixForm variation_field(const Window& w) {
  MatrixForm f;
  for (Coord p = 1; p <= w.n; ++p)
    for (Coord q = 1; q <= w.n; ++q)
      if (p != q) add_matrix_term(f, p, q, {p}, ScalarExpr::atom(variation_atom(p, q)));
  return f;
}

// Structural test for the restricted class: the (p,q) entry may only carry
// the dxi_p direction.  Coefficients are unconstrained.
inline bool is_restricted_variation(const MatrixForm& eta) {
  for (const auto& [k, e] : eta) {
    (void)e;
    if (k.word.degree() != 1 || k.word.labels()[0] != k.row) return false;
  }
  return true;
}

inline MatrixPoly curvature_poly(const MatrixPoly& x, const Window& w) {
  return poly_add(poly_d(x, w), poly_wedge(x, x));
}

namespace detail {
inline MatrixPoly line_through(const MatrixForm& a, const MatrixForm& eta) {
  MatrixPoly x;
  if (!a.empty()) x.emplace(0, a);
  if (!eta.empty()) x.emplace(1, eta);
  return x;
}
}  // namespace detail

// Level-3 odd form along the line a + t*eta, expanded in t.
inline ScalarPoly cs3_poly(const MatrixPoly& x, const Window& w) {
  ScalarPoly r = poly_trace_wedge(x, poly_d(x, w));
  return poly_add(r, poly_scale(Rational(2, 3), poly_trace_wedge(poly_wedge(x, x), x)));
}

struct VariationDecomposition {
  ScalarForm linear;  // t-coefficient of cs3(a + t*eta)
  ScalarForm bulk;    // 2 Tr(eta ^ F_a)
  // c with linear - bulk == d(c * Tr(a ^ eta)); empty when no exact fit exists
  std::optional<Rational> boundary_constant;
  ScalarForm residue;  // what remains after bulk and boundary; empty on success
  bool restricted_shape = false;
  bool exact = false;  // residue vanished
};

// Splits the first variation of the level-3 form into the field-equation bulk
// term and an exact boundary term, with the boundary constant fitted rather
// than assumed.
inline VariationDecomposition first_variation_cs3(const MatrixForm& a, const MatrixForm& eta,
                                                  const Window& w) {
  require_gauge_field(a, "first_variation_cs3");
  if (!is_homogeneous(eta, 1))
    throw std::invalid_argument("first_variation_cs3: variation must be a 1-form");
  VariationDecomposition d;
  d.linear = poly_coeff(cs3_poly(detail::line_through(a, eta), w), 1);
  d.bulk = form_scale(Rational(2), trace_wedge(eta, curvature(a, w)));
  const ScalarForm diff = form_sub(d.linear, d.bulk);
  const ScalarForm ref = exterior_derivative(trace_wedge(a, eta), w);
  // an empty difference needs no boundary term at all
  d.boundary_constant =
      diff.empty() ? std::optional<Rational>(Rational(0)) : fit_constant(diff, ref);
  d.residue = d.boundary_constant ? form_sub(diff, form_scale(*d.boundary_constant, ref)) : diff;
  d.restricted_shape = is_restricted_variation(eta);
  d.exact = d.boundary_constant.has_value() && d.residue.empty();
  return d;
}

// Linearization of the traced curvature cube: the t-coefficient must equal
// 3 Tr(F_a^2 ^ F_1) with F_1 the linearized curvature.
struct CurvatureCubeLinearization {
  ScalarForm linear;
  ScalarForm expected;
  bool match = false;
};

inline CurvatureCubeLinearization linearized_curvature_cube(const MatrixForm& a,
                                                            const MatrixForm& eta,
                                                            const Window& w) {
  require_gauge_field(a, "linearized_curvature_cube");
  if (!is_homogeneous(eta, 1))
    throw std::invalid_argument("linearized_curvature_cube: variation must be a 1-form");
  const MatrixPoly fx = curvature_poly(detail::line_through(a, eta), w);
  CurvatureCubeLinearization r;
  r.linear = poly_coeff(poly_trace_wedge(poly_wedge(fx, fx), fx), 1);
  r.expected = form_scale(
      Rational(3), trace_wedge(wedge(poly_coeff(fx, 0), poly_coeff(fx, 0)), poly_coeff(fx, 1)));
  r.match = r.linear == r.expected;
  return r;
}

}  // namespace multiform
