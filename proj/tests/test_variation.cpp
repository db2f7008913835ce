#include <catch2/catch_amalgamated.hpp>

#include <array>

#include "multiform/io.hpp"
#include "multiform/random_forms.hpp"
#include "multiform/variation.hpp"

using namespace multiform;

TEST_CASE("variation field structure") {
  const Window w{3};
  const MatrixForm v = variation_field(w);
  CHECK(v.size() == 6);
  CHECK(is_restricted_variation(v));
  CHECK(coefficient(v, 1, 2, {1}) == ScalarExpr::atom(variation_atom(1, 2)));
  CHECK(coefficient(v, 1, 2, {2}).is_zero());

  MatrixForm off;
  add_matrix_term(off, 1, 2, {2}, ScalarExpr::atom(variation_atom(1, 2)));
  CHECK_FALSE(is_restricted_variation(off));
  CHECK(is_restricted_variation(MatrixForm{}));
}

TEST_CASE("level-3 first variation splits into bulk and boundary") {
  for (int n = 3; n <= 5; ++n) {
    const Window w{n};
    const MatrixForm b = darboux_gauge_field(w);
    const MatrixForm eta = variation_field(w);
    const VariationDecomposition d = first_variation_cs3(b, eta, w);
    CHECK(d.restricted_shape);
    CHECK(d.exact);
    CHECK_FALSE(d.linear.empty());
    REQUIRE(d.boundary_constant.has_value());
    CHECK(*d.boundary_constant == Rational(-1));
    CHECK(d.residue.empty());
    // reassembled: linear == bulk - d Tr(a ^ eta)
    const ScalarForm boundary =
        form_scale(Rational(-1), exterior_derivative(trace_wedge(b, eta), w));
    CHECK(d.linear == form_add(d.bulk, boundary));
  }
}

TEST_CASE("decomposition holds for arbitrary one-forms") {
  Rng rng(0x1a77eu);
  const Window w{4};
  for (int trial = 0; trial < 25; ++trial) {
    const MatrixForm a = random_matrix_form(rng, w, 1, 6, 2);
    const MatrixForm eta = random_matrix_form(rng, w, 1, 5, 2, Family::variation);
    const VariationDecomposition d = first_variation_cs3(a, eta, w);
    CHECK(d.exact);
    if (!(d.linear == d.bulk)) CHECK(*d.boundary_constant == Rational(-1));
  }
  // non-restricted variations are accepted, only flagged
  MatrixForm skew;
  add_matrix_term(skew, 1, 2, {3}, ScalarExpr::atom(variation_atom(1, 2)));
  const VariationDecomposition d = first_variation_cs3(darboux_gauge_field(w), skew, w);
  CHECK_FALSE(d.restricted_shape);
  CHECK(d.exact);
}

TEST_CASE("zero variation gives an empty decomposition") {
  const Window w{4};
  const VariationDecomposition d = first_variation_cs3(darboux_gauge_field(w), MatrixForm{}, w);
  CHECK(d.linear.empty());
  CHECK(d.bulk.empty());
  CHECK(d.exact);
}

TEST_CASE("bulk coefficients match the indexed display") {
  const Window w{4};
  const MatrixForm b = darboux_gauge_field(w);
  const MatrixForm eta = variation_field(w);
  const ScalarForm bulk = form_scale(Rational(2), trace_wedge(eta, curvature(b, w)));

  for (Coord a = 1; a <= w.n; ++a)
    for (Coord c = 1; c <= w.n; ++c)
      for (Coord e = 1; e <= w.n; ++e) {
        if (a == c || a == e || c == e) continue;
        // signed sum over arrangements (p, j, q) of the triple: the variation
        // entry eta[p,q] pairs with the curvature coefficient of (q, p)
        const std::array<Coord, 3> base{a, c, e};
        std::array<int, 3> perm{0, 1, 2};
        ScalarExpr expected;
        do {
          int sign = 1;
          for (int x = 0; x < 3; ++x)
            for (int y = x + 1; y < 3; ++y)
              if (perm[static_cast<std::size_t>(x)] > perm[static_cast<std::size_t>(y)])
                sign = -sign;
          const Coord p = base[static_cast<std::size_t>(perm[0])];
          const Coord j = base[static_cast<std::size_t>(perm[1])];
          const Coord q = base[static_cast<std::size_t>(perm[2])];
          ScalarExpr piece = ScalarExpr::atom(variation_atom(p, q)) *
                             (ScalarExpr::atom(field_atom(q, p, {j})) -
                              ScalarExpr::atom(field_atom(q, j)) * ScalarExpr::atom(field_atom(j, p)));
          expected += Rational(2 * sign) * piece;
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(coefficient(bulk, {a, c, e}) == expected);
      }
}

TEST_CASE("linearized curvature cube") {
  const Window w{6};
  const MatrixForm b = darboux_gauge_field(w);
  const MatrixForm eta = variation_field(w);
  const CurvatureCubeLinearization r = linearized_curvature_cube(b, eta, w);
  CHECK_FALSE(r.linear.empty());
  CHECK(r.match);

  // degree starves on a five-label window: both routes vanish
  const Window w5{5};
  const CurvatureCubeLinearization v =
      linearized_curvature_cube(darboux_gauge_field(w5), variation_field(w5), w5);
  CHECK(v.linear.empty());
  CHECK(v.expected.empty());
  CHECK(v.match);

  Rng rng(0xf3c4b1u);
  for (int trial = 0; trial < 3; ++trial) {
    const MatrixForm a = random_matrix_form(rng, w, 1, 6, 1);
    const MatrixForm h = random_matrix_form(rng, w, 1, 4, 1, Family::variation);
    CHECK(linearized_curvature_cube(a, h, w).match);
  }
}

TEST_CASE("variation input validation") {
  const Window w{3};
  MatrixForm two;
  add_matrix_term(two, 1, 2, {1, 2}, ScalarExpr::constant(Rational(1)));
  CHECK_THROWS_AS(first_variation_cs3(two, variation_field(w), w), std::invalid_argument);
  CHECK_THROWS_AS(first_variation_cs3(darboux_gauge_field(w), two, w), std::invalid_argument);
  CHECK_THROWS_AS(linearized_curvature_cube(two, variation_field(w), w), std::invalid_argument);
}
