#include <catch2/catch_amalgamated.hpp>

#include "multiform/chern_simons.hpp"
#include "multiform/io.hpp"
#include "multiform/random_forms.hpp"

using namespace multiform;

namespace {

// Dual route for the interpolation weights: assemble Sum_pat weight(pat) *
// Tr(A ^ X_1 ^ ... ^ X_n) with X_i in {dA, A^2} chosen by the pattern bits and
// compare against the integral form.
ScalarForm weighted_sum(const MatrixForm& a, int n, const Window& w) {
  const MatrixForm da = exterior_derivative(a, w);
  const MatrixForm a2 = wedge(a, a);
  ScalarForm total;
  for (const auto& [pat, wt] : cs_odd_term_weights(n)) {
    MatrixForm prod = a;
    for (int i = 0; i < n; ++i) prod = wedge(prod, (pat >> i) & 1u ? a2 : da);
    total = form_add(total, form_scale(wt, trace(prod)));
  }
  return total;
}

// Materialized dual route for traced_power: build the full product, then trace.
ScalarForm traced_power_materialized(const MatrixForm& f, int power) {
  MatrixForm p = f;
  for (int i = 1; i < power; ++i) p = wedge(p, f);
  return trace(p);
}

ScalarForm tr_curvature_power(const MatrixForm& a, int power, const Window& w) {
  return traced_power(curvature(a, w), power);
}

}  // namespace

TEST_CASE("gauge field structure") {
  const Window w{4};
  const MatrixForm a = darboux_gauge_field(w);
  CHECK(a.size() == 12);  // off-diagonal pairs
  CHECK(is_homogeneous(a, 1));
  CHECK(coefficient(a, 1, 2, {1}) == ScalarExpr::atom(field_atom(1, 2)));
  CHECK(coefficient(a, 3, 1, {3}) == ScalarExpr::atom(field_atom(3, 1)));
  CHECK(coefficient(a, 1, 2, {2}).is_zero());
  CHECK(coefficient(a, 1, 2, {3}).is_zero());
}

TEST_CASE("curvature entries") {
  const Window w{3};
  const MatrixForm f = curvature(darboux_gauge_field(w), w);
  CHECK(coefficient(f, 1, 2, {3, 1}) == parse_expr("d(3)B[1,2] - B[1,3]*B[3,2]"));
  CHECK(coefficient(f, 1, 2, {2, 1}) == parse_expr("d(2)B[1,2]"));
  // diagonal entries come only from A^2
  CHECK(coefficient(f, 1, 1, {1, 2}) == parse_expr("B[1,2]*B[2,1]"));
  CHECK(coefficient(f, 1, 1, {1, 3}) == parse_expr("B[1,3]*B[3,1]"));
  CHECK(coefficient(f, 1, 1, {2, 3}).is_zero());
  CHECK(is_homogeneous(f, 2));

  CHECK(curvature(MatrixForm{}, w).empty());
  MatrixForm bad = darboux_gauge_field(w);
  add_matrix_term(bad, 1, 2, {1, 2}, ScalarExpr::constant(Rational(1)));
  CHECK_THROWS_AS(curvature(bad, w), std::invalid_argument);
}

TEST_CASE("diagonal-only product trace matches the materialized one") {
  Rng rng(0x7acedu);
  for (int n = 4; n <= 5; ++n) {
    const Window w{n};
    const MatrixForm f = curvature(darboux_gauge_field(w), w);
    CHECK(traced_power(f, 2) == traced_power_materialized(f, 2));
    CHECK(traced_power(f, 3) == traced_power_materialized(f, 3));
    for (int trial = 0; trial < 5; ++trial) {
      const MatrixForm m = random_matrix_form(rng, w, rng.uniform(1, 2), 6, 1);
      CHECK(traced_power(m, 2) == traced_power_materialized(m, 2));
      CHECK(trace_wedge(m, m) == trace(wedge(m, m)));
    }
  }
  CHECK_THROWS_AS(traced_power(MatrixForm{}, 0), std::invalid_argument);
}

TEST_CASE("level 3 exterior derivative equals traced curvature square") {
  Rng rng(0xc5311u);
  const Window w{4};
  const MatrixForm b = darboux_gauge_field(w);
  CHECK(exterior_derivative(cs3(b, w), w) == tr_curvature_power(b, 2, w));
  for (int trial = 0; trial < 30; ++trial) {
    const MatrixForm a = random_matrix_form(rng, w, 1, 6, 2);
    CHECK(exterior_derivative(cs3(a, w), w) == tr_curvature_power(a, 2, w));
  }
}

TEST_CASE("level 5 exterior derivative equals traced curvature cube") {
  Rng rng(0xc5522u);
  const Window w{6};
  const MatrixForm b = darboux_gauge_field(w);
  const ScalarForm lhs = exterior_derivative(cs5(b, w), w);
  CHECK_FALSE(lhs.empty());  // substantive only for windows of six or more
  CHECK(lhs == tr_curvature_power(b, 3, w));
  for (int trial = 0; trial < 3; ++trial) {
    const MatrixForm a = random_matrix_form(rng, w, 1, 6, 2);
    CHECK(exterior_derivative(cs5(a, w), w) == tr_curvature_power(a, 3, w));
  }
}

TEST_CASE("interpolated odd form matches the explicit ones") {
  Rng rng(0xab0dd1u);
  const Window w{4};
  const MatrixForm b = darboux_gauge_field(w);
  CHECK(cs_odd(b, 0, w) == trace(b));  // empty: the gauge field has no diagonal
  CHECK(cs_odd(b, 1, w) == cs3(b, w));
  CHECK(cs_odd(b, 2, w) == cs5(b, w));
  const Window w5{5};
  const MatrixForm b5 = darboux_gauge_field(w5);
  CHECK(cs_odd(b5, 2, w5) == cs5(b5, w5));
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixForm a = random_matrix_form(rng, w, 1, 5, 2);
    CHECK(cs_odd(a, 1, w) == cs3(a, w));
    CHECK(cs_odd(a, 2, w) == cs5(a, w));
  }
  CHECK_THROWS_AS(cs_odd(b, -1, w), std::invalid_argument);
}

TEST_CASE("interpolation weights") {
  const auto w1 = cs_odd_term_weights(1);
  REQUIRE(w1.size() == 2);
  CHECK(w1.at(0u) == Rational(1));
  CHECK(w1.at(1u) == Rational(2, 3));

  const auto w2 = cs_odd_term_weights(2);
  REQUIRE(w2.size() == 4);
  CHECK(w2.at(0u) == Rational(1));
  CHECK(w2.at(1u) == Rational(3, 4));
  CHECK(w2.at(2u) == Rational(3, 4));
  CHECK(w2.at(3u) == Rational(3, 5));

  // every weight denominator divides lcm(1..2n+2)
  for (int n = 0; n <= 3; ++n) {
    const std::int64_t l = weight_denominator_lcm(n);
    for (const auto& [pat, wt] : cs_odd_term_weights(n)) CHECK(l % wt.den() == 0);
  }

  // weight route and integration route agree on the full form
  Rng rng(0x3e1657u);
  const Window w{4};
  const MatrixForm b = darboux_gauge_field(w);
  for (int n = 1; n <= 3; ++n) CHECK(weighted_sum(b, n, w) == cs_odd(b, n, w));
  for (int trial = 0; trial < 8; ++trial) {
    const MatrixForm a = random_matrix_form(rng, w, 1, 5, 2);
    CHECK(weighted_sum(a, 1, w) == cs_odd(a, 1, w));
    CHECK(weighted_sum(a, 2, w) == cs_odd(a, 2, w));
  }
}

TEST_CASE("component extraction and reassembly") {
  const Window w{5};
  const MatrixForm b = darboux_gauge_field(w);
  const ScalarForm form = cs3(b, w);
  const ComponentTable t = extract_components(form, 3);
  CHECK(t.degree == 3);
  CHECK(t.comps.size() == 10);  // one sorted triple per 3-subset of the window
  CHECK(reassemble(t) == form);

  // canonical coefficient = degree! * component
  const auto& c123 = t.comps.at({1, 2, 3});
  CHECK(coefficient(form, {1, 2, 3}) == Rational(6) * c123);

  ScalarForm mixed = form;
  add_scalar_term(mixed, {1, 2}, ScalarExpr::constant(Rational(1)));
  CHECK_THROWS_AS(extract_components(mixed, 3), std::invalid_argument);
  CHECK_THROWS_AS(extract_components(form, 2), std::invalid_argument);

  CHECK(extract_components(ScalarForm{}, 3).comps.empty());
}

TEST_CASE("level 3 components match the reference density") {
  const Window w{5};
  const ComponentTable t = extract_components(cs3(darboux_gauge_field(w), w), 3);
  const Rational expected(2, 6);  // 2 / 3!
  for (const auto& [labels, comp] : t.comps) {
    REQUIRE(labels.size() == 3);
    CHECK(comp == expected * reference_L3(labels[0], labels[1], labels[2]));
  }
}

TEST_CASE("reference density antisymmetry") {
  CHECK(reference_L3(2, 1, 3) == -reference_L3(1, 2, 3));
  CHECK(reference_L3(1, 3, 2) == -reference_L3(1, 2, 3));
  CHECK(reference_L3(2, 3, 1) == reference_L3(1, 2, 3));
  CHECK(reference_L5(2, 1, 3, 4, 5) == -reference_L5(1, 2, 3, 4, 5));
  CHECK(reference_L5(2, 3, 4, 5, 1) == reference_L5(1, 2, 3, 4, 5));
}

TEST_CASE("level 5 component is proportional to the reference density") {
  const Window w{5};
  const ComponentTable t = extract_components(cs5(darboux_gauge_field(w), w), 5);
  REQUIRE(t.comps.size() == 1);
  const auto fit = fit_constant(t.comps.at({1, 2, 3, 4, 5}), reference_L5(1, 2, 3, 4, 5));
  REQUIRE(fit.has_value());
  // with components normalized by degree!, the proportionality constant is 1
  CHECK(*fit == Rational(1));
}

TEST_CASE("proportionality fit") {
  const ScalarExpr e = parse_expr("B[1,2]*B[2,1] - 2*d(3)B[1,2]");
  CHECK(fit_constant(Rational(-3, 7) * e, e) == Rational(-3, 7));
  CHECK_FALSE(fit_constant(e, parse_expr("B[1,2]")).has_value());
  CHECK_FALSE(fit_constant(e + parse_expr("B[1,3]"), e).has_value());
  CHECK(fit_constant(ScalarExpr{}, ScalarExpr{}) == Rational(0));
  CHECK_FALSE(fit_constant(e, ScalarExpr{}).has_value());
  CHECK_FALSE(fit_constant(ScalarExpr{}, e).has_value());
}

TEST_CASE("odd forms vanish on too-small windows") {
  const Window w{4};
  CHECK(cs5(darboux_gauge_field(w), w).empty());  // 5-form needs five labels
  const Window w2{2};
  CHECK(cs3(darboux_gauge_field(w2), w2).empty());
}
