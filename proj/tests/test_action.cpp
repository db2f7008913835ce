#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "multiform/io.hpp"
#include "multiform/numeric/quadrature.hpp"

using namespace multiform;

TEST_CASE("legendre rules integrate polynomials exactly", "[action]") {
  for (int order = 1; order <= 8; ++order) {
    const QuadratureRule r = gauss_legendre(order);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(order));
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(std::abs(wsum - 2.0) < 1e-14);
    for (int k = 1; k <= 2 * order - 1; ++k) {
      double got = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i)
        got += r.weights[i] * std::pow(r.nodes[i], k);
      const double want = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(got - want) < 1e-13);
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("boundary orientation matches a hand integral", "[action]") {
  // L = B[1,2]*B[2,1] dxi_1 with B[i,j] = xi_i reads xi_1 xi_2 dxi_1 on the
  // unit square; its boundary integral is -1/2 by direct computation.
  const Window w{2};
  ScalarForm L;
  L[sorted_word({1})] = parse_expr("B[1,2]*B[2,1]");
  const CoordinateField xi;
  const double boundary = boundary_integral(L, 2, w, 0.0, 1.0, xi, 3);
  CHECK(std::abs(boundary - (-0.5)) < 1e-14);
  const ScalarForm dL = exterior_derivative(L, w);
  const double bulk = cube_integral(dL, 2, w, 0.0, 1.0, xi, 3);
  CHECK(std::abs(bulk - (-0.5)) < 1e-14);
}

TEST_CASE("boundary pairing matches the bulk integral", "[action]") {
  const Window w{4};
  const MatrixForm a = darboux_gauge_field(w);
  const ScalarForm L = cs3(a, w);
  const ScalarForm dL = exterior_derivative(L, w);
  const WaveField wave(w, 2026u);
  const double boundary = boundary_integral(L, 4, w, 0.1, 0.6, wave, 12);
  const double bulk = cube_integral(dL, 4, w, 0.1, 0.6, wave, 12);
  CHECK(std::abs(boundary) > 1e-3);  // a substantive equality, not 0 == 0
  CHECK(std::abs(boundary - bulk) < 1e-10);
}

TEST_CASE("degenerate quadrature inputs are rejected", "[action]") {
  const Window w{3};
  ScalarForm mixed;
  mixed[sorted_word({1})] = ScalarExpr::constant(Rational(1));
  const ConstantsField none({});
  CHECK_THROWS_AS(boundary_integral(mixed, 3, w, 0.0, 1.0, none, 2), std::invalid_argument);
  CHECK_THROWS_AS(cube_integral(mixed, 3, w, 0.0, 1.0, none, 2), std::invalid_argument);
  CHECK_THROWS_AS(cube_integral(mixed, 4, w, 0.0, 1.0, none, 2), std::invalid_argument);
  CHECK(boundary_integral(ScalarForm{}, 3, w, 0.0, 1.0, none, 2) == 0.0);
}

TEST_CASE("constant fields cancel on the boundary", "[action]") {
  // with constant entries every face integrand is constant, so opposite faces
  // cancel exactly whatever the values are
  const Window w{4};
  std::map<std::pair<Coord, Coord>, double> vals;
  double v = 0.05;
  for (Coord i = 1; i <= w.n; ++i)
    for (Coord j = 1; j <= w.n; ++j)
      if (i != j) vals[{i, j}] = (v += 0.07);
  const ConstantsField constants(vals);
  const ScalarForm L = cs3(darboux_gauge_field(w), w);
  CHECK(std::abs(boundary_integral(L, 4, w, 0.0, 1.0, constants, 4)) < 1e-15);
}

TEST_CASE("closure on solutions, signal off them", "[action]") {
  const Window w{4};
  const ScalarForm L = cs3(darboux_gauge_field(w), w);

  const ExactSolution exact(2.0, w);
  const double on_lo = std::abs(boundary_integral(L, 4, w, 0.0, 0.25, exact, 3));
  const double on_hi = std::abs(boundary_integral(L, 4, w, 0.0, 0.25, exact, 6));
  CHECK(on_lo < 1e-8);
  CHECK(on_hi < 1e-10);
  CHECK(on_hi <= on_lo + 1e-15);  // tightening the rule never loses the closure

  const WaveField wave(w, 2026u);
  const double off_a = boundary_integral(L, 4, w, 0.1, 0.6, wave, 8);
  const double off_b = boundary_integral(L, 4, w, 0.1, 0.6, wave, 10);
  CHECK(std::abs(off_a) > 1e-3);                   // a genuine off-shell signal
  CHECK(std::abs(off_a - off_b) < 1e-9);           // stable under refinement
  CHECK(std::abs(off_a - 2.9040765328e-03) < 1e-9);  // frozen magnitude
}

TEST_CASE("the weighted tower recombines termwise", "[action]") {
  const Window w{6};
  const ExactSolution exact(2.0, w);
  const GeneratingAction ga = generating_action(w, 0.0, 0.25, exact, 0.1, 2, {6, 4});
  REQUIRE(ga.terms.size() == 2);
  CHECK(ga.terms[0].level == 1);
  CHECK(ga.terms[1].level == 2);
  CHECK(ga.terms[0].weight == 0.1 / 2.0);
  CHECK(std::abs(ga.terms[1].weight - 0.01 / 3.0) < 1e-17);
  double total = 0.0;
  for (const auto& t : ga.terms) {
    CHECK(t.contribution == t.weight * t.integral);
    total += t.contribution;
  }
  CHECK(ga.total == total);
  // every term closes on a solution
  CHECK(std::abs(ga.terms[0].integral) < 1e-8);
  CHECK(std::abs(ga.terms[1].integral) < 1e-8);

  const GeneratingAction off = generating_action(w, 0.0, 0.25, exact, 0.0, 2, {6, 4});
  CHECK(off.total == 0.0);  // weights vanish, integrals unchanged
  CHECK(off.terms[0].integral == ga.terms[0].integral);

  CHECK_THROWS_AS(generating_action(Window{5}, 0.0, 0.25, exact, 0.1, 2, {6, 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(generating_action(w, 0.0, 0.25, exact, 0.1, 2, {6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(generating_action(w, 0.0, 0.25, exact, 0.1, 0, {}),
                  std::invalid_argument);
}
