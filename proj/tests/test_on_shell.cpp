#include <catch2/catch_amalgamated.hpp>

#include "multiform/io.hpp"
#include "multiform/on_shell.hpp"
#include "multiform/random_forms.hpp"

using namespace multiform;

TEST_CASE("lattice right-hand side") {
  CHECK(darboux_rhs(1, 2, 3) == parse_expr("B[1,3]*B[3,2]"));
  CHECK_THROWS_AS(darboux_rhs(1, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(darboux_rhs(1, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(darboux_rhs(1, 2, 1), std::invalid_argument);
}

TEST_CASE("on-shell reduction basics") {
  CHECK(reduce_on_shell(parse_expr("d(3)B[1,2]")) == parse_expr("B[1,3]*B[3,2]"));
  // second transverse derivative, both elimination orders folded into one value
  CHECK(reduce_on_shell(parse_expr("d(3,4)B[1,2]")) ==
        parse_expr("B[1,4]*B[4,3]*B[3,2] + B[1,3]*B[3,4]*B[4,2]"));

  // own-direction derivatives are irreducible
  for (const char* s : {"d(1)B[1,2]", "d(2)B[1,2]", "d(1,2)B[1,2]", "B[1,2]"}) {
    const ScalarExpr e = parse_expr(s);
    CHECK(is_on_shell_reduced(e));
    CHECK(reduce_on_shell(e) == e);
  }
  // variation and residual symbols are inert
  CHECK(reduce_on_shell(parse_expr("d(3)eta[1,2]")) == parse_expr("d(3)eta[1,2]"));
  CHECK(reduce_on_shell(parse_expr("G[3;1,2]")) == parse_expr("G[3;1,2]"));

  // mixed case: the transverse label goes first, then the produced
  // d(1)B[3,2] reduces again while d(1)B[1,3] stays
  const ScalarExpr m = reduce_on_shell(parse_expr("d(1,3)B[1,2]"));
  CHECK(is_on_shell_reduced(m));
  CHECK(m == parse_expr("d(1)B[1,3]*B[3,2] + B[1,3]*B[3,1]*B[1,2]"));
}

TEST_CASE("reduction is confluent") {
  Rng rng(0x0f5e11u);
  const Window w{5};
  const TransversePick pick_last = [](std::size_t n) { return n - 1; };
  const TransversePick pick_random = [&rng](std::size_t n) {
    return static_cast<std::size_t>(rng.uniform(0, static_cast<int>(n) - 1));
  };
  for (int trial = 0; trial < 500; ++trial) {
    const ScalarExpr e = random_scalar_expr(rng, w, 3, 3, 3);
    const ScalarExpr a = reduce_on_shell(e);
    CHECK(is_on_shell_reduced(a));
    CHECK(a == reduce_on_shell(e, pick_last));
    CHECK(a == reduce_on_shell(e, pick_random));
    CHECK(a == reduce_on_shell(a));  // idempotent
  }
}

TEST_CASE("mixed-derivative consistency") {
  const MdcResult r4 = mdc_check(Window{4});
  CHECK(r4.tuples == 24);
  CHECK(r4.consistent);
  const MdcResult r6 = mdc_check(Window{6});
  CHECK(r6.tuples == 360);
  CHECK(r6.consistent);
  CHECK_THROWS_AS(mdc_check(Window{3}), std::invalid_argument);
}

TEST_CASE("first-order residual expansion") {
  CHECK(g_expand(parse_expr("d(3)B[1,2]")) == parse_expr("G[3;1,2] + B[1,3]*B[3,2]"));
  // untouched: own-direction, higher order, other families
  for (const char* s : {"d(1)B[1,2]", "d(2)B[1,2]", "d(3,4)B[1,2]", "B[1,2]", "d(3)eta[1,2]",
                        "G[4;1,2]"}) {
    CHECK(g_expand(parse_expr(s)) == parse_expr(s));
  }
  // products expand multiplicatively
  CHECK(g_expand(parse_expr("d(3)B[1,2]*d(4)B[2,1]")) ==
        parse_expr("G[3;1,2] + B[1,3]*B[3,2]") * parse_expr("G[4;2,1] + B[2,4]*B[4,1]"));

  CHECK(kill_residuals(parse_expr("G[3;1,2] + B[1,3]*B[3,2]")) == parse_expr("B[1,3]*B[3,2]"));
  CHECK(kill_residuals(parse_expr("G[3;1,2]*B[1,2]")).is_zero());

  const auto degs = residual_degrees(parse_expr("G[3;1,2]*G[4;2,1] + B[1,2]"));
  CHECK(degs == std::set<int>{0, 2});
}

TEST_CASE("traced curvature square is residual-bilinear") {
  for (int n = 4; n <= 5; ++n) {
    const Window w{n};
    const ScalarForm traced = trace(wedge(curvature(darboux_gauge_field(w), w),
                                          curvature(darboux_gauge_field(w), w)));
    ScalarForm bilinear;
    for (Coord p = 1; p <= w.n; ++p)
      for (Coord q = 1; q <= w.n; ++q) {
        if (p == q) continue;
        for (Coord j = 1; j <= w.n; ++j) {
          if (j == p || j == q) continue;
          for (Coord k = 1; k <= w.n; ++k) {
            if (k == p || k == q) continue;
            add_scalar_term(bilinear, {j, p, k, q},
                            ScalarExpr::atom(residual_atom(j, p, q)) *
                                ScalarExpr::atom(residual_atom(k, q, p)));
          }
        }
      }
    CHECK(g_expand(traced) == bilinear);
  }
}

TEST_CASE("zero certificates") {
  const CertificateResult c1 = nfold_zero_certificate(1, Window{4});
  CHECK(c1.monomials > 0);
  CHECK(c1.residual_fold_set == std::set<int>{2});
  CHECK(c1.pure_field_zero);
  CHECK(c1.boxed_fold == 2);
  CHECK(c1.displayed_fold == 1);
  CHECK(c1.matches_boxed);
  CHECK_FALSE(c1.matches_displayed);

  const CertificateResult c1w = nfold_zero_certificate(1, Window{5});
  CHECK(c1w.residual_fold_set == std::set<int>{2});
  CHECK(c1w.pure_field_zero);

  const CertificateResult c2 = nfold_zero_certificate(2, Window{6});
  CHECK(c2.monomials > 0);
  CHECK(c2.residual_fold_set == std::set<int>{3});
  CHECK(c2.pure_field_zero);
  CHECK(c2.matches_boxed);
  CHECK_FALSE(c2.matches_displayed);

  CHECK_THROWS_AS(nfold_zero_certificate(1, Window{3}), std::invalid_argument);
  CHECK_THROWS_AS(nfold_zero_certificate(2, Window{5}), std::invalid_argument);
  CHECK_THROWS_AS(nfold_zero_certificate(0, Window{6}), std::invalid_argument);
}

TEST_CASE("untraced square keeps sub-fold monomials") {
  const RemarkResult r3 = remark_check(Window{3});
  CHECK(r3.vacuous);

  const RemarkResult r4 = remark_check(Window{4});
  CHECK_FALSE(r4.vacuous);
  CHECK(r4.traced_degrees == std::set<int>{2});
  CHECK(r4.untraced_has_subfold);
  CHECK(r4.untraced_degrees.count(2) == 1);
  CHECK(*r4.untraced_degrees.begin() < 2);
}

TEST_CASE("restricted field equations") {
  const auto eqs = restricted_el_equations(Window{3});
  REQUIRE(eqs.size() == 6);
  for (const auto& eq : eqs) {
    CHECK(eq.dir != eq.row);
    CHECK(eq.dir != eq.col);
    CHECK(eq.row != eq.col);
    // the residual is the G symbol itself under expansion
    CHECK(g_expand(eq.residual) == ScalarExpr::atom(residual_atom(eq.dir, eq.row, eq.col)));
    // and vanishes identically on shell
    CHECK(reduce_on_shell(eq.residual).is_zero());
  }
  // the specific entry d(1)B[2,3] - B[2,1]*B[1,3] is present
  bool found = false;
  for (const auto& eq : eqs)
    if (eq.dir == 1 && eq.row == 2 && eq.col == 3) {
      found = true;
      CHECK(eq.residual == parse_expr("d(1)B[2,3] - B[2,1]*B[1,3]"));
    }
  CHECK(found);
}
