#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "multiform/chern_simons.hpp"
#include "multiform/io.hpp"
#include "multiform/numeric/grid.hpp"
#include "multiform/numeric/quadrature.hpp"
#include "multiform/on_shell.hpp"
#include "multiform/random_forms.hpp"
#include "multiform/report.hpp"
#include "multiform/variation.hpp"

namespace multiform {

// Everything a run depends on; echoed verbatim into the report so two runs
// can be compared field by field.
struct RunConfig {
  int window = 7;
  int n_max = 2;
  int trials = 50;
  int threads = 1;
  double c = 1.0;
  double corner = 0.0;
  double edge = 0.4;
  std::vector<double> h_schedule = {0.05, 0.04, 0.025, 0.02};
  std::vector<int> quad_orders = {6, 4};
  std::string out;
  std::string format = "json";
  bool corrupt_l3 = false;  // deliberately corrupts one reference density

  void validate() const {
    if (n_max < 1 || n_max > 3)
      throw std::invalid_argument("config: n_max must lie in [1, 3]");
    if (window < 2 * n_max + 3)
      throw std::invalid_argument("config: window must be at least 2*n_max + 3");
    if (trials < 1) throw std::invalid_argument("config: trials must be positive");
    if (threads < 1) throw std::invalid_argument("config: threads must be positive");
    if (!(edge > 0.0)) throw std::invalid_argument("config: edge must be positive");
    if (h_schedule.empty()) throw std::invalid_argument("config: h schedule is empty");
    for (std::size_t i = 0; i < h_schedule.size(); ++i) {
      const double h = h_schedule[i];
      if (!(h > 0.0)) throw std::invalid_argument("config: h values must be positive");
      if (i > 0 && !(h < h_schedule[i - 1]))
        throw std::invalid_argument("config: h schedule must be strictly decreasing");
      const double ratio = edge / h;
      if (std::abs(ratio - std::round(ratio)) > 1e-6)
        throw std::invalid_argument("config: edge must be an integral number of steps for every h");
    }
    if (quad_orders.empty()) throw std::invalid_argument("config: quadrature orders are empty");
    for (int o : quad_orders)
      if (o < 1) throw std::invalid_argument("config: quadrature orders must be positive");
    if (format != "json" && format != "text")
      throw std::invalid_argument("config: format must be json or text");
  }

  // orders for tower terms 1..n_max, extending the list by its last entry
  std::vector<int> effective_orders() const {
    std::vector<int> v;
    for (int n = 1; n <= n_max; ++n)
      v.push_back(quad_orders[std::min<std::size_t>(static_cast<std::size_t>(n - 1),
                                                    quad_orders.size() - 1)]);
    return v;
  }

  std::vector<std::pair<std::string, std::string>> describe() const {
    auto num = [](double v) {
      char b[32];
      std::snprintf(b, sizeof b, "%g", v);
      return std::string(b);
    };
    std::string hs, qs;
    for (std::size_t i = 0; i < h_schedule.size(); ++i)
      hs += (i ? "," : "") + num(h_schedule[i]);
    const std::vector<int> eff = effective_orders();
    for (std::size_t i = 0; i < eff.size(); ++i)
      qs += (i ? "," : "") + std::to_string(eff[i]);
    return {{"window", std::to_string(window)},
            {"n_max", std::to_string(n_max)},
            {"trials", std::to_string(trials)},
            {"threads", std::to_string(threads)},
            {"c", num(c)},
            {"corner", num(corner)},
            {"edge", num(edge)},
            {"h_schedule", hs},
            {"quad_orders", qs},
            {"corrupt_l3", corrupt_l3 ? "true" : "false"}};
  }
};

namespace checks {

namespace detail {

template <class... A>
std::string strf(const char* fmt, A... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return std::string(buf);
}

inline Rational parity(int p, int q) { return Rational((p * q) % 2 == 0 ? 1 : -1); }

}  // namespace detail

inline CheckResult core_order_independence(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{cfg.window};
  Rng rng(0x0de7u);
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    const ScalarExpr a = random_scalar_expr(rng, w, 4, 3, 2);
    const ScalarExpr b = random_scalar_expr(rng, w, 4, 3, 2);
    const ScalarExpr c = random_scalar_expr(rng, w, 3, 2, 1);
    ok = ok && a + b == b + a;
    ok = ok && a * b == b * a;
    ok = ok && (a + b) + c == a + (b + c);
    ok = ok && (a * b) * c == a * (b * c);
    ok = ok && (a - a).is_zero();
    ok = ok && parse_expr(to_string(a)) == a;
  }
  return {"core/canonical-order-independence",
          "sums and products collect to the same normal form whatever the construction order",
          ok, detail::strf("%d random triples, window %d", cfg.trials, cfg.window), sw.ms()};
}

inline CheckResult core_dd_zero(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{cfg.window};
  Rng rng(0xdd0u);
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    const ScalarForm f = random_scalar_form(rng, w, 1 + (t % 2), 4, 2);
    ok = ok && exterior_derivative(exterior_derivative(f, w), w).empty();
    const MatrixForm m = random_matrix_form(rng, w, 1 + (t % 2), 4, 2);
    ok = ok && exterior_derivative(exterior_derivative(m, w), w).empty();
  }
  return {"core/dd-zero", "the exterior derivative squares to zero on scalar and matrix forms",
          ok, detail::strf("%d random forms of degree 1 and 2", 2 * cfg.trials), sw.ms()};
}

inline CheckResult core_graded_leibniz(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{cfg.window};
  Rng rng(0x1e1b1u);
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    const int p = 1 + (t % 2);
    const ScalarForm a = random_scalar_form(rng, w, p, 3, 2);
    const ScalarForm b = random_scalar_form(rng, w, 1 + ((t / 2) % 2), 3, 2);
    const ScalarForm lhs = exterior_derivative(wedge(a, b), w);
    const ScalarForm rhs = form_add(wedge(exterior_derivative(a, w), b),
                                    form_scale(detail::parity(p, 1), wedge(a, exterior_derivative(b, w))));
    ok = ok && lhs == rhs;
  }
  return {"core/graded-leibniz",
          "d distributes over wedge products with the degree sign of the first factor", ok,
          detail::strf("%d random pairs", cfg.trials), sw.ms()};
}

inline CheckResult core_trace_cyclicity(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{cfg.window};
  Rng rng(0x7c1cu);
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    const int p = 1 + (t % 2), q = 1 + ((t / 2) % 2);
    const MatrixForm a = random_matrix_form(rng, w, p, 4, 1);
    const MatrixForm b = random_matrix_form(rng, w, q, 4, 1);
    ok = ok && trace_wedge(a, b) == form_scale(detail::parity(p, q), trace_wedge(b, a));
  }
  return {"core/trace-cyclicity",
          "the trace of a wedge product is graded-symmetric under swapping the factors", ok,
          detail::strf("%d random pairs", cfg.trials), sw.ms()};
}

inline CheckResult core_scalar_anticommutativity(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{cfg.window};
  Rng rng(0xa2c0u);
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    const int p = 1 + (t % 2), q = 1 + ((t / 2) % 2);
    const ScalarForm a = random_scalar_form(rng, w, p, 4, 1);
    const ScalarForm b = random_scalar_form(rng, w, q, 4, 1);
    ok = ok && wedge(a, b) == form_scale(detail::parity(p, q), wedge(b, a));
  }
  return {"core/scalar-anticommutativity",
          "scalar forms commute or anticommute according to degree parity", ok,
          detail::strf("%d random pairs", cfg.trials), sw.ms()};
}

inline CheckResult cs_structure(const RunConfig& cfg) {
  Stopwatch sw;
  bool ok = true;
  for (int n : {4, 5}) {
    const Window w{n};
    const MatrixForm a = darboux_gauge_field(w);
    ok = ok && cs_odd(a, 0, w) == trace(a);
    ok = ok && cs_odd(a, 1, w) == cs3(a, w);
    ok = ok && cs_odd(a, 2, w) == cs5(a, w);
  }
  const auto w1 = cs_odd_term_weights(1);
  ok = ok && w1.size() == 2 && w1.at(0) == Rational(1) && w1.at(1) == Rational(2, 3);
  const auto w2 = cs_odd_term_weights(2);
  ok = ok && w2.size() == 4 && w2.at(0) == Rational(1) && w2.at(1) == Rational(3, 4) &&
       w2.at(2) == Rational(3, 4) && w2.at(3) == Rational(3, 5);
  for (int n = 1; n <= 3; ++n) {
    const std::int64_t l = weight_denominator_lcm(n);
    for (const auto& [pattern, wt] : cs_odd_term_weights(n)) {
      (void)pattern;
      ok = ok && l % wt.den() == 0;
    }
  }
  const int randoms = std::max(1, cfg.trials / 10);
  Rng rng(0x57c7u);
  const Window w5{5};
  for (int t = 0; t < randoms; ++t) {
    const MatrixForm a = random_matrix_form(rng, w5, 1, 5, 1);
    ok = ok && cs_odd(a, 1, w5) == cs3(a, w5);
    ok = ok && cs_odd(a, 2, w5) == cs5(a, w5);
  }
  return {"cs/structure",
          "the interpolation-integrated odd forms reproduce the explicit cubic and quintic "
          "forms, with exact term weights 1, 2/3 and 1, 3/4, 3/4, 3/5",
          ok, detail::strf("windows 4 and 5 plus %d random fields; weight lcm divides", randoms),
          sw.ms()};
}

inline CheckResult cs_dcs_identity(const RunConfig& cfg, int level) {
  Stopwatch sw;
  const int n = 2 * level + 3;  // smallest window where the identity has content
  const Window w{n};
  const MatrixForm a = darboux_gauge_field(w);
  bool ok = exterior_derivative(cs_odd(a, level, w), w) == traced_power(curvature(a, w), level + 1);
  int randoms = 0;
  if (level <= 2) {
    randoms = std::max(1, level == 1 ? cfg.trials : cfg.trials / 5);
    Rng rng(0xdc5u + static_cast<std::uint64_t>(level));
    for (int t = 0; t < randoms; ++t) {
      const MatrixForm r = random_matrix_form(rng, w, 1, 5, 2);
      ok = ok && exterior_derivative(cs_odd(r, level, w), w) ==
                     traced_power(curvature(r, w), level + 1);
    }
  }
  return {detail::strf("cs/dcs-identity-n%d", level),
          detail::strf("d of the degree-%d odd form equals the traced curvature power %d",
                       2 * level + 1, level + 1),
          ok, detail::strf("lattice field at window %d plus %d random one-forms", n, randoms),
          sw.ms()};
}

inline CheckResult cs_component_match_3(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{5};
  const ComponentTable table = extract_components(cs3(darboux_gauge_field(w), w), 3);
  int matched = 0, total = 0;
  for (Coord p = 1; p <= w.n; ++p)
    for (Coord q = p + 1; q <= w.n; ++q)
      for (Coord r = q + 1; r <= w.n; ++r) {
        ++total;
        ScalarExpr ref = reference_L3(p, q, r);
        if (cfg.corrupt_l3) ref += ScalarExpr::atom(field_atom(p, q));
        auto it = table.comps.find({p, q, r});
        if (it != table.comps.end() && it->second == Rational(2, 6) * ref) ++matched;
      }
  return {"cs/component-match-3",
          "every degree-3 component equals one third of the indexed reference density", matched == total,
          detail::strf("%d of %d label triples matched at window 5", matched, total), sw.ms()};
}

inline CheckResult cs_component_match_5(const RunConfig&) {
  Stopwatch sw;
  const Window w{5};
  const ComponentTable table = extract_components(cs5(darboux_gauge_field(w), w), 5);
  const ScalarExpr ref = reference_L5(1, 2, 3, 4, 5);
  auto it = table.comps.find({1, 2, 3, 4, 5});
  const std::optional<Rational> fit =
      it == table.comps.end() ? std::nullopt : fit_constant(it->second, ref);
  const bool ok = fit.has_value() && *fit == Rational(1);
  return {"cs/component-match-5",
          "the degree-5 component is proportional to the quintic reference density with a "
          "single exact constant",
          ok, fit ? "fitted constant " + fit->str() : "no constant fits", sw.ms()};
}

inline CheckResult darboux_mdc(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{std::max(4, cfg.window)};
  const MdcResult r = mdc_check(w);
  return {"darboux/mdc",
          "transverse mixed derivatives of the lattice flows coincide after reduction", r.consistent,
          detail::strf("%d ordered index tuples at window %d", r.tuples, w.n), sw.ms()};
}

inline CheckResult darboux_zero_certificate(const RunConfig&, int level) {
  Stopwatch sw;
  const Window w{2 * level + 2};
  const CertificateResult c = nfold_zero_certificate(level, w);
  const bool fold_uniform =
      c.residual_fold_set == std::set<int>{level + 1};
  const bool ok = c.pure_field_zero && fold_uniform && c.matches_boxed && !c.matches_displayed;
  std::string folds;
  for (int f : c.residual_fold_set) folds += (folds.empty() ? "" : ",") + std::to_string(f);
  return {detail::strf("darboux/zero-certificate-n%d", level),
          detail::strf("the traced curvature power %d vanishes to order %d in the first-order "
                       "residuals, matching the stronger of the two claimed folds",
                       level + 1, level + 1),
          ok,
          detail::strf("window %d, %d monomials, fold set {%s}, pure-field part zero: %s",
                       c.window, c.monomials, folds.c_str(), c.pure_field_zero ? "yes" : "no"),
          sw.ms()};
}

inline CheckResult darboux_remark_untraced(const RunConfig&) {
  Stopwatch sw;
  const RemarkResult small = remark_check(Window{3});
  const RemarkResult r = remark_check(Window{4});
  const bool ok = small.vacuous && !r.vacuous && r.traced_degrees == std::set<int>{2} &&
                  r.untraced_has_subfold;
  std::string untraced;
  for (int d : r.untraced_degrees) untraced += (untraced.empty() ? "" : ",") + std::to_string(d);
  return {"darboux/remark-untraced",
          "without the trace the curvature square keeps residual terms below the certified fold",
          ok, detail::strf("window 4 untraced residual degrees {%s}", untraced.c_str()), sw.ms()};
}

inline CheckResult el_restricted_equations(const RunConfig&) {
  Stopwatch sw;
  int total = 0, good = 0;
  for (int n : {3, 4}) {
    for (const auto& eq : restricted_el_equations(Window{n})) {
      ++total;
      const bool g = g_expand(eq.residual) ==
                     ScalarExpr::atom(residual_atom(eq.dir, eq.row, eq.col));
      const bool z = reduce_on_shell(eq.residual).is_zero();
      if (g && z) ++good;
    }
  }
  return {"el/restricted-equations",
          "restricted variations produce exactly the lattice equations, whose first-order "
          "expansion is the matching residual symbol",
          good == total, detail::strf("%d of %d equations at windows 3 and 4", good, total),
          sw.ms()};
}

inline CheckResult variation_cs3_decomposition(const RunConfig& cfg) {
  Stopwatch sw;
  bool ok = true;
  for (int n : {3, 4, 5}) {
    const Window w{n};
    const VariationDecomposition d =
        first_variation_cs3(darboux_gauge_field(w), variation_field(w), w);
    ok = ok && d.exact && d.restricted_shape && d.boundary_constant == Rational(-1);
  }
  Rng rng(0xfad5u);
  const Window w4{4};
  int exact_pairs = 0;
  for (int t = 0; t < cfg.trials; ++t) {
    const MatrixForm a = random_matrix_form(rng, w4, 1, 4, 1);
    const MatrixForm eta = random_matrix_form(rng, w4, 1, 4, 1, Family::variation);
    const VariationDecomposition d = first_variation_cs3(a, eta, w4);
    const bool constant_ok =
        d.linear == d.bulk ? d.boundary_constant == Rational(0)
                           : d.boundary_constant == Rational(-1);
    if (d.exact && constant_ok) ++exact_pairs;
  }
  ok = ok && exact_pairs == cfg.trials;
  return {"variation/cs3-decomposition",
          "the first variation of the cubic form splits exactly into twice the curvature "
          "pairing plus d of the canonical boundary term with constant -1",
          ok,
          detail::strf("lattice shape at windows 3..5 and %d of %d random pairs exact",
                       exact_pairs, cfg.trials),
          sw.ms()};
}

inline CheckResult variation_display_match(const RunConfig&) {
  Stopwatch sw;
  const Window w{4};
  const MatrixForm b = darboux_gauge_field(w);
  const MatrixForm eta = variation_field(w);
  const ScalarForm bulk = form_scale(Rational(2), trace_wedge(eta, curvature(b, w)));
  bool ok = true;
  int words = 0;
  for (Coord a = 1; a <= w.n; ++a)
    for (Coord c = 1; c <= w.n; ++c)
      for (Coord e = 1; e <= w.n; ++e) {
        if (a == c || a == e || c == e) continue;
        ++words;
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
          const ScalarExpr piece =
              ScalarExpr::atom(variation_atom(p, q)) *
              (ScalarExpr::atom(field_atom(q, p, {j})) -
               ScalarExpr::atom(field_atom(q, j)) * ScalarExpr::atom(field_atom(j, p)));
          expected += Rational(2 * sign) * piece;
        } while (std::next_permutation(perm.begin(), perm.end()));
        ok = ok && coefficient(bulk, {a, c, e}) == expected;
      }
  return {"variation/display-match",
          "the curvature pairing in the first variation matches its fully indexed display, "
          "term by term",
          ok, detail::strf("%d ordered label triples at window 4", words), sw.ms()};
}

inline CheckResult variation_dcs5_bulk(const RunConfig&) {
  Stopwatch sw;
  const Window w6{6};
  const CurvatureCubeLinearization big =
      linearized_curvature_cube(darboux_gauge_field(w6), variation_field(w6), w6);
  const Window w5{5};
  const CurvatureCubeLinearization vac =
      linearized_curvature_cube(darboux_gauge_field(w5), variation_field(w5), w5);
  const bool ok = big.match && !big.linear.empty() && vac.match && vac.linear.empty();
  return {"variation/dcs5-bulk",
          "the linearized traced curvature cube equals three times the squared-curvature "
          "pairing with the linearized curvature",
          ok,
          detail::strf("substantive at window 6 (%zu words), vacuous at window 5",
                       big.linear.size()),
          sw.ms()};
}

// --- numeric checks -----------------------------------------------------------

inline CheckResult numeric_exact_residual(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{4};
  const ExactSolution exact(cfg.c, w);
  double worst = 0.0;
  int count = 0;
  for (const auto& eq : restricted_el_equations(w)) {
    ++count;
    for (double f : {0.0, 0.5, 1.0}) {
      Point p = make_point(w);
      for (Coord m = 1; m <= w.n; ++m)
        p[static_cast<std::size_t>(m)] = cfg.corner + f * cfg.edge + 0.01 * m;
      worst = std::max(worst, std::abs(evaluate_expr(eq.residual, exact, p)));
    }
  }
  return {"numeric/exact-residual",
          "the closed-form solution annihilates every restricted field equation pointwise",
          worst <= 1e-12,
          detail::strf("max |residual| = %.3e over %d equations at window 4", worst, count),
          sw.ms()};
}

inline CheckResult numeric_goursat_order(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{4};
  auto exact = std::make_shared<ExactSolution>(cfg.c, w);
  const GoursatInit init = GoursatInit::from_single_source(w, cfg.corner, cfg.edge, exact);
  std::vector<int> steps;
  for (double h : cfg.h_schedule) steps.push_back(static_cast<int>(std::lround(cfg.edge / h)));
  const std::vector<ConvergencePoint> pts = convergence_study(init, *exact, steps, cfg.threads);
  const double slope = fitted_order(pts);
  std::string errs;
  for (const auto& p : pts) errs += detail::strf(" %.2e", p.error);
  return {"numeric/goursat-order",
          "the characteristic grid solver converges to the closed-form solution at fourth order",
          slope > 3.7 && slope < 4.3,
          detail::strf("fitted order %.3f, far-corner errors%s", slope, errs.c_str()), sw.ms()};
}

inline CheckResult numeric_path_independence(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{4};
  auto wave = std::make_shared<WaveField>(w, 0xd1f3u);
  const GoursatInit init = GoursatInit::from_single_source(w, cfg.corner, cfg.edge, wave);
  std::vector<ConvergencePoint> pts;
  for (double h : cfg.h_schedule) {
    const int steps = static_cast<int>(std::lround(cfg.edge / h));
    pts.push_back({h, path_independence_gap(init, steps, cfg.threads)});
  }
  const double slope = fitted_order(pts);
  std::string gaps;
  for (const auto& p : pts) gaps += detail::strf(" %.2e", p.error);
  return {"numeric/path-independence",
          "the two transverse marching orders agree at the far corner to fourth order, on "
          "generic smooth data",
          slope > 3.5 && slope < 4.5,
          detail::strf("fitted order %.3f, policy gaps%s", slope, gaps.c_str()), sw.ms()};
}

inline CheckResult numeric_action_closure(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{4};
  const ScalarForm L = cs3(darboux_gauge_field(w), w);
  const ScalarForm dL = exterior_derivative(L, w);

  const WaveField wave(w, 2026u);
  const double stokes_lhs = boundary_integral(L, 4, w, 0.1, 0.6, wave, 10);
  const double stokes_rhs = cube_integral(dL, 4, w, 0.1, 0.6, wave, 10);
  const double stokes_gap = std::abs(stokes_lhs - stokes_rhs);

  const ExactSolution exact(cfg.c, w);
  const double hi = cfg.corner + cfg.edge;
  const double on_lo = std::abs(boundary_integral(L, 4, w, cfg.corner, hi, exact, 3));
  const double on_hi = std::abs(boundary_integral(L, 4, w, cfg.corner, hi, exact, 6));

  const double off_a = std::abs(boundary_integral(L, 4, w, 0.1, 0.6, wave, 8));
  const double off_b = std::abs(boundary_integral(L, 4, w, 0.1, 0.6, wave, 10));

  const bool ok = stokes_gap < 1e-10 && std::abs(stokes_lhs) > 1e-3 && on_hi <= 1e-8 &&
                  on_hi <= on_lo + 1e-15 && off_a > 1e-3 && std::abs(off_a - off_b) < 1e-9;
  return {"numeric/action-closure",
          "the boundary integral of the cubic form vanishes on solutions and stays at a "
          "stable nonzero value off them, while matching the bulk curvature integral",
          ok,
          detail::strf("stokes gap %.1e, on-shell %.1e -> %.1e, off-shell %.4e (stable to %.1e)",
                       stokes_gap, on_lo, on_hi, off_a, std::abs(off_a - off_b)),
          sw.ms()};
}

inline CheckResult numeric_generating_action(const RunConfig& cfg) {
  Stopwatch sw;
  const Window w{cfg.window};
  const ExactSolution exact(cfg.c, w);
  const double hi = cfg.corner + cfg.edge;
  const GeneratingAction ga =
      generating_action(w, cfg.corner, hi, exact, 0.1, cfg.n_max, cfg.effective_orders());
  bool ok = true;
  double recombined = 0.0;
  std::string terms;
  for (const auto& t : ga.terms) {
    ok = ok && std::abs(t.integral) <= 1e-8 && t.contribution == t.weight * t.integral;
    recombined += t.contribution;
    terms += detail::strf(" |I%d|=%.1e", t.level, std::abs(t.integral));
  }
  ok = ok && ga.total == recombined;
  const GeneratingAction zero =
      generating_action(w, cfg.corner, hi, exact, 0.0, cfg.n_max, cfg.effective_orders());
  ok = ok && zero.total == 0.0;
  return {"numeric/generating-action",
          "every term of the weighted boundary tower closes on the solution and the total "
          "recombines from the terms exactly",
          ok, detail::strf("%zu terms:%s; zero-weight total 0", ga.terms.size(), terms.c_str()),
          sw.ms()};
}

}  // namespace checks

inline Report run_verify(const RunConfig& cfg) {
  cfg.validate();
  Report r;
  r.command = "verify";
  r.config = cfg.describe();
  r.checks.push_back(checks::core_order_independence(cfg));
  r.checks.push_back(checks::core_dd_zero(cfg));
  r.checks.push_back(checks::core_graded_leibniz(cfg));
  r.checks.push_back(checks::core_trace_cyclicity(cfg));
  r.checks.push_back(checks::core_scalar_anticommutativity(cfg));
  r.checks.push_back(checks::cs_structure(cfg));
  for (int n = 1; n <= cfg.n_max; ++n) r.checks.push_back(checks::cs_dcs_identity(cfg, n));
  r.checks.push_back(checks::cs_component_match_3(cfg));
  r.checks.push_back(checks::cs_component_match_5(cfg));
  r.checks.push_back(checks::darboux_mdc(cfg));
  for (int n = 1; n <= cfg.n_max; ++n)
    r.checks.push_back(checks::darboux_zero_certificate(cfg, n));
  r.checks.push_back(checks::darboux_remark_untraced(cfg));
  r.checks.push_back(checks::el_restricted_equations(cfg));
  r.checks.push_back(checks::variation_cs3_decomposition(cfg));
  r.checks.push_back(checks::variation_display_match(cfg));
  r.checks.push_back(checks::variation_dcs5_bulk(cfg));
  return r;
}

inline Report run_numeric(const RunConfig& cfg) {
  cfg.validate();
  {
    const ExactSolution probe(cfg.c, Window{cfg.window});
    if (!probe.pole_free(cfg.corner, cfg.corner + cfg.edge))
      throw std::invalid_argument("config: the closed-form solution has a pole inside the cube");
  }
  Report r;
  r.command = "numeric";
  r.config = cfg.describe();
  r.checks.push_back(checks::numeric_exact_residual(cfg));
  r.checks.push_back(checks::numeric_goursat_order(cfg));
  r.checks.push_back(checks::numeric_path_independence(cfg));
  r.checks.push_back(checks::numeric_action_closure(cfg));
  r.checks.push_back(checks::numeric_generating_action(cfg));
  return r;
}

}  // namespace multiform
