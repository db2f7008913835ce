#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "multiform/chern_simons.hpp"
#include "multiform/numeric/evaluate.hpp"

namespace multiform {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Nodes are Legendre roots found by Newton from the classical cosine guess;
// exact for polynomials of degree 2*order - 1.
inline QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  QuadratureRule r;
  r.nodes.assign(static_cast<std::size_t>(order), 0.0);
  r.weights.assign(static_cast<std::size_t>(order), 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;  // ascending order
    r.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  return r;
}

namespace detail {

inline double eval_compiled(const CompiledExpr& c, const FieldFunction& field, const Point& p,
                            std::vector<double>& scratch) {
  scratch.resize(c.atoms.size());
  for (std::size_t i = 0; i < c.atoms.size(); ++i) scratch[i] = field.eval(c.atoms[i], p);
  return c.eval(scratch.data());
}

// Tensor-product quadrature of a compiled coefficient over the listed free
// coordinates, all remaining cube coordinates already pinned in base.
inline double tensor_integral(const CompiledExpr& c, const FieldFunction& field, Point base,
                              const std::vector<Coord>& free, double lo, double hi,
                              const QuadratureRule& rule) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  const std::size_t dims = free.size();
  if (dims == 0) {
    std::vector<double> scratch;
    return eval_compiled(c, field, base, scratch);
  }
  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> scratch;
  double sum = 0.0;
  for (;;) {
    double wt = 1.0;
    for (std::size_t d = 0; d < dims; ++d) {
      base[static_cast<std::size_t>(free[d])] = mid + half * rule.nodes[idx[d]];
      wt *= half * rule.weights[idx[d]];
    }
    sum += wt * eval_compiled(c, field, base, scratch);
    std::size_t d = 0;
    while (d < dims && ++idx[d] == rule.nodes.size()) idx[d++] = 0;
    if (d == dims) break;
  }
  return sum;
}

}  // namespace detail

// Integral of a top-degree form over the cube [lo,hi]^cube_dim spanned by
// coordinates 1..cube_dim; the window's remaining coordinates stay pinned
// at lo.
inline double cube_integral(const ScalarForm& form, int cube_dim, Window w, double lo, double hi,
                            const FieldFunction& field, int order) {
  if (cube_dim < 1 || cube_dim > w.n) throw std::invalid_argument("cube_integral: bad cube dimension");
  const QuadratureRule rule = gauss_legendre(order);
  double sum = 0.0;
  for (const auto& [word, coef] : form) {
    if (word.degree() != cube_dim)
      throw std::invalid_argument("cube_integral: form degree does not match the cube");
    bool inside = true;
    for (Coord l : word.labels())
      if (l > cube_dim) inside = false;
    if (!inside) continue;  // a pinned differential kills the term
    const CompiledExpr c = CompiledExpr::compile(coef);
    std::vector<Coord> free;
    for (Coord m = 1; m <= cube_dim; ++m) free.push_back(m);
    sum += detail::tensor_integral(c, field, make_point(w, lo), free, lo, hi, rule);
  }
  return sum;
}

// Oriented boundary integral of a (cube_dim-1)-form over the boundary of
// [lo,hi]^cube_dim.  Face m carries the canonical word omitting m with sign
// (-1)^(m-1) on the upper face and the opposite sign on the lower one, the
// convention under which Stokes holds against cube_integral of the exterior
// derivative.
inline double boundary_integral(const ScalarForm& form, int cube_dim, Window w, double lo,
                                double hi, const FieldFunction& field, int order) {
  if (cube_dim < 1 || cube_dim > w.n)
    throw std::invalid_argument("boundary_integral: bad cube dimension");
  const QuadratureRule rule = gauss_legendre(order);
  double sum = 0.0;
  for (const auto& [word, coef] : form) {
    if (word.degree() != cube_dim - 1)
      throw std::invalid_argument("boundary_integral: form degree does not match the faces");
    bool inside = true;
    for (Coord l : word.labels())
      if (l > cube_dim) inside = false;
    if (!inside) continue;
    Coord m = 0;  // the one cube coordinate absent from the word
    for (Coord cand = 1; cand <= cube_dim; ++cand)
      if (!word.contains(cand)) m = cand;
    const CompiledExpr c = CompiledExpr::compile(coef);
    std::vector<Coord> free;
    for (Coord k = 1; k <= cube_dim; ++k)
      if (k != m) free.push_back(k);
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    for (int side = 0; side < 2; ++side) {
      Point base = make_point(w, lo);
      base[static_cast<std::size_t>(m)] = side == 0 ? hi : lo;
      const double face = detail::tensor_integral(c, field, base, free, lo, hi, rule);
      sum += (side == 0 ? sign : -sign) * face;
    }
  }
  return sum;
}

struct ActionTerm {
  int level = 0;        // interpolation index n of the (2n+1)-form
  double integral = 0;  // boundary integral over the (2n+2)-cube
  double weight = 0;    // hbar^n / (n+1)
  double contribution = 0;
};

struct GeneratingAction {
  std::vector<ActionTerm> terms;
  double total = 0;
};

// Boundary pairing of the whole tower: term n integrates the (2n+1)-form of
// the lattice gauge field over the boundary of the cube spanned by the first
// 2n+2 coordinates, weighted by hbar^n/(n+1).  On solutions every term
// closes, so the total collapses toward zero as the quadrature tightens.
inline GeneratingAction generating_action(Window w, double lo, double hi,
                                          const FieldFunction& field, double hbar, int n_max,
                                          const std::vector<int>& quad_orders) {
  if (n_max < 1) throw std::invalid_argument("generating_action: need at least the cubic term");
  if (w.n < 2 * n_max + 2)
    throw std::invalid_argument("generating_action: window too small for the requested tower");
  if (quad_orders.size() != static_cast<std::size_t>(n_max))
    throw std::invalid_argument("generating_action: one quadrature order per term");
  GeneratingAction out;
  for (int n = 1; n <= n_max; ++n) {
    const Window sub{static_cast<Coord>(2 * n + 2)};
    const ScalarForm form = cs_odd(darboux_gauge_field(sub), n, sub);
    ActionTerm t;
    t.level = n;
    t.integral = boundary_integral(form, 2 * n + 2, w, lo, hi, field,
                                   quad_orders[static_cast<std::size_t>(n - 1)]);
    t.weight = std::pow(hbar, n) / (n + 1);
    t.contribution = t.weight * t.integral;
    out.terms.push_back(t);
    out.total += t.contribution;
  }
  return out;
}

}  // namespace multiform
