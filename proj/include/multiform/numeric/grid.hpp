#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "multiform/numeric/evaluate.hpp"
#include "multiform/on_shell.hpp"
#include "multiform/parallel.hpp"

namespace multiform {

// Characteristic initial data: each ordered pair's field is free on its own
// coordinate 2-plane (all transverse coordinates at the cube corner) and is
// transported off it by the lattice equations.  Every plane source must be
// able to answer for every field, giving the redundancy used by the
// consistency check.
struct GoursatInit {
  Window window;
  double corner = 0.0;
  double edge = 1.0;
  std::map<std::pair<Coord, Coord>, std::shared_ptr<const FieldFunction>> plane_data;

  static GoursatInit from_single_source(Window w, double corner, double edge,
                                        std::shared_ptr<const FieldFunction> f) {
    GoursatInit g;
    g.window = w;
    g.corner = corner;
    g.edge = edge;
    for (Coord i = 1; i <= w.n; ++i)
      for (Coord j = 1; j <= w.n; ++j)
        if (i != j) g.plane_data[{i, j}] = f;
    return g;
  }
};

// Plane sources overlap along shared axes; disagreement there means the data
// never came from one configuration, and the solve refuses to start rather
// than average it away.
inline void check_plane_consistency(const GoursatInit& init, double tol = 1e-9) {
  const Window& w = init.window;
  std::vector<std::pair<Coord, Coord>> planes;
  for (Coord i = 1; i <= w.n; ++i)
    for (Coord j = 1; j <= w.n; ++j) {
      if (i == j) continue;
      auto it = init.plane_data.find({i, j});
      if (it == init.plane_data.end() || !it->second)
        throw std::invalid_argument("goursat: missing plane source");
      planes.push_back({i, j});
    }
  std::vector<Point> probes;
  probes.push_back(make_point(w, init.corner));  // the shared corner
  for (std::size_t a = 0; a < planes.size(); ++a) {
    for (std::size_t b = a + 1; b < planes.size(); ++b) {
      const FieldFunction& fa = *init.plane_data.at(planes[a]);
      const FieldFunction& fb = *init.plane_data.at(planes[b]);
      std::vector<Point> pts = probes;
      for (Coord s : {planes[a].first, planes[a].second}) {
        if (s != planes[b].first && s != planes[b].second) continue;
        for (int t = 1; t <= 4; ++t) {  // interior samples of the shared axis
          Point p = make_point(w, init.corner);
          p[static_cast<std::size_t>(s)] += init.edge * t / 4.0;
          pts.push_back(p);
        }
      }
      for (const Point& p : pts)
        for (const auto& [field, src] : init.plane_data) {
          (void)src;
          const Atom atom = field_atom(field.first, field.second);
          const double va = fa.eval(atom, p);
          const double vb = fb.eval(atom, p);
          if (std::abs(va - vb) > tol * (1.0 + std::abs(va)))
            throw std::invalid_argument("goursat: plane sources disagree on shared data");
        }
    }
  }
}

enum class MarchPolicy {
  lowest_transverse,   // integrate along the smallest available transverse label
  highest_transverse,  // along the largest; used to probe path independence
};

class GridSolution {
 public:
  // per-pair slots: value, the two own first derivatives, the three own
  // second derivatives
  static constexpr int kSlots = 6;

  Window window;
  int steps = 0;
  double h = 0.0, corner = 0.0, edge = 0.0;
  std::vector<std::pair<Coord, Coord>> pairs;
  std::map<std::pair<Coord, Coord>, int> pair_of;
  std::vector<double> state;
  int max_fixed_point_iterations = 0;

  std::size_t nodes_per_axis() const { return static_cast<std::size_t>(steps) + 1; }
  std::size_t node_count() const {
    std::size_t c = 1;
    for (int d = 0; d < window.n; ++d) c *= nodes_per_axis();
    return c;
  }
  std::size_t block_size() const { return pairs.size() * kSlots; }
  std::size_t flat(const std::vector<int>& node) const {
    std::size_t f = 0;
    for (int d = 0; d < window.n; ++d) f = f * nodes_per_axis() + static_cast<std::size_t>(node[static_cast<std::size_t>(d)]);
    return f;
  }
  Point point_of(const std::vector<int>& node) const {
    Point p = make_point(window, corner);
    for (Coord m = 1; m <= window.n; ++m)
      p[static_cast<std::size_t>(m)] += h * node[static_cast<std::size_t>(m - 1)];
    return p;
  }
  std::vector<int> far_corner() const { return std::vector<int>(static_cast<std::size_t>(window.n), steps); }

  double value(Coord i, Coord j, const std::vector<int>& node, int slot = 0) const {
    return state[flat(node) * block_size() +
                 static_cast<std::size_t>(pair_of.at({i, j})) * kSlots + static_cast<std::size_t>(slot)];
  }
};

namespace detail {

// Expression precompiled against within-block state offsets; every atom must
// be an own-derivative of some tracked pair.
struct OffsetExpr {
  struct Term {
    double coef;
    std::vector<int> off;
  };
  std::vector<Term> terms;

  double eval(const double* block) const {
    double sum = 0.0;
    for (const auto& t : terms) {
      double prod = t.coef;
      for (int o : t.off) prod *= block[static_cast<std::size_t>(o)];
      sum += prod;
    }
    return sum;
  }
};

inline int own_slot(const Atom& a) {
  if (a.fam != Family::field) return -1;
  if (a.nder == 0) return 0;
  if (a.nder == 1) {
    if (a.der[0] == a.row) return 1;
    if (a.der[0] == a.col) return 2;
    return -1;
  }
  if (a.nder == 2) {
    const bool r0 = a.der[0] == a.row, c0 = a.der[0] == a.col;
    const bool r1 = a.der[1] == a.row, c1 = a.der[1] == a.col;
    if (r0 && r1) return 3;
    if ((r0 && c1) || (c0 && r1)) return 4;
    if (c0 && c1) return 5;
  }
  return -1;
}

inline OffsetExpr compile_offsets(const ScalarExpr& e,
                                  const std::map<std::pair<Coord, Coord>, int>& pair_of) {
  OffsetExpr r;
  for (const auto& t : e.terms()) {
    OffsetExpr::Term ot;
    ot.coef = t.coef.to_double();
    for (const Atom& a : t.mono) {
      const int slot = own_slot(a);
      if (slot < 0) throw std::logic_error("goursat: reduced step expression is not own-closed");
      ot.off.push_back(pair_of.at({a.row, a.col}) * GridSolution::kSlots + slot);
    }
    r.terms.push_back(std::move(ot));
  }
  return r;
}

// One marching step program for a pair along one transverse direction: the
// transported value and own-derivative right-hand sides plus the extra
// transverse derivatives used by the corrected trapezoid update.
struct StepProgram {
  OffsetExpr g, gp, ri, rip, rj, rjp, sii, sij, sjj;
};

inline StepProgram make_step_program(Coord i, Coord j, Coord k,
                                     const std::map<std::pair<Coord, Coord>, int>& pair_of) {
  const ScalarExpr g = darboux_rhs(i, j, k);
  auto red = [](const ScalarExpr& e) { return reduce_on_shell(e); };
  StepProgram p;
  p.g = compile_offsets(red(g), pair_of);
  p.gp = compile_offsets(red(g.partial(k)), pair_of);
  const ScalarExpr ri = red(g.partial(i));
  const ScalarExpr rj = red(g.partial(j));
  p.ri = compile_offsets(ri, pair_of);
  p.rip = compile_offsets(red(ri.partial(k)), pair_of);
  p.rj = compile_offsets(rj, pair_of);
  p.rjp = compile_offsets(red(rj.partial(k)), pair_of);
  p.sii = compile_offsets(red(ri.partial(i)), pair_of);
  p.sij = compile_offsets(red(ri.partial(j)), pair_of);
  p.sjj = compile_offsets(red(rj.partial(j)), pair_of);
  return p;
}

struct StepValues {
  double g, gp, ri, rip, rj, rjp, sii, sij, sjj;
};

inline StepValues eval_program(const StepProgram& p, const double* block) {
  return StepValues{p.g.eval(block),   p.gp.eval(block),  p.ri.eval(block),
                    p.rip.eval(block), p.rj.eval(block),  p.rjp.eval(block),
                    p.sii.eval(block), p.sij.eval(block), p.sjj.eval(block)};
}

}  // namespace detail

inline constexpr double kBlowUpThreshold = 1e6;

// Solves the lattice system on a uniform grid over the cube.  Values and own
// first derivatives advance by the derivative-corrected trapezoid
// integral(f) over one step = h/2 (f0+f1) + h^2/12 (f0'-f1'), own second
// derivatives by the plain trapezoid; together that keeps the values fourth
// order in h.  The implicit endpoint couples the fields, resolved by a
// per-node fixed-point iteration.
inline GridSolution goursat_solve(const GoursatInit& init, int steps,
                                  MarchPolicy policy = MarchPolicy::lowest_transverse,
                                  int threads = 1) {
  if (init.window.n < 3)
    throw std::invalid_argument("goursat_solve: window must hold at least three labels");
  if (steps < 1) throw std::invalid_argument("goursat_solve: need at least one step");
  if (!(init.edge > 0)) throw std::invalid_argument("goursat_solve: edge must be positive");
  check_plane_consistency(init);

  GridSolution s;
  s.window = init.window;
  s.steps = steps;
  s.edge = init.edge;
  s.corner = init.corner;
  s.h = init.edge / steps;
  for (Coord i = 1; i <= s.window.n; ++i)
    for (Coord j = 1; j <= s.window.n; ++j)
      if (i != j) {
        s.pair_of[{i, j}] = static_cast<int>(s.pairs.size());
        s.pairs.emplace_back(i, j);
      }
  const std::size_t bs = s.block_size();
  s.state.assign(s.node_count() * bs, 0.0);

  // step programs per (pair, transverse direction)
  std::map<std::pair<int, Coord>, detail::StepProgram> programs;
  for (std::size_t p = 0; p < s.pairs.size(); ++p)
    for (Coord k = 1; k <= s.window.n; ++k)
      if (k != s.pairs[p].first && k != s.pairs[p].second)
        programs.emplace(std::make_pair(static_cast<int>(p), k),
                         detail::make_step_program(s.pairs[p].first, s.pairs[p].second, k, s.pair_of));

  // group nodes by total level; nodes of one level only read the previous one
  const int max_level = s.window.n * steps;
  std::vector<std::vector<std::size_t>> by_level(static_cast<std::size_t>(max_level) + 1);
  {
    std::vector<int> node(static_cast<std::size_t>(s.window.n), 0);
    for (;;) {
      int level = 0;
      for (int v : node) level += v;
      by_level[static_cast<std::size_t>(level)].push_back(s.flat(node));
      int d = s.window.n - 1;
      while (d >= 0 && node[static_cast<std::size_t>(d)] == steps) node[static_cast<std::size_t>(d--)] = 0;
      if (d < 0) break;
      ++node[static_cast<std::size_t>(d)];
    }
  }

  const double h2 = s.h / 2.0, h12 = s.h * s.h / 12.0;
  std::vector<int> iter_peak(by_level.size(), 0);

  for (std::size_t level = 0; level < by_level.size(); ++level) {
    const auto& nodes = by_level[level];
    std::vector<int> level_peaks(nodes.size(), 0);
    parallel_for(nodes.size(), threads, [&](std::size_t ni) {
      const std::size_t flat = nodes[ni];
      // decode the multi-index
      std::vector<int> node(static_cast<std::size_t>(s.window.n));
      {
        std::size_t rem = flat;
        for (int d = s.window.n - 1; d >= 0; --d) {
          node[static_cast<std::size_t>(d)] = static_cast<int>(rem % s.nodes_per_axis());
          rem /= s.nodes_per_axis();
        }
      }
      double* block = &s.state[flat * bs];
      const Point xi = s.point_of(node);

      struct March {
        int pair;
        const detail::StepProgram* prog;
        const double* pred;
        detail::StepValues at_pred;
      };
      std::vector<March> marching;
      for (std::size_t p = 0; p < s.pairs.size(); ++p) {
        const auto [i, j] = s.pairs[p];
        Coord dir = 0;
        for (Coord k = 1; k <= s.window.n; ++k) {
          if (k == i || k == j || node[static_cast<std::size_t>(k - 1)] == 0) continue;
          if (dir == 0 || (policy == MarchPolicy::highest_transverse ? k > dir : k < dir)) dir = k;
        }
        double* slots = block + p * GridSolution::kSlots;
        if (dir == 0) {
          // on the pair's own plane: take value and own derivatives from data
          const FieldFunction& f = *init.plane_data.at({i, j});
          slots[0] = f.eval(field_atom(i, j), xi);
          slots[1] = f.eval(field_atom(i, j, {i}), xi);
          slots[2] = f.eval(field_atom(i, j, {j}), xi);
          slots[3] = f.eval(field_atom(i, j, {i, i}), xi);
          slots[4] = f.eval(field_atom(i, j, {i, j}), xi);
          slots[5] = f.eval(field_atom(i, j, {j, j}), xi);
          continue;
        }
        std::vector<int> prev = node;
        --prev[static_cast<std::size_t>(dir - 1)];
        const double* pred = &s.state[s.flat(prev) * bs];
        const detail::StepProgram& prog = programs.at({static_cast<int>(p), dir});
        marching.push_back(March{static_cast<int>(p), &prog, pred, detail::eval_program(prog, pred)});
        // predecessor state seeds the iteration
        for (int sl = 0; sl < GridSolution::kSlots; ++sl)
          slots[sl] = pred[p * GridSolution::kSlots + static_cast<std::size_t>(sl)];
      }

      int iter = 0;
      for (; iter < 50 && !marching.empty(); ++iter) {
        double delta = 0.0;
        for (const March& m : marching) {
          const double* pp = m.pred + static_cast<std::size_t>(m.pair) * GridSolution::kSlots;
          double* cc = block + static_cast<std::size_t>(m.pair) * GridSolution::kSlots;
          const detail::StepValues cur = detail::eval_program(*m.prog, block);
          const detail::StepValues& p0 = m.at_pred;
          const double nb = pp[0] + h2 * (p0.g + cur.g) + h12 * (p0.gp - cur.gp);
          const double nvi = pp[1] + h2 * (p0.ri + cur.ri) + h12 * (p0.rip - cur.rip);
          const double nvj = pp[2] + h2 * (p0.rj + cur.rj) + h12 * (p0.rjp - cur.rjp);
          const double nwii = pp[3] + h2 * (p0.sii + cur.sii);
          const double nwij = pp[4] + h2 * (p0.sij + cur.sij);
          const double nwjj = pp[5] + h2 * (p0.sjj + cur.sjj);
          if (std::abs(nb) > kBlowUpThreshold)
            throw std::runtime_error("goursat_solve: field magnitude crossed the blow-up threshold");
          const double nv[GridSolution::kSlots] = {nb, nvi, nvj, nwii, nwij, nwjj};
          for (int sl = 0; sl < GridSolution::kSlots; ++sl) {
            delta = std::max(delta, std::abs(nv[sl] - cc[sl]) / (1.0 + std::abs(nv[sl])));
            cc[sl] = nv[sl];
          }
        }
        if (delta < 1e-14) break;
      }
      if (iter >= 50)
        throw std::runtime_error("goursat_solve: node fixed point failed to converge");
      level_peaks[ni] = iter;
    });
    for (int v : level_peaks) iter_peak[level] = std::max(iter_peak[level], v);
  }
  for (int v : iter_peak) s.max_fixed_point_iterations = std::max(s.max_fixed_point_iterations, v);
  return s;
}

// Largest disagreement between the solution value and a central difference of
// it along own directions; a cheap smoke signal that the tracked derivatives
// really are derivatives.
inline double own_derivative_gap(const GridSolution& s) {
  double gap = 0.0;
  std::vector<int> node(static_cast<std::size_t>(s.window.n), 0);
  for (;;) {
    for (std::size_t p = 0; p < s.pairs.size(); ++p) {
      const auto [i, j] = s.pairs[p];
      for (int which = 0; which < 2; ++which) {
        const Coord d = which == 0 ? i : j;
        const int nd = node[static_cast<std::size_t>(d - 1)];
        if (nd < 1 || nd >= s.steps) continue;
        std::vector<int> up = node, dn = node;
        ++up[static_cast<std::size_t>(d - 1)];
        --dn[static_cast<std::size_t>(d - 1)];
        const double fd = (s.value(i, j, up) - s.value(i, j, dn)) / (2.0 * s.h);
        gap = std::max(gap, std::abs(fd - s.value(i, j, node, 1 + which)));
      }
    }
    int d = s.window.n - 1;
    while (d >= 0 && node[static_cast<std::size_t>(d)] == s.steps) node[static_cast<std::size_t>(d--)] = 0;
    if (d < 0) break;
    ++node[static_cast<std::size_t>(d)];
  }
  return gap;
}

// Far-corner disagreement between the two marching policies; fourth order in
// h for smooth consistent data.
inline double path_independence_gap(const GoursatInit& init, int steps, int threads = 1) {
  const GridSolution lo = goursat_solve(init, steps, MarchPolicy::lowest_transverse, threads);
  const GridSolution hi = goursat_solve(init, steps, MarchPolicy::highest_transverse, threads);
  const std::vector<int> corner = lo.far_corner();
  double gap = 0.0;
  for (const auto& [i, j] : lo.pairs)
    gap = std::max(gap, std::abs(lo.value(i, j, corner) - hi.value(i, j, corner)));
  return gap;
}

struct ConvergencePoint {
  double h = 0.0;
  double error = 0.0;
};

// Far-corner error against a reference field for a schedule of step counts.
inline std::vector<ConvergencePoint> convergence_study(const GoursatInit& init,
                                                       const FieldFunction& reference,
                                                       const std::vector<int>& steps_list,
                                                       int threads = 1) {
  std::vector<ConvergencePoint> out;
  for (int steps : steps_list) {
    const GridSolution s = goursat_solve(init, steps, MarchPolicy::lowest_transverse, threads);
    const std::vector<int> corner = s.far_corner();
    const Point xi = s.point_of(corner);
    double err = 0.0;
    for (const auto& [i, j] : s.pairs)
      err = std::max(err, std::abs(s.value(i, j, corner) - reference.eval(field_atom(i, j), xi)));
    out.push_back(ConvergencePoint{s.h, err});
  }
  return out;
}

// Least-squares slope of log(error) against log(h).
inline double fitted_order(const std::vector<ConvergencePoint>& pts) {
  if (pts.size() < 2) throw std::invalid_argument("fitted_order: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    const double x = std::log(p.h), y = std::log(p.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace multiform
