#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "multiform/scalar_expr.hpp"

namespace multiform {

// Evaluation point, indexed directly by coordinate label; slot 0 is unused.
using Point = std::vector<double>;

inline Point make_point(const Window& w, double fill = 0.0) {
  return Point(static_cast<std::size_t>(w.n) + 1, fill);
}

// Pointwise field data: the value of any derivative atom of the field at a
// point.  Implementations must be consistent under mixed partials.
class FieldFunction {
 public:
  virtual ~FieldFunction() = default;
  virtual double eval(const Atom& a, const Point& xi) const = 0;
};

// --- concrete fields ----------------------------------------------------------

// B[i,j](xi) = -1 / (c + sum of all window coordinates), for every entry.
// Depends on the point only through S, so any m-th derivative equals
// (-1)^(m+1) * m! * S^-(m+1).
class ExactSolution : public FieldFunction {
 public:
  ExactSolution(double c, Window w) : c_(c), w_(w) {}

  double eval(const Atom& a, const Point& xi) const override {
    if (a.fam != Family::field) throw std::invalid_argument("ExactSolution: field atoms only");
    double s = c_;
    for (Coord m = 1; m <= w_.n; ++m) s += xi[static_cast<std::size_t>(m)];
    if (std::abs(s) < 1e-9) throw std::domain_error("ExactSolution: pole reached");
    double v = -1.0 / s;
    for (int m = 0; m < a.nder; ++m) v *= -static_cast<double>(m + 1) / s;
    return v;
  }

  // the denominator is linear, so pole freedom on a cube follows from the
  // two extreme corners
  bool pole_free(double lo, double hi) const {
    const double smin = c_ + w_.n * lo;
    const double smax = c_ + w_.n * hi;
    return smin * smax > 0 && std::abs(smin) > 1e-6 && std::abs(smax) > 1e-6;
  }

 private:
  double c_;
  Window w_;
};

// Every entry a fixed constant; all derivatives vanish.
class ConstantsField : public FieldFunction {
 public:
  explicit ConstantsField(std::map<std::pair<Coord, Coord>, double> v) : v_(std::move(v)) {}

  double eval(const Atom& a, const Point&) const override {
    if (a.nder > 0) return 0.0;
    auto it = v_.find({a.row, a.col});
    return it == v_.end() ? 0.0 : it->second;
  }

 private:
  std::map<std::pair<Coord, Coord>, double> v_;
};

// B[i,j](xi) = xi_i: the row coordinate itself.
class CoordinateField : public FieldFunction {
 public:
  double eval(const Atom& a, const Point& xi) const override {
    if (a.nder == 0) return xi[a.row];
    if (a.nder == 1 && a.der[0] == a.row) return 1.0;
    return 0.0;
  }
};

// Smooth analytic field with closed-form derivatives of every order:
// B[i,j] = base_ij + amp_ij * sin(sum_k freq_k xi_k + phase_ij).
class WaveField : public FieldFunction {
 public:
  WaveField(Window w, std::uint64_t seed) : w_(w) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    freq_.assign(static_cast<std::size_t>(w.n) + 1, 0.0);
    for (Coord k = 1; k <= w.n; ++k) freq_[static_cast<std::size_t>(k)] = 0.2 + u(eng);
    for (Coord i = 1; i <= w.n; ++i)
      for (Coord j = 1; j <= w.n; ++j)
        if (i != j) {
          params_[{i, j}] = {0.6 * u(eng) - 0.3, 0.1 + 0.4 * u(eng), 6.2831853071795864769 * u(eng)};
        }
  }

  double eval(const Atom& a, const Point& xi) const override {
    const auto& p = params_.at({a.row, a.col});
    double u = p.phase;
    for (Coord k = 1; k <= w_.n; ++k) u += freq_[static_cast<std::size_t>(k)] * xi[static_cast<std::size_t>(k)];
    double prod = p.amp;
    for (int m = 0; m < a.nder; ++m) prod *= freq_[a.der[static_cast<std::size_t>(m)]];
    const double s = std::sin(u + a.nder * 1.5707963267948966192);
    return (a.nder == 0 ? p.base : 0.0) + prod * s;
  }

 private:
  struct Params {
    double base, amp, phase;
  };
  Window w_;
  std::vector<double> freq_;
  std::map<std::pair<Coord, Coord>, Params> params_;
};

// Derivative atoms of a wrapped value-only field by nested central
// differences; an independent route for cross-checking analytic derivatives.
class FiniteDifferenceField : public FieldFunction {
 public:
  FiniteDifferenceField(std::shared_ptr<const FieldFunction> inner, double step = 1e-4)
      : inner_(std::move(inner)), step_(step) {}

  double eval(const Atom& a, const Point& xi) const override {
    if (a.nder == 0) return inner_->eval(a, xi);
    const Coord d = a.der[static_cast<std::size_t>(a.nder - 1)];
    std::vector<Coord> rest = deriv_labels(a);
    rest.pop_back();
    const Atom lower = make_atom(a.fam, a.row, a.col, std::move(rest));
    Point plus = xi, minus = xi;
    plus[static_cast<std::size_t>(d)] += step_;
    minus[static_cast<std::size_t>(d)] -= step_;
    return (eval(lower, plus) - eval(lower, minus)) / (2.0 * step_);
  }

 private:
  std::shared_ptr<const FieldFunction> inner_;
  double step_;
};

// --- expression evaluation ------------------------------------------------------

// Expression flattened over its distinct-atom table, for repeated pointwise
// evaluation without re-walking the symbolic structure.
struct CompiledExpr {
  std::vector<Atom> atoms;  // evaluation inputs, in table order
  struct Term {
    double coef;
    std::vector<int> idx;  // indices into the atom table, one per factor
  };
  std::vector<Term> terms;

  static CompiledExpr compile(const ScalarExpr& e) {
    CompiledExpr c;
    std::map<Atom, int> table;
    for (const auto& t : e.terms()) {
      Term ct;
      ct.coef = t.coef.to_double();
      for (const Atom& a : t.mono) {
        auto [it, inserted] = table.emplace(a, static_cast<int>(c.atoms.size()));
        if (inserted) c.atoms.push_back(a);
        ct.idx.push_back(it->second);
      }
      c.terms.push_back(std::move(ct));
    }
    return c;
  }

  double eval(const double* atom_values) const {
    double sum = 0.0;
    for (const auto& t : terms) {
      double prod = t.coef;
      for (int i : t.idx) prod *= atom_values[static_cast<std::size_t>(i)];
      sum += prod;
    }
    return sum;
  }

  double eval(const FieldFunction& f, const Point& xi) const {
    std::vector<double> vals(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) vals[i] = f.eval(atoms[i], xi);
    return eval(vals.data());
  }
};

inline double evaluate_expr(const ScalarExpr& e, const FieldFunction& f, const Point& xi) {
  return CompiledExpr::compile(e).eval(f, xi);
}

}  // namespace multiform
