#pragma once

#include <map>

#include "multiform/forms.hpp"

namespace multiform {

// Polynomial in one formal parameter with form-valued coefficients; used both
// for the interpolation parameter of odd transgression integrands and for the
// linearization parameter of first variations.
template <class F>
using FormPoly = std::map<int, F>;

using MatrixPoly = FormPoly<MatrixForm>;
using ScalarPoly = FormPoly<ScalarForm>;

template <class F>
FormPoly<F> poly_add(const FormPoly<F>& a, const FormPoly<F>& b) {
  FormPoly<F> r = a;
  for (const auto& [k, f] : b) {
    auto it = r.find(k);
    if (it == r.end()) {
      r.emplace(k, f);
    } else {
      it->second = form_add(it->second, f);
      if (it->second.empty()) r.erase(it);
    }
  }
  return r;
}

template <class F>
FormPoly<F> poly_scale(const Rational& c, const FormPoly<F>& a) {
  FormPoly<F> r;
  if (c.is_zero()) return r;
  for (const auto& [k, f] : a) r.emplace(k, form_scale(c, f));
  return r;
}

inline MatrixPoly poly_wedge(const MatrixPoly& a, const MatrixPoly& b) {
  MatrixPoly r;
  for (const auto& [ka, fa] : a) {
    for (const auto& [kb, fb] : b) {
      MatrixForm prod = wedge(fa, fb);
      if (prod.empty()) continue;
      auto it = r.find(ka + kb);
      if (it == r.end())
        r.emplace(ka + kb, std::move(prod));
      else
        it->second = form_add(it->second, prod);
    }
  }
  for (auto it = r.begin(); it != r.end();)
    it = it->second.empty() ? r.erase(it) : std::next(it);
  return r;
}

inline ScalarPoly poly_trace(const MatrixPoly& a) {
  ScalarPoly r;
  for (const auto& [k, f] : a) {
    ScalarForm t = trace(f);
    if (!t.empty()) r.emplace(k, std::move(t));
  }
  return r;
}

// Tr(a ^ b) per parameter degree, skipping the product matrix.
inline ScalarPoly poly_trace_wedge(const MatrixPoly& a, const MatrixPoly& b) {
  ScalarPoly r;
  for (const auto& [ka, fa] : a) {
    for (const auto& [kb, fb] : b) {
      ScalarForm t = trace_wedge(fa, fb);
      if (t.empty()) continue;
      auto it = r.find(ka + kb);
      if (it == r.end())
        r.emplace(ka + kb, std::move(t));
      else
        it->second = form_add(it->second, t);
    }
  }
  for (auto it = r.begin(); it != r.end();)
    it = it->second.empty() ? r.erase(it) : std::next(it);
  return r;
}

template <class F>
FormPoly<F> poly_d(const FormPoly<F>& a, const Window& w) {
  FormPoly<F> r;
  for (const auto& [k, f] : a) {
    F df = exterior_derivative(f, w);
    if (!df.empty()) r.emplace(k, std::move(df));
  }
  return r;
}

template <class F>
F poly_coeff(const FormPoly<F>& a, int k) {
  auto it = a.find(k);
  return it == a.end() ? F{} : it->second;
}

// Definite integral of the parameter over [0,1]: power m picks up 1/(m+1).
template <class F>
F integrate_unit(const FormPoly<F>& a) {
  F r;
  for (const auto& [m, f] : a) r = form_add(r, form_scale(Rational(1, m + 1), f));
  return r;
}

}  // namespace multiform
