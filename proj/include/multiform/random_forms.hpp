#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "multiform/forms.hpp"

namespace multiform {

// Seeded generator for randomized algebra checks.  mt19937_64 output is fixed
// by the standard; raw draws with modulo keep the streams portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }
  int uniform(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(int permille) { return uniform(0, 999) < permille; }

  Rational small_rational() {
    static const Rational pool[] = {Rational(1),     Rational(-1), Rational(2),
                                    Rational(-2),    Rational(3),  Rational(1, 2),
                                    Rational(-1, 2), Rational(2, 3)};
    return pool[static_cast<std::size_t>(uniform(0, 7))];
  }

 private:
  std::mt19937_64 eng_;
};

inline Atom random_atom(Rng& rng, const Window& w, int max_derivs, Family fam = Family::field) {
  const Coord row = rng.uniform(1, w.n);
  Coord col = rng.uniform(1, w.n - 1);
  if (col >= row) ++col;
  std::vector<Coord> ders;
  const int nd = max_derivs > 0 ? rng.uniform(0, max_derivs) : 0;
  for (int i = 0; i < nd; ++i) ders.push_back(rng.uniform(1, w.n));
  return make_atom(fam, row, col, std::move(ders));
}

inline ScalarExpr random_scalar_expr(Rng& rng, const Window& w, int nterms, int max_atoms,
                                     int max_derivs, Family fam = Family::field) {
  ScalarExpr e;
  for (int t = 0; t < nterms; ++t) {
    Monomial m;
    const int na = rng.uniform(1, max_atoms);
    for (int i = 0; i < na; ++i) m.push_back(random_atom(rng, w, max_derivs, fam));
    e += ScalarExpr::monomial(std::move(m), rng.small_rational());
  }
  return e;
}

inline std::vector<Coord> random_word_labels(Rng& rng, const Window& w, int degree) {
  std::vector<Coord> pool = w.labels();
  std::vector<Coord> out;
  for (int i = 0; i < degree; ++i) {
    const auto p = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(pool.size()) - 1));
    out.push_back(pool[p]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(p));
  }
  return out;
}

inline MatrixForm random_matrix_form(Rng& rng, const Window& w, int degree, int nterms,
                                     int max_derivs = 1, Family fam = Family::field) {
  MatrixForm f;
  for (int t = 0; t < nterms; ++t) {
    const Coord row = rng.uniform(1, w.n);
    Coord col = rng.uniform(1, w.n - 1);
    if (col >= row) ++col;
    add_matrix_term(f, row, col, random_word_labels(rng, w, degree),
                    random_scalar_expr(rng, w, rng.uniform(1, 2), 2, max_derivs, fam));
  }
  return f;
}

inline ScalarForm random_scalar_form(Rng& rng, const Window& w, int degree, int nterms,
                                     int max_derivs = 1) {
  ScalarForm f;
  for (int t = 0; t < nterms; ++t)
    add_scalar_term(f, random_word_labels(rng, w, degree),
                    random_scalar_expr(rng, w, rng.uniform(1, 2), 2, max_derivs));
  return f;
}

}  // namespace multiform
