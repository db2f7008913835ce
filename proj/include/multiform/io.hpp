#pragma once

#include <cctype>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include "multiform/scalar_expr.hpp"

namespace multiform {

inline std::string atom_str(const Atom& a) {
  std::string s;
  if (a.fam == Family::residual) {
    s = "G[" + std::to_string(a.der[0]) + ";" + std::to_string(a.row) + "," +
        std::to_string(a.col) + "]";
    return s;
  }
  if (a.nder > 0) {
    s += "d(";
    for (int i = 0; i < a.nder; ++i) {
      if (i) s += ",";
      s += std::to_string(a.der[static_cast<std::size_t>(i)]);
    }
    s += ")";
  }
  s += (a.fam == Family::field) ? "B" : "eta";
  s += "[" + std::to_string(a.row) + "," + std::to_string(a.col) + "]";
  return s;
}

// Canonical textual form; parse(str(e)) == e.
inline std::string to_string(const ScalarExpr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : e.terms()) {
    const bool neg = t.coef.is_negative();
    const Rational mag = neg ? -t.coef : t.coef;
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    std::string monos;
    std::size_t i = 0;
    while (i < t.mono.size()) {
      std::size_t run = i + 1;
      while (run < t.mono.size() && t.mono[run] == t.mono[i]) ++run;
      if (!monos.empty()) monos += "*";
      monos += atom_str(t.mono[i]);
      if (run - i > 1) monos += "^" + std::to_string(run - i);
      i = run;
    }
    if (monos.empty()) {
      out += mag.str();
    } else {
      if (!(mag == Rational(1))) out += mag.str() + "*";
      out += monos;
    }
  }
  return out;
}

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  ScalarExpr parse() {
    skip();
    ScalarExpr acc;
    int sign = 1;
    if (peek() == '-') {
      sign = -1;
      get();
    } else if (peek() == '+') {
      get();
    }
    acc = Rational(sign) * term();
    skip();
    while (pos_ < s_.size()) {
      char c = get();
      if (c == '+')
        acc += term();
      else if (c == '-')
        acc -= term();
      else
        fail("expected '+' or '-'");
      skip();
    }
    return acc;
  }

 private:
  ScalarExpr term() {
    ScalarExpr acc = factor();
    skip();
    while (peek() == '*') {
      get();
      acc *= factor();
      skip();
    }
    return acc;
  }

  ScalarExpr factor() {
    skip();
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t num = integer();
      std::int64_t den = 1;
      if (peek() == '/') {
        get();
        den = integer();
      }
      return ScalarExpr::constant(Rational(num, den));
    }
    Atom a = atom();
    std::int64_t pow = 1;
    if (peek() == '^') {
      get();
      pow = integer();
      if (pow < 1) fail("power must be positive");
    }
    Monomial m(static_cast<std::size_t>(pow), a);
    return ScalarExpr::monomial(std::move(m));
  }

  Atom atom() {
    skip();
    std::vector<Coord> ders;
    if (peek() == 'd' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '(') {
      get();
      get();
      ders.push_back(static_cast<Coord>(integer()));
      while (peek() == ',') {
        get();
        ders.push_back(static_cast<Coord>(integer()));
      }
      expect(')');
    }
    Family fam;
    if (peek() == 'B') {
      get();
      fam = Family::field;
    } else if (peek() == 'e') {
      expect('e');
      expect('t');
      expect('a');
      fam = Family::variation;
    } else if (peek() == 'G') {
      get();
      fam = Family::residual;
    } else {
      fail("expected atom");
      fam = Family::field;
    }
    expect('[');
    if (fam == Family::residual) {
      if (!ders.empty()) fail("G symbols carry no derivatives");
      Coord dir = static_cast<Coord>(integer());
      expect(';');
      Coord row = static_cast<Coord>(integer());
      expect(',');
      Coord col = static_cast<Coord>(integer());
      expect(']');
      return residual_atom(dir, row, col);
    }
    Coord row = static_cast<Coord>(integer());
    expect(',');
    Coord col = static_cast<Coord>(integer());
    expect(']');
    return make_atom(fam, row, col, std::move(ders));
  }

  std::int64_t integer() {
    skip();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer");
    std::int64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char get() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    return s_[pos_++];
  }
  void expect(char c) {
    if (get() != c) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("parse error at " + std::to_string(pos_) + ": " + why);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ScalarExpr parse_expr(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t == "0" || t.empty()) return {};
  detail::ExprParser p(s);
  return p.parse();
}

}  // namespace multiform
