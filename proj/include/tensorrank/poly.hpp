#pragma once

// Sparse multivariate polynomials with exact coefficients, stored in
// graded-lexicographic order (leading monomial first).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tensorrank/error.hpp"
#include "tensorrank/exact_arith.hpp"

namespace tensorrank {

/// Exponent vector over a fixed variable set.
using Monomial = std::vector<std::uint32_t>;

inline std::size_t degree(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), std::size_t{0});
}

/// Graded lex, largest first: higher total degree wins, ties broken by the
/// first differing exponent (x0 > x1 > ...).
struct GrLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const std::size_t da = degree(a), db = degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

inline Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

class Poly {
 public:
  using TermMap = std::map<Monomial, Scalar, GrLexGreater>;

  Poly(std::size_t nvars, FieldSpec field) : nvars_(nvars), field_(field) {}

  static Poly constant(std::size_t nvars, const FieldSpec& field, const Scalar& c) {
    Poly p(nvars, field);
    p.add_term(Monomial(nvars, 0), c);
    return p;
  }
  static Poly variable(std::size_t nvars, const FieldSpec& field, std::size_t index) {
    Poly p(nvars, field);
    Monomial m(nvars, 0);
    m.at(index) = 1;
    p.add_term(m, field.one());
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const FieldSpec& field() const { return field_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Total degree; 0 for the zero polynomial.
  std::size_t degree() const { return terms_.empty() ? 0 : tensorrank::degree(terms_.begin()->first); }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? field_.zero() : it->second;
  }

  /// Adds c * m, dropping the term if it cancels.
  void add_term(const Monomial& m, const Scalar& c) {
    if (m.size() != nvars_) fail(ErrorCode::VariableMismatch, "monomial has the wrong number of variables");
    require_field(field_, c);
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Scalar evaluate(std::span<const Scalar> point) const {
    if (point.size() != nvars_) fail(ErrorCode::DimensionMismatch, "assignment length does not match variable count");
    Scalar total = field_.zero();
    for (const auto& [m, c] : terms_) {
      Scalar term = c;
      for (std::size_t k = 0; k < nvars_; ++k)
        for (std::uint32_t e = 0; e < m[k]; ++e) term *= point[k];
      total += term;
    }
    return total;
  }

  Poly scaled(const Scalar& s) const {
    Poly out(nvars_, field_);
    for (const auto& [m, c] : terms_) out.add_term(m, c * s);
    return out;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    check_compatible(a, b);
    Poly out = a;
    for (const auto& [m, c] : b.terms_) out.add_term(m, c);
    return out;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    check_compatible(a, b);
    Poly out = a;
    for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
    return out;
  }
  friend Poly operator-(const Poly& a) { return a.scaled(-a.field_.one()); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    check_compatible(a, b);
    Poly out(a.nvars_, a.field_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_product(ma, mb), ca * cb);
    return out;
  }
  Poly& operator+=(const Poly& b) {
    check_compatible(*this, b);
    for (const auto& [m, c] : b.terms_) add_term(m, c);
    return *this;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_ || a.field_ != b.field_ || a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib)
      if (ia->first != ib->first || ia->second != ib->second) return false;
    return true;
  }

 private:
  static void check_compatible(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_) fail(ErrorCode::VariableMismatch, "polynomials have different variable sets");
    if (a.field_ != b.field_) fail(ErrorCode::FieldMismatch, "polynomials are over different fields");
  }

  std::size_t nvars_;
  FieldSpec field_;
  TermMap terms_;
};

/// Text form: terms joined by " + ", each `coeff*v0^2*v3`; Q(i) coefficients
/// with both parts are parenthesized; the zero polynomial is `0`.
inline std::string format_poly(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (!first) out += " + ";
    first = false;
    std::string coeff = format_scalar(c);
    if (c.kind() == FieldKind::QI && coeff.find('i') != std::string::npos) coeff = "(" + coeff + ")";
    out += coeff;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] == 0) continue;
      out += "*v" + std::to_string(k);
      if (m[k] > 1) out += "^" + std::to_string(m[k]);
    }
  }
  return out;
}

inline Poly parse_poly(std::string_view text, std::size_t nvars, const FieldSpec& field) {
  Poly p(nvars, field);
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "0") return p;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t sep = text.find(" + ", start);
    if (sep == std::string_view::npos) sep = text.size();
    std::string_view term = trim(text.substr(start, sep - start));
    if (term.empty()) fail(ErrorCode::ParseError, "empty polynomial term");
    std::string_view coeff_text;
    std::string_view rest;
    if (term.front() == '(') {
      const std::size_t close = term.find(')');
      if (close == std::string_view::npos) fail(ErrorCode::ParseError, "unbalanced parenthesis in polynomial term");
      coeff_text = term.substr(1, close - 1);
      rest = term.substr(close + 1);
    } else {
      const std::size_t star = term.find("*v");
      coeff_text = term.substr(0, star);
      rest = star == std::string_view::npos ? std::string_view{} : term.substr(star);
    }
    Monomial m(nvars, 0);
    while (!rest.empty()) {
      if (rest.substr(0, 2) != "*v") fail(ErrorCode::ParseError, "malformed monomial in '" + std::string(term) + "'");
      rest.remove_prefix(2);
      std::size_t k = 0;
      while (k < rest.size() && std::isdigit(static_cast<unsigned char>(rest[k]))) ++k;
      if (k == 0) fail(ErrorCode::ParseError, "missing variable index in '" + std::string(term) + "'");
      const std::size_t var = std::stoul(std::string(rest.substr(0, k)));
      rest.remove_prefix(k);
      std::uint32_t e = 1;
      if (!rest.empty() && rest.front() == '^') {
        rest.remove_prefix(1);
        std::size_t j = 0;
        while (j < rest.size() && std::isdigit(static_cast<unsigned char>(rest[j]))) ++j;
        if (j == 0) fail(ErrorCode::ParseError, "missing exponent in '" + std::string(term) + "'");
        e = static_cast<std::uint32_t>(std::stoul(std::string(rest.substr(0, j))));
        rest.remove_prefix(j);
      }
      if (var >= nvars) fail(ErrorCode::VariableMismatch, "variable v" + std::to_string(var) + " out of range");
      m[var] += e;
    }
    p.add_term(m, parse_scalar(coeff_text, field));
    start = sep + 3;
  }
  return p;
}

}  // namespace tensorrank
