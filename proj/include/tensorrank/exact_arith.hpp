#pragma once

// Exact scalars: arbitrary-precision rationals, Gaussian rationals/integers,
// finite fields GF(p^l), and a runtime-tagged Scalar that carries one of them.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tensorrank/error.hpp"

namespace tensorrank {

using Integer = mpz_class;
using Rational = mpq_class;

/// Smallest k with 2^k >= x, for x >= 1.
inline std::size_t ceil_log2(const Integer& x) {
  if (x <= 1) return 0;
  Integer y = x - 1;
  return mpz_sizeinbase(y.get_mpz_t(), 2);
}

/// Bit height of p/q: ceil(log2 q) + max(1, ceil(log2 2|p|)), evaluated on the
/// reduced representation. h(0) = 1.
inline std::size_t height(Rational x) {
  x.canonicalize();
  const Integer& p = x.get_num();
  const Integer& q = x.get_den();
  std::size_t num_part = 1;
  if (p != 0) {
    Integer twice = 2 * abs(p);
    num_part = std::max<std::size_t>(1, ceil_log2(twice));
  }
  return ceil_log2(q) + num_part;
}

inline std::size_t height(const Integer& x) { return height(Rational(x)); }

inline Integer lcm_of(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd_of(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer binomial(std::size_t n, std::size_t k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Integer power(const Integer& base, std::size_t exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

// ---------------------------------------------------------------------------
// Gaussian integers and rationals

struct GaussianInteger {
  Integer re{0};
  Integer im{0};

  bool is_zero() const { return re == 0 && im == 0; }
  Integer norm() const { return re * re + im * im; }
  GaussianInteger conj() const { return {re, -im}; }

  friend bool operator==(const GaussianInteger& a, const GaussianInteger& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend GaussianInteger operator+(const GaussianInteger& a, const GaussianInteger& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianInteger operator-(const GaussianInteger& a, const GaussianInteger& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianInteger operator-(const GaussianInteger& a) { return {-a.re, -a.im}; }
  friend GaussianInteger operator*(const GaussianInteger& a, const GaussianInteger& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianInteger operator*(const GaussianInteger& a, const Integer& k) {
    return {a.re * k, a.im * k};
  }
};

/// Division in Z[i] that is known to be exact (Bareiss steps, content removal).
inline GaussianInteger exact_div(const GaussianInteger& a, const GaussianInteger& b) {
  if (b.is_zero()) fail(ErrorCode::DivisionByZero, "Gaussian integer division by zero");
  GaussianInteger t = a * b.conj();
  Integer n = b.norm();
  GaussianInteger q{t.re / n, t.im / n};
  if (!(q * b == a)) fail(ErrorCode::DivisionByZero, "inexact Gaussian integer division");
  return q;
}

inline Integer exact_div(const Integer& a, const Integer& b) {
  if (b == 0) fail(ErrorCode::DivisionByZero, "integer division by zero");
  Integer q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

namespace detail {
// round(x / n) for n > 0, ties toward +infinity
inline Integer rounded_div(const Integer& x, const Integer& n) {
  Integer num = 2 * x + n;
  Integer den = 2 * n;
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}
}  // namespace detail

/// Euclidean division with the quotient rounded to the nearest lattice point,
/// so that norm(remainder) <= norm(b) / 2.
inline std::pair<GaussianInteger, GaussianInteger> divmod(const GaussianInteger& a,
                                                          const GaussianInteger& b) {
  if (b.is_zero()) fail(ErrorCode::DivisionByZero, "Gaussian integer division by zero");
  GaussianInteger t = a * b.conj();
  Integer n = b.norm();
  GaussianInteger q{detail::rounded_div(t.re, n), detail::rounded_div(t.im, n)};
  return {q, a - q * b};
}

/// gcd in Z[i], normalized to the associate with re > 0, im >= 0.
inline GaussianInteger gcd_of(GaussianInteger a, GaussianInteger b) {
  while (!b.is_zero()) {
    auto [q, r] = divmod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  // rotate by units until in the first quadrant
  for (int k = 0; k < 4 && !a.is_zero(); ++k) {
    if (a.re > 0 && a.im >= 0) break;
    a = GaussianInteger{-a.im, a.re};
  }
  return a;
}

struct GaussianRational {
  Rational re{0};
  Rational im{0};

  bool is_zero() const { return re == 0 && im == 0; }
  Rational norm() const { return re * re + im * im; }
  GaussianRational conj() const { return {re, -im}; }

  GaussianRational inverse() const {
    if (is_zero()) fail(ErrorCode::DivisionByZero, "inverse of zero in Q(i)");
    Rational n = norm();
    return {re / n, -im / n};
  }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    return a * b.inverse();
  }
};

inline GaussianRational to_gaussian_rational(const GaussianInteger& z) {
  return {Rational(z.re), Rational(z.im)};
}

// ---------------------------------------------------------------------------
// Finite fields

namespace detail {

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t k = 2; k * k <= p; ++k)
    if (p % k == 0) return false;
  return true;
}

using ModPoly = std::vector<std::uint32_t>;  // low degree first

inline void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // p prime, a != 0
  std::uint64_t result = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

/// Remainder of a by b over GF(p); b must be nonzero.
inline ModPoly poly_rem(ModPoly a, ModPoly b, std::uint32_t p) {
  trim(a);
  trim(b);
  const std::size_t db = b.size() - 1;
  const std::uint64_t lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const std::uint64_t factor = a.back() * lead_inv % p;
    for (std::size_t k = 0; k <= db; ++k) {
      const std::uint64_t sub = factor * b[k] % p;
      a[k + shift] = static_cast<std::uint32_t>((a[k + shift] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

}  // namespace detail

/// True iff the monic polynomial `modulus` (coefficients a0..al) has no monic
/// factor of degree 1..l/2 over GF(p). Exhaustive; meant for small p^l.
inline bool is_irreducible_mod_p(const std::vector<std::uint32_t>& modulus, std::uint32_t p) {
  detail::ModPoly f = modulus;
  detail::trim(f);
  if (f.size() < 2) return false;
  const std::size_t l = f.size() - 1;
  if (l == 1) return true;
  for (std::size_t k = 1; k <= l / 2; ++k) {
    detail::ModPoly g(k + 1, 0);
    g[k] = 1;
    // odometer over the k lower coefficients
    while (true) {
      if (detail::poly_rem(f, g, p).empty()) return false;
      std::size_t pos = 0;
      while (pos < k && ++g[pos] == p) g[pos++] = 0;
      if (pos == k) break;
    }
  }
  return true;
}

/// GF(p^l), elements encoded as integers in [0, q) whose base-p digits are the
/// coefficients w.r.t. the modulus polynomial (low degree first).
/// Instances are interned: two fields are the same iff their pointers are equal.
class GfField {
 public:
  static constexpr std::uint32_t kTableLimit = 256;

  static const GfField& get(std::uint32_t p, std::uint32_t l,
                            std::vector<std::uint32_t> modulus = {}) {
    if (!detail::is_prime(p)) fail(ErrorCode::InvalidField, "GF characteristic " + std::to_string(p) + " is not prime");
    if (l < 1) fail(ErrorCode::InvalidField, "GF extension degree must be >= 1");
    std::uint64_t q = 1;
    for (std::uint32_t k = 0; k < l; ++k) {
      q *= p;
      if (q >= (std::uint64_t{1} << 31)) fail(ErrorCode::InvalidField, "GF field size exceeds 2^31");
    }
    if (l == 1) {
      modulus = {0, 1};
    } else {
      if (modulus.empty()) modulus = default_modulus(p, l);
      if (modulus.size() != l + 1) fail(ErrorCode::InvalidField, "GF modulus must have l+1 coefficients");
      for (auto c : modulus)
        if (c >= p) fail(ErrorCode::InvalidField, "GF modulus coefficient out of range");
      if (modulus.back() != 1) fail(ErrorCode::InvalidField, "GF modulus must be monic");
      if (!is_irreducible_mod_p(modulus, p)) fail(ErrorCode::InvalidField, "GF modulus is reducible");
    }

    static std::mutex mutex;
    static std::vector<std::unique_ptr<GfField>> registry;
    std::lock_guard<std::mutex> lock(mutex);
    for (const auto& f : registry)
      if (f->p_ == p && f->l_ == l && f->modulus_ == modulus) return *f;
    registry.push_back(std::unique_ptr<GfField>(new GfField(p, l, std::move(modulus), static_cast<std::uint32_t>(q))));
    return *registry.back();
  }

  /// Conway polynomials for p^l <= 64, l > 1.
  static std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t l) {
    struct Entry { std::uint32_t p, l; std::vector<std::uint32_t> c; };
    static const std::vector<Entry> table = {
        {2, 2, {1, 1, 1}},          {2, 3, {1, 1, 0, 1}},       {2, 4, {1, 1, 0, 0, 1}},
        {2, 5, {1, 0, 1, 0, 0, 1}}, {2, 6, {1, 1, 0, 1, 1, 0, 1}}, {3, 2, {2, 2, 1}},
        {3, 3, {1, 2, 0, 1}},       {5, 2, {2, 4, 1}},          {7, 2, {3, 6, 1}},
    };
    for (const auto& e : table)
      if (e.p == p && e.l == l) return e.c;
    fail(ErrorCode::InvalidField, "no default modulus for GF(" + std::to_string(p) + "^" + std::to_string(l) + "); supply one");
  }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return l_; }
  std::uint32_t size() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (l_ == 1) return static_cast<std::uint32_t>((std::uint64_t{a} + b) % p_);
    if (!add_table_.empty()) return add_table_[a * q_ + b];
    return digitwise(a, b, false);
  }
  std::uint32_t neg(std::uint32_t a) const {
    if (l_ == 1) return a == 0 ? 0 : p_ - a;
    return digitwise(0, a, true);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    if (l_ == 1) return static_cast<std::uint32_t>((std::uint64_t{a} + p_ - b) % p_);
    return digitwise(a, b, true);
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (l_ == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
    if (!mul_table_.empty()) return mul_table_[a * q_ + b];
    return poly_mul(a, b);
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) fail(ErrorCode::DivisionByZero, "inverse of zero in GF(q)");
    if (l_ == 1) return detail::inv_mod(a, p_);
    if (!inv_table_.empty()) return inv_table_[a];
    return pow(a, q_ - 2);
  }
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t result = 1;
    while (e > 0) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }
  /// Image of an integer in the prime subfield.
  std::uint32_t from_integer(const Integer& k) const {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), k.get_mpz_t(), p_);
    return static_cast<std::uint32_t>(r.get_ui());
  }

  std::vector<std::uint32_t> coefficients(std::uint32_t code) const {
    std::vector<std::uint32_t> c(l_);
    for (std::uint32_t k = 0; k < l_; ++k) {
      c[k] = code % p_;
      code /= p_;
    }
    return c;
  }
  std::uint32_t encode(const std::vector<std::uint32_t>& coeffs) const {
    if (coeffs.size() != l_) fail(ErrorCode::ParseError, "GF element needs exactly l coefficients");
    std::uint32_t code = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      if (coeffs[k] >= p_) fail(ErrorCode::ParseError, "GF coefficient out of range");
      code = code * p_ + coeffs[k];
    }
    return code;
  }

 private:
  GfField(std::uint32_t p, std::uint32_t l, std::vector<std::uint32_t> modulus, std::uint32_t q)
      : p_(p), l_(l), q_(q), modulus_(std::move(modulus)) {
    if (l_ > 1 && q_ <= kTableLimit) {
      add_table_.resize(std::size_t{q_} * q_);
      mul_table_.resize(std::size_t{q_} * q_);
      inv_table_.assign(q_, 0);
      for (std::uint32_t a = 0; a < q_; ++a)
        for (std::uint32_t b = 0; b < q_; ++b) {
          add_table_[a * q_ + b] = digitwise(a, b, false);
          mul_table_[a * q_ + b] = poly_mul(a, b);
        }
      for (std::uint32_t a = 1; a < q_; ++a)
        for (std::uint32_t b = 1; b < q_; ++b)
          if (mul_table_[a * q_ + b] == 1) inv_table_[a] = b;
    }
  }

  std::uint32_t digitwise(std::uint32_t a, std::uint32_t b, bool subtract) const {
    std::uint32_t result = 0, scale = 1;
    for (std::uint32_t k = 0; k < l_; ++k) {
      const std::uint32_t da = a % p_, db = b % p_;
      const std::uint32_t d = subtract ? (da + p_ - db) % p_ : (da + db) % p_;
      result += d * scale;
      scale *= p_;
      a /= p_;
      b /= p_;
    }
    return result;
  }

  std::uint32_t poly_mul(std::uint32_t a, std::uint32_t b) const {
    const auto ca = coefficients(a), cb = coefficients(b);
    detail::ModPoly prod(2 * l_ - 1, 0);
    for (std::uint32_t i = 0; i < l_; ++i)
      for (std::uint32_t j = 0; j < l_; ++j)
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{ca[i]} * cb[j]) % p_);
    auto rem = detail::poly_rem(prod, modulus_, p_);
    rem.resize(l_, 0);
    return encode(rem);
  }

  std::uint32_t p_, l_, q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> add_table_, mul_table_, inv_table_;
};

struct GfElem {
  const GfField* field = nullptr;
  std::uint32_t code = 0;
};

// ---------------------------------------------------------------------------
// Runtime-tagged scalars

enum class FieldKind { Q, QI, GF };

class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  // mpq_class(p, q) does not reduce, so every entry point canonicalizes
  explicit Scalar(Rational r) : value_(std::move(r)) { std::get<Rational>(value_).canonicalize(); }
  explicit Scalar(GaussianRational z) : value_(std::move(z)) {
    auto& g = std::get<GaussianRational>(value_);
    g.re.canonicalize();
    g.im.canonicalize();
  }
  Scalar(const GfField& f, std::uint32_t code) : value_(GfElem{&f, code}) {}

  FieldKind kind() const { return static_cast<FieldKind>(value_.index()); }

  const Rational& rational() const { return std::get<Rational>(value_); }
  const GaussianRational& gaussian() const { return std::get<GaussianRational>(value_); }
  const GfElem& gf() const { return std::get<GfElem>(value_); }

  bool is_zero() const {
    switch (kind()) {
      case FieldKind::Q: return rational() == 0;
      case FieldKind::QI: return gaussian().is_zero();
      case FieldKind::GF: return gf().code == 0;
    }
    return false;
  }
  bool is_one() const {
    switch (kind()) {
      case FieldKind::Q: return rational() == 1;
      case FieldKind::QI: return gaussian().re == 1 && gaussian().im == 0;
      case FieldKind::GF: return gf().code == 1;
    }
    return false;
  }

  friend bool same_field(const Scalar& a, const Scalar& b) {
    if (a.kind() != b.kind()) return false;
    return a.kind() != FieldKind::GF || a.gf().field == b.gf().field;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    switch (a.kind()) {
      case FieldKind::Q: return a.rational() == b.rational();
      case FieldKind::QI: return a.gaussian() == b.gaussian();
      case FieldKind::GF: return a.gf().code == b.gf().code;
    }
    return false;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    switch (a.kind()) {
      case FieldKind::Q: return Scalar(Rational(a.rational() + b.rational()));
      case FieldKind::QI: return Scalar(a.gaussian() + b.gaussian());
      case FieldKind::GF: return Scalar(*a.gf().field, a.gf().field->add(a.gf().code, b.gf().code));
    }
    return {};
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    switch (a.kind()) {
      case FieldKind::Q: return Scalar(Rational(a.rational() - b.rational()));
      case FieldKind::QI: return Scalar(a.gaussian() - b.gaussian());
      case FieldKind::GF: return Scalar(*a.gf().field, a.gf().field->sub(a.gf().code, b.gf().code));
    }
    return {};
  }
  friend Scalar operator-(const Scalar& a) {
    switch (a.kind()) {
      case FieldKind::Q: return Scalar(Rational(-a.rational()));
      case FieldKind::QI: return Scalar(-a.gaussian());
      case FieldKind::GF: return Scalar(*a.gf().field, a.gf().field->neg(a.gf().code));
    }
    return {};
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    switch (a.kind()) {
      case FieldKind::Q: return Scalar(Rational(a.rational() * b.rational()));
      case FieldKind::QI: return Scalar(a.gaussian() * b.gaussian());
      case FieldKind::GF: return Scalar(*a.gf().field, a.gf().field->mul(a.gf().code, b.gf().code));
    }
    return {};
  }
  Scalar inverse() const {
    if (is_zero()) fail(ErrorCode::DivisionByZero, "division by zero");
    switch (kind()) {
      case FieldKind::Q: return Scalar(Rational(1 / rational()));
      case FieldKind::QI: return Scalar(gaussian().inverse());
      case FieldKind::GF: return Scalar(*gf().field, gf().field->inv(gf().code));
    }
    return {};
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    return a * b.inverse();
  }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

 private:
  static void check_same(const Scalar& a, const Scalar& b) {
    if (!same_field(a, b)) fail(ErrorCode::FieldMismatch, "operands belong to different fields");
  }

  std::variant<Rational, GaussianRational, GfElem> value_;
};

/// Which field a tensor, polynomial or matrix lives over.
class FieldSpec {
 public:
  static FieldSpec rationals() { return FieldSpec(FieldKind::Q, nullptr); }
  static FieldSpec gaussian_rationals() { return FieldSpec(FieldKind::QI, nullptr); }
  static FieldSpec finite(std::uint32_t p, std::uint32_t l = 1, std::vector<std::uint32_t> modulus = {}) {
    return FieldSpec(FieldKind::GF, &GfField::get(p, l, std::move(modulus)));
  }
  static FieldSpec of(const Scalar& s) {
    return s.kind() == FieldKind::GF ? FieldSpec(FieldKind::GF, s.gf().field) : FieldSpec(s.kind(), nullptr);
  }

  FieldSpec() = default;

  FieldKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == FieldKind::GF; }
  const GfField& gf() const {
    if (gf_ == nullptr) fail(ErrorCode::NotFinite, "field is not finite");
    return *gf_;
  }

  Scalar zero() const { return from_integer(0); }
  Scalar one() const { return from_integer(1); }
  Scalar from_integer(const Integer& k) const {
    switch (kind_) {
      case FieldKind::Q: return Scalar(Rational(k));
      case FieldKind::QI: return Scalar(GaussianRational{Rational(k), Rational(0)});
      case FieldKind::GF: return Scalar(*gf_, gf_->from_integer(k));
    }
    return {};
  }
  Scalar from_code(std::uint32_t code) const { return Scalar(gf(), code); }

  bool contains(const Scalar& s) const {
    if (s.kind() != kind_) return false;
    return kind_ != FieldKind::GF || s.gf().field == gf_;
  }

  /// 0 for Q and Q(i), p for GF(p^l).
  std::uint32_t characteristic() const { return kind_ == FieldKind::GF ? gf_->characteristic() : 0; }
  /// Number of elements, or nullopt when infinite.
  std::optional<std::uint64_t> size() const {
    if (kind_ != FieldKind::GF) return std::nullopt;
    return gf_->size();
  }

  std::string to_string() const {
    switch (kind_) {
      case FieldKind::Q: return "Q";
      case FieldKind::QI: return "QI";
      case FieldKind::GF: {
        std::string s = "GF " + std::to_string(gf_->characteristic()) + " " + std::to_string(gf_->degree());
        if (gf_->degree() > 1) {
          s += " [";
          for (std::size_t k = 0; k < gf_->modulus().size(); ++k) {
            if (k) s += ",";
            s += std::to_string(gf_->modulus()[k]);
          }
          s += "]";
        }
        return s;
      }
    }
    return "?";
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.kind_ == b.kind_ && a.gf_ == b.gf_; }
  friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return !(a == b); }

 private:
  FieldSpec(FieldKind kind, const GfField* gf) : kind_(kind), gf_(gf) {}

  FieldKind kind_ = FieldKind::Q;
  const GfField* gf_ = nullptr;
};

inline void require_field(const FieldSpec& field, const Scalar& s) {
  if (!field.contains(s)) fail(ErrorCode::FieldMismatch, "scalar does not belong to field " + field.to_string());
}

// ---------------------------------------------------------------------------
// Scalar text syntax
//   Q:          p/q or integer
//   QI:         a/b+c/d*i  (either part omissible; "i" alone means 1*i)
//   GF(p):      integer in [0, p)
//   GF(p^l):    [a0,a1,...,a_{l-1}]

namespace detail {

inline bool is_rational_text(std::string_view s) {
  std::size_t k = 0;
  if (k < s.size() && (s[k] == '-' || s[k] == '+')) ++k;
  const std::size_t digits_start = k;
  while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
  if (k == digits_start) return false;
  if (k == s.size()) return true;
  if (s[k] != '/') return false;
  ++k;
  const std::size_t den_start = k;
  while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
  return k == s.size() && k > den_start;
}

inline Rational parse_rational(std::string_view s) {
  if (!is_rational_text(s)) fail(ErrorCode::ParseError, "malformed rational '" + std::string(s) + "'");
  std::string text(s);
  if (text[0] == '+') text.erase(0, 1);
  Rational r;
  if (r.set_str(text, 10) != 0) fail(ErrorCode::ParseError, "malformed rational '" + text + "'");
  if (r.get_den() == 0) fail(ErrorCode::DivisionByZero, "zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

inline Integer parse_integer(std::string_view s) {
  std::size_t k = 0;
  if (k < s.size() && (s[k] == '-' || s[k] == '+')) ++k;
  if (k == s.size()) fail(ErrorCode::ParseError, "malformed integer '" + std::string(s) + "'");
  for (std::size_t j = k; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) fail(ErrorCode::ParseError, "malformed integer '" + std::string(s) + "'");
  std::string text(s);
  if (text[0] == '+') text.erase(0, 1);
  return Integer(text);
}

inline GaussianRational parse_gaussian(std::string_view s) {
  if (s.empty()) fail(ErrorCode::ParseError, "empty Q(i) scalar");
  if (s.back() != 'i') return {parse_rational(s), Rational(0)};
  std::string_view body = s.substr(0, s.size() - 1);
  if (!body.empty() && body.back() == '*') body.remove_suffix(1);
  // the imaginary part starts at the last sign that is not the first character
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if (body[k] == '+' || body[k] == '-') {
      split = k;
      break;
    }
  std::string_view re_text = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
  std::string_view im_text = split == std::string_view::npos ? body : body.substr(split);
  Rational im;
  if (im_text.empty() || im_text == "+") im = 1;
  else if (im_text == "-") im = -1;
  else im = parse_rational(im_text);
  Rational re = re_text.empty() ? Rational(0) : parse_rational(re_text);
  return {re, im};
}

}  // namespace detail

inline Scalar parse_scalar(std::string_view text, const FieldSpec& field) {
  switch (field.kind()) {
    case FieldKind::Q: return Scalar(detail::parse_rational(text));
    case FieldKind::QI: return Scalar(detail::parse_gaussian(text));
    case FieldKind::GF: {
      const GfField& f = field.gf();
      if (!text.empty() && text.front() == '[') {
        if (text.back() != ']') fail(ErrorCode::ParseError, "unterminated GF element '" + std::string(text) + "'");
        std::vector<std::uint32_t> coeffs;
        std::string_view inner = text.substr(1, text.size() - 2);
        std::size_t start = 0;
        while (start <= inner.size()) {
          std::size_t comma = inner.find(',', start);
          if (comma == std::string_view::npos) comma = inner.size();
          Integer c = detail::parse_integer(inner.substr(start, comma - start));
          if (c < 0 || c >= f.characteristic()) fail(ErrorCode::ParseError, "GF coefficient out of range in '" + std::string(text) + "'");
          coeffs.push_back(static_cast<std::uint32_t>(c.get_ui()));
          start = comma + 1;
        }
        return Scalar(f, f.encode(coeffs));
      }
      Integer v = detail::parse_integer(text);
      if (v < 0 || v >= f.characteristic()) fail(ErrorCode::ParseError, "GF(p) scalar out of range: '" + std::string(text) + "'");
      return Scalar(f, f.from_integer(v));
    }
  }
  fail(ErrorCode::ParseError, "unknown field");
}

inline std::string format_scalar(const Scalar& s) {
  switch (s.kind()) {
    case FieldKind::Q: return s.rational().get_str();
    case FieldKind::QI: {
      const auto& z = s.gaussian();
      if (z.im == 0) return z.re.get_str();
      if (z.re == 0) return z.im.get_str() + "*i";
      if (z.im < 0) return z.re.get_str() + "-" + Rational(-z.im).get_str() + "*i";
      return z.re.get_str() + "+" + z.im.get_str() + "*i";
    }
    case FieldKind::GF: {
      const GfField& f = *s.gf().field;
      if (f.degree() == 1) return std::to_string(s.gf().code);
      std::string out = "[";
      auto c = f.coefficients(s.gf().code);
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(c[k]);
      }
      return out + "]";
    }
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << format_scalar(s); }

}  // namespace tensorrank
