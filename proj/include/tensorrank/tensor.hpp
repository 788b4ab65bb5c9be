#pragma once

// Dense d-way tensors (colexicographic storage, first index fastest),
// unfoldings, core compression, symmetric tensors and the polynomial
// correspondence, and explicit rank decompositions.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tensorrank/error.hpp"
#include "tensorrank/exact_arith.hpp"
#include "tensorrank/exact_linalg.hpp"
#include "tensorrank/matrix.hpp"
#include "tensorrank/poly.hpp"

namespace tensorrank {

class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) fail(ErrorCode::ShapeMismatch, "a tensor needs at least two modes");
    for (auto n : dims_)
      if (n < 1) fail(ErrorCode::ShapeMismatch, "mode lengths must be positive");
  }

  std::size_t order() const { return dims_.size(); }
  std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
  const std::vector<std::size_t>& dims() const { return dims_; }

  /// N(n): number of entries.
  std::size_t num_entries() const {
    std::size_t n = 1;
    for (auto x : dims_) n *= x;
    return n;
  }
  /// L(n): sum of mode lengths.
  std::size_t dim_sum() const {
    std::size_t n = 0;
    for (auto x : dims_) n += x;
    return n;
  }

  std::size_t linear_index(const std::vector<std::size_t>& index) const {
    if (index.size() != dims_.size()) fail(ErrorCode::ShapeMismatch, "multi-index has the wrong order");
    std::size_t linear = 0;
    for (std::size_t j = dims_.size(); j-- > 0;) {
      if (index[j] >= dims_[j]) fail(ErrorCode::ShapeMismatch, "multi-index out of range");
      linear = linear * dims_[j] + index[j];
    }
    return linear;
  }
  std::vector<std::size_t> multi_index(std::size_t linear) const {
    std::vector<std::size_t> index(dims_.size());
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      index[j] = linear % dims_[j];
      linear /= dims_[j];
    }
    return index;
  }

  friend bool operator==(const Shape& a, const Shape& b) { return a.dims_ == b.dims_; }
  friend bool operator!=(const Shape& a, const Shape& b) { return !(a == b); }

 private:
  std::vector<std::size_t> dims_;
};

class DenseTensor {
 public:
  DenseTensor(Shape shape, FieldSpec field, std::vector<Scalar> entries)
      : shape_(std::move(shape)), field_(field), entries_(std::move(entries)) {
    if (entries_.size() != shape_.num_entries()) fail(ErrorCode::ShapeMismatch, "entry count does not match shape");
    for (const auto& e : entries_) require_field(field_, e);
  }

  static DenseTensor zeros(const Shape& shape, const FieldSpec& field) {
    return DenseTensor(shape, field, std::vector<Scalar>(shape.num_entries(), field.zero()));
  }

  const Shape& shape() const { return shape_; }
  const FieldSpec& field() const { return field_; }
  const std::vector<Scalar>& entries() const { return entries_; }

  const Scalar& at(std::size_t linear) const { return entries_.at(linear); }
  const Scalar& at(const std::vector<std::size_t>& index) const { return entries_[shape_.linear_index(index)]; }
  void set(const std::vector<std::size_t>& index, const Scalar& value) {
    require_field(field_, value);
    entries_[shape_.linear_index(index)] = value;
  }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& s) { return s.is_zero(); });
  }

  friend bool operator==(const DenseTensor& a, const DenseTensor& b) {
    return a.shape_ == b.shape_ && a.field_ == b.field_ && a.entries_ == b.entries_;
  }

 private:
  Shape shape_;
  FieldSpec field_;
  std::vector<Scalar> entries_;
};

// ---------------------------------------------------------------------------
// Unfoldings (modes are 0-based in the API)

namespace detail {
inline void check_mode(const Shape& shape, std::size_t mode) {
  if (mode >= shape.order())
    fail(ErrorCode::ModeOutOfRange, "mode " + std::to_string(mode) + " out of range for order " + std::to_string(shape.order()));
}

/// Colex index of the multi-index with mode `mode` removed.
inline std::size_t complementary_index(const Shape& shape, const std::vector<std::size_t>& index, std::size_t mode) {
  std::size_t linear = 0;
  for (std::size_t j = shape.order(); j-- > 0;) {
    if (j == mode) continue;
    linear = linear * shape.dim(j) + index[j];
  }
  return linear;
}
}  // namespace detail

/// n_j x (N/n_j) matrix; column index is the colex index of the remaining modes.
inline Matrix<Scalar> unfold(const DenseTensor& t, std::size_t mode) {
  const Shape& shape = t.shape();
  detail::check_mode(shape, mode);
  const std::size_t rows = shape.dim(mode);
  Matrix<Scalar> m(rows, shape.num_entries() / rows);
  for (std::size_t linear = 0; linear < shape.num_entries(); ++linear) {
    const auto index = shape.multi_index(linear);
    m(index[mode], detail::complementary_index(shape, index, mode)) = t.at(linear);
  }
  return m;
}

inline DenseTensor refold(const Matrix<Scalar>& m, const Shape& shape, std::size_t mode, const FieldSpec& field) {
  detail::check_mode(shape, mode);
  if (m.rows() != shape.dim(mode) || m.rows() * m.cols() != shape.num_entries())
    fail(ErrorCode::ShapeMismatch, "matrix does not match the unfolding of this shape");
  std::vector<Scalar> entries(shape.num_entries());
  for (std::size_t linear = 0; linear < shape.num_entries(); ++linear) {
    const auto index = shape.multi_index(linear);
    entries[linear] = m(index[mode], detail::complementary_index(shape, index, mode));
  }
  return DenseTensor(shape, field, std::move(entries));
}

inline std::size_t unfolding_rank(const DenseTensor& t, std::size_t mode) { return exact_rank(unfold(t, mode)); }

inline std::vector<std::size_t> unfolding_ranks(const DenseTensor& t) {
  std::vector<std::size_t> ranks(t.shape().order());
  for (std::size_t j = 0; j < ranks.size(); ++j) ranks[j] = unfolding_rank(t, j);
  return ranks;
}

/// Multiplies mode `mode` by m (rows x n_mode), replacing that mode's length by m.rows().
inline DenseTensor mode_product(const DenseTensor& t, std::size_t mode, const Matrix<Scalar>& m) {
  const Shape& shape = t.shape();
  detail::check_mode(shape, mode);
  if (m.cols() != shape.dim(mode)) fail(ErrorCode::ShapeMismatch, "mode product dimension mismatch");
  std::vector<std::size_t> dims = shape.dims();
  dims[mode] = m.rows();
  Shape out_shape(dims);
  DenseTensor out = DenseTensor::zeros(out_shape, t.field());
  std::vector<Scalar> entries(out_shape.num_entries(), t.field().zero());
  for (std::size_t linear = 0; linear < shape.num_entries(); ++linear) {
    const Scalar& v = t.at(linear);
    if (v.is_zero()) continue;
    auto index = shape.multi_index(linear);
    const std::size_t k = index[mode];
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (m(i, k).is_zero()) continue;
      index[mode] = i;
      entries[out_shape.linear_index(index)] += m(i, k) * v;
    }
  }
  return DenseTensor(out_shape, t.field(), std::move(entries));
}

struct Compression {
  DenseTensor core;
  std::vector<Matrix<Scalar>> bases;  // invertible n_j x n_j; the first r_j columns span mode j
};

/// Rewrites T in bases whose leading vectors span each mode's column space.
/// The column basis is the set of pivot columns of the unfolding; it is
/// completed by unit vectors at the coordinates that are not pivots of the
/// basis matrix.
inline Compression compress(const DenseTensor& t) {
  if (t.is_zero()) fail(ErrorCode::ZeroTensor, "cannot compress the zero tensor");
  const FieldSpec& field = t.field();
  std::vector<Matrix<Scalar>> bases;
  DenseTensor core = t;
  for (std::size_t j = 0; j < t.shape().order(); ++j) {
    const Matrix<Scalar> u = unfold(t, j);
    const GaussTrace columns = gauss_eliminate(u);
    const std::size_t n = u.rows(), r = columns.rank;
    Matrix<Scalar> g(r, n);  // basis vectors as rows
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t i = 0; i < n; ++i) g(k, i) = u(i, columns.pivots[k].second);
    const GaussTrace coords = gauss_eliminate(g);
    std::vector<bool> used(n, false);
    for (const auto& [_, c] : coords.pivots) used[c] = true;
    Matrix<Scalar> basis(n, n, field.zero());
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t i = 0; i < n; ++i) basis(i, k) = g(k, i);
    std::size_t next = r;
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i]) basis(i, next++) = field.one();
    const Matrix<Scalar> inv = inverse(basis, field);
    Matrix<Scalar> leading(r, n);
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t i = 0; i < n; ++i) leading(k, i) = inv(k, i);
    core = mode_product(core, j, leading);
    bases.push_back(basis);
  }
  return {core, bases};
}

/// Inverse of compress: applies the leading r_j columns of each basis.
inline DenseTensor expand_core(const DenseTensor& core, const std::vector<Matrix<Scalar>>& bases) {
  if (bases.size() != core.shape().order()) fail(ErrorCode::ShapeMismatch, "one basis per mode required");
  DenseTensor t = core;
  for (std::size_t j = 0; j < bases.size(); ++j) {
    const std::size_t r = core.shape().dim(j), n = bases[j].rows();
    if (bases[j].cols() < r) fail(ErrorCode::ShapeMismatch, "basis too small for core");
    Matrix<Scalar> leading(n, r);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < r; ++k) leading(i, k) = bases[j](i, k);
    t = mode_product(t, j, leading);
  }
  return t;
}

struct RankBounds {
  std::size_t lower = 0;
  std::size_t upper = 0;
};

/// lower = max_j r_j(T); upper = min_j prod_{k != j} r_k(T), i.e. the
/// slice bound evaluated in the compressed frame (r_j = n_j after compress).
inline RankBounds rank_bounds(const DenseTensor& t) {
  if (t.is_zero()) fail(ErrorCode::ZeroTensor, "rank bounds of the zero tensor");
  const auto r = unfolding_ranks(t);
  RankBounds b;
  b.lower = *std::max_element(r.begin(), r.end());
  b.upper = static_cast<std::size_t>(-1);
  for (std::size_t j = 0; j < r.size(); ++j) {
    std::size_t prod = 1;
    for (std::size_t k = 0; k < r.size(); ++k)
      if (k != j) prod *= r[k];
    b.upper = std::min(b.upper, prod);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Symmetric tensors

inline bool is_symmetric(const DenseTensor& t) {
  const Shape& shape = t.shape();
  for (std::size_t j = 1; j < shape.order(); ++j)
    if (shape.dim(j) != shape.dim(0)) fail(ErrorCode::NonCubical, "symmetry needs equal mode lengths");
  for (std::size_t linear = 0; linear < shape.num_entries(); ++linear) {
    auto index = shape.multi_index(linear);
    std::sort(index.begin(), index.end());
    if (t.at(linear) != t.at(index)) return false;
  }
  return true;
}

/// Symmetric tensor in S^d F^n, one coefficient per exponent vector in J(d,n).
/// Storage order: sorted multi-indices i_1 <= ... <= i_d in lexicographic
/// order, i.e. exponent vectors in decreasing lexicographic order.
class SymTensor {
 public:
  SymTensor(std::size_t n, std::size_t d, FieldSpec field, std::vector<Scalar> coeffs)
      : n_(n), d_(d), field_(field), coeffs_(std::move(coeffs)) {
    if (n < 1 || d < 1) fail(ErrorCode::ShapeMismatch, "symmetric tensor needs n, d >= 1");
    if (coeffs_.size() != exponents(n, d).size()) fail(ErrorCode::ShapeMismatch, "coefficient count must be C(n+d-1, d)");
    for (const auto& c : coeffs_) require_field(field_, c);
  }

  static SymTensor zeros(std::size_t n, std::size_t d, const FieldSpec& field) {
    return SymTensor(n, d, field, std::vector<Scalar>(exponents(n, d).size(), field.zero()));
  }

  /// J(d, n) in storage order.
  static std::vector<Monomial> exponents(std::size_t n, std::size_t d) {
    std::vector<Monomial> out;
    Monomial current(n, 0);
    fill(out, current, 0, d);
    return out;
  }

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  const FieldSpec& field() const { return field_; }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }

  std::size_t index_of(const Monomial& exponent) const {
    if (exponent.size() != n_ || degree(exponent) != d_) fail(ErrorCode::ShapeMismatch, "exponent vector not in J(d,n)");
    const auto all = exponents(n_, d_);
    auto it = std::lower_bound(all.begin(), all.end(), exponent, std::greater<Monomial>());
    return static_cast<std::size_t>(it - all.begin());
  }
  const Scalar& at(const Monomial& exponent) const { return coeffs_[index_of(exponent)]; }

  friend bool operator==(const SymTensor& a, const SymTensor& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
  }

 private:
  static void fill(std::vector<Monomial>& out, Monomial& current, std::size_t pos, std::size_t remaining) {
    if (pos + 1 == current.size()) {
      current[pos] = static_cast<std::uint32_t>(remaining);
      out.push_back(current);
      return;
    }
    for (std::size_t e = remaining + 1; e-- > 0;) {
      current[pos] = static_cast<std::uint32_t>(e);
      fill(out, current, pos + 1, remaining - e);
    }
  }

  std::size_t n_;
  std::size_t d_;
  FieldSpec field_;
  std::vector<Scalar> coeffs_;
};

/// Content of a multi-index: how often each coordinate occurs.
inline Monomial content_of(const std::vector<std::size_t>& index, std::size_t n) {
  Monomial e(n, 0);
  for (auto i : index) ++e.at(i);
  return e;
}

inline SymTensor sym_pack(const DenseTensor& t) {
  if (!is_symmetric(t)) fail(ErrorCode::NotSymmetric, "tensor is not symmetric");
  const std::size_t n = t.shape().dim(0), d = t.shape().order();
  std::vector<Scalar> coeffs;
  for (const auto& e : SymTensor::exponents(n, d)) {
    std::vector<std::size_t> index;
    for (std::size_t k = 0; k < n; ++k) index.insert(index.end(), e[k], k);
    coeffs.push_back(t.at(index));
  }
  return SymTensor(n, d, t.field(), std::move(coeffs));
}

inline DenseTensor sym_expand(const SymTensor& s) {
  Shape shape(std::vector<std::size_t>(s.d(), s.n()));
  const auto exps = SymTensor::exponents(s.n(), s.d());
  std::vector<Scalar> entries(shape.num_entries());
  for (std::size_t linear = 0; linear < shape.num_entries(); ++linear) {
    const Monomial e = content_of(shape.multi_index(linear), s.n());
    auto it = std::lower_bound(exps.begin(), exps.end(), e, std::greater<Monomial>());
    entries[linear] = s.coeffs()[static_cast<std::size_t>(it - exps.begin())];
  }
  return DenseTensor(shape, s.field(), std::move(entries));
}

/// Multinomial coefficient d! / (j_1! ... j_n!).
inline Integer multinomial(const Monomial& j) {
  Integer result = 1;
  std::size_t total = 0;
  for (auto e : j) {
    total += e;
    result *= binomial(total, e);
  }
  return result;
}

/// f(x) = sum_j c(j) S_j x^j with c(j) the multinomial coefficient.
inline Poly poly_of_sym(const SymTensor& s) {
  Poly f(s.n(), s.field());
  const auto exps = SymTensor::exponents(s.n(), s.d());
  for (std::size_t k = 0; k < exps.size(); ++k)
    f.add_term(exps[k], s.field().from_integer(multinomial(exps[k])) * s.coeffs()[k]);
  return f;
}

/// Inverse of poly_of_sym; needs c(j) invertible, i.e. characteristic 0 or > d.
inline SymTensor sym_of_poly(const Poly& f, std::size_t n, std::size_t d) {
  const FieldSpec& field = f.field();
  const std::uint32_t p = field.characteristic();
  if (p != 0 && p <= d)
    fail(ErrorCode::SmallCharacteristic, "characteristic " + std::to_string(p) + " does not exceed degree " + std::to_string(d));
  if (f.nvars() != n) fail(ErrorCode::VariableMismatch, "polynomial has the wrong number of variables");
  for (const auto& [m, _] : f.terms())
    if (degree(m) != d) fail(ErrorCode::ShapeMismatch, "polynomial is not homogeneous of degree " + std::to_string(d));
  const auto exps = SymTensor::exponents(n, d);
  std::vector<Scalar> coeffs;
  coeffs.reserve(exps.size());
  for (const auto& e : exps) coeffs.push_back(f.coefficient(e) / field.from_integer(multinomial(e)));
  return SymTensor(n, d, field, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Decompositions

struct RankOneTerm {
  std::vector<std::vector<Scalar>> factors;  // one vector per mode
  std::optional<Scalar> scale;
};

struct Decomposition {
  std::vector<RankOneTerm> terms;
};

/// Exact sum of outer products, each multiplied by its scale when present.
inline DenseTensor eval_decomposition(const Decomposition& dec, const Shape& shape, const FieldSpec& field) {
  std::vector<Scalar> entries(shape.num_entries(), field.zero());
  for (const auto& term : dec.terms) {
    if (term.factors.size() != shape.order()) fail(ErrorCode::ShapeMismatch, "term has the wrong number of factors");
    for (std::size_t j = 0; j < shape.order(); ++j) {
      if (term.factors[j].size() != shape.dim(j)) fail(ErrorCode::ShapeMismatch, "factor length does not match mode length");
      for (const auto& x : term.factors[j]) require_field(field, x);
    }
    if (term.scale) require_field(field, *term.scale);
    for (std::size_t linear = 0; linear < shape.num_entries(); ++linear) {
      const auto index = shape.multi_index(linear);
      Scalar v = term.scale ? *term.scale : field.one();
      for (std::size_t j = 0; j < shape.order() && !v.is_zero(); ++j) v *= term.factors[j][index[j]];
      entries[linear] += v;
    }
  }
  return DenseTensor(shape, field, std::move(entries));
}

}  // namespace tensorrank
