#pragma once

// Exact elimination: field Gaussian elimination, fraction-free (Bareiss)
// elimination over Z and Z[i] with principal-minor bookkeeping, denominator
// clearing, Kronecker-Capelli solvability, and a sparse fraction-free solver
// used for large structured systems.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "tensorrank/exact_arith.hpp"
#include "tensorrank/matrix.hpp"

namespace tensorrank {

inline std::size_t height(const GaussianInteger& z) { return std::max(height(z.re), height(z.im)); }
inline std::size_t height(const GaussianRational& z) { return std::max(height(z.re), height(z.im)); }

// ---------------------------------------------------------------------------
// Field elimination

struct GaussTrace {
  std::size_t rank = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (original row, column)
  std::vector<Scalar> pivot_values;
};

/// Row echelon form by ordinary elimination (pivot rows are not normalized).
/// Pivot rule: leftmost unprocessed column, first nonzero row top-down.
inline GaussTrace gauss_eliminate(Matrix<Scalar> a) {
  GaussTrace trace;
  std::vector<std::size_t> origin(a.rows());
  for (std::size_t i = 0; i < origin.size(); ++i) origin[i] = i;
  std::size_t k = 0;
  for (std::size_t c = 0; c < a.cols() && k < a.rows(); ++c) {
    std::size_t s = k;
    while (s < a.rows() && a(s, c).is_zero()) ++s;
    if (s == a.rows()) continue;
    a.swap_rows(k, s);
    std::swap(origin[k], origin[s]);
    const Scalar pivot = a(k, c);
    const Scalar pivot_inv = pivot.inverse();
    for (std::size_t i = k + 1; i < a.rows(); ++i) {
      if (a(i, c).is_zero()) continue;
      const Scalar factor = a(i, c) * pivot_inv;
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= factor * a(k, j);
    }
    trace.pivots.emplace_back(origin[k], c);
    trace.pivot_values.push_back(pivot);
    ++k;
  }
  trace.rank = k;
  return trace;
}

inline std::size_t gauss_rank(const Matrix<Scalar>& a) { return gauss_eliminate(a).rank; }

/// Gauss-Jordan inverse of a square matrix over a field.
inline Matrix<Scalar> inverse(const Matrix<Scalar>& m, const FieldSpec& field) {
  const std::size_t n = m.rows();
  if (m.cols() != n) fail(ErrorCode::DimensionMismatch, "inverse needs a square matrix");
  Matrix<Scalar> a = m;
  Matrix<Scalar> inv(n, n, field.zero());
  for (std::size_t i = 0; i < n; ++i) inv(i, i) = field.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t s = c;
    while (s < n && a(s, c).is_zero()) ++s;
    if (s == n) fail(ErrorCode::DivisionByZero, "matrix is singular");
    a.swap_rows(c, s);
    inv.swap_rows(c, s);
    const Scalar pivot_inv = a(c, c).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) *= pivot_inv;
      inv(c, j) *= pivot_inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      const Scalar factor = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= factor * a(c, j);
        inv(i, j) -= factor * inv(c, j);
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Fraction-free elimination over Z and Z[i]

template <class T>
struct EliminationTrace {
  std::size_t rank = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (original row, column), in pivot order
  std::vector<T> minors;                                     // D_1..D_rank; D_0 = 1 is implied
  std::size_t max_height = 0;
};

namespace detail {
inline bool is_zero(const Integer& x) { return x == 0; }
inline bool is_zero(const GaussianInteger& x) { return x.is_zero(); }
inline Integer one_of(const Integer&) { return Integer(1); }
inline GaussianInteger one_of(const GaussianInteger&) { return GaussianInteger{1, 0}; }
}  // namespace detail

/// Bareiss elimination without normalizing pivots. After k steps the pivot
/// equals the determinant D_k of the submatrix on the first k pivot rows and
/// columns (rows taken in pivot order), and every entry stays integral.
template <class T>
EliminationTrace<T> bareiss_eliminate(Matrix<T> a) {
  EliminationTrace<T> trace;
  for (const auto& x : a.data()) trace.max_height = std::max(trace.max_height, height(x));
  std::vector<std::size_t> origin(a.rows());
  for (std::size_t i = 0; i < origin.size(); ++i) origin[i] = i;
  T previous = detail::one_of(T());
  std::size_t k = 0;
  for (std::size_t c = 0; c < a.cols() && k < a.rows(); ++c) {
    std::size_t s = k;
    while (s < a.rows() && detail::is_zero(a(s, c))) ++s;
    if (s == a.rows()) continue;
    a.swap_rows(k, s);
    std::swap(origin[k], origin[s]);
    const T pivot = a(k, c);
    for (std::size_t i = k + 1; i < a.rows(); ++i) {
      for (std::size_t j = c + 1; j < a.cols(); ++j) {
        a(i, j) = exact_div(pivot * a(i, j) - a(i, c) * a(k, j), previous);
        trace.max_height = std::max(trace.max_height, height(a(i, j)));
      }
      a(i, c) = T();
    }
    trace.pivots.emplace_back(origin[k], c);
    trace.minors.push_back(pivot);
    previous = pivot;
    ++k;
  }
  trace.rank = k;
  return trace;
}

template <class T>
std::string format_trace(const EliminationTrace<T>& trace) {
  std::ostringstream os;
  os << "rank " << trace.rank << "\n";
  os << "pivots";
  for (const auto& [r, c] : trace.pivots) os << " (" << r << "," << c << ")";
  os << "\nminors";
  for (const auto& m : trace.minors) {
    if constexpr (std::is_same_v<T, Integer>) {
      os << " " << m.get_str();
    } else {
      os << " " << format_scalar(Scalar(to_gaussian_rational(m)));
    }
  }
  os << "\nmax-height " << trace.max_height << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Denominator clearing

inline Matrix<Rational> to_rational_matrix(const Matrix<Scalar>& a) {
  Matrix<Rational> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).kind() != FieldKind::Q) fail(ErrorCode::FieldMismatch, "expected a matrix over Q");
      out(i, j) = a(i, j).rational();
    }
  return out;
}

inline Matrix<GaussianRational> to_gaussian_matrix(const Matrix<Scalar>& a) {
  Matrix<GaussianRational> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).kind() != FieldKind::QI) fail(ErrorCode::FieldMismatch, "expected a matrix over Q(i)");
      out(i, j) = a(i, j).gaussian();
    }
  return out;
}

/// Scales every nonzero column by the lcm of its entry denominators, giving an
/// integral matrix with the same rank and the same solvability pattern.
inline Matrix<Integer> clear_denominators(const Matrix<Rational>& a) {
  Matrix<Integer> out(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Integer scale = 1;
    for (std::size_t i = 0; i < a.rows(); ++i) scale = lcm_of(scale, a(i, j).get_den());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      Rational v = a(i, j) * scale;
      out(i, j) = v.get_num();
    }
  }
  return out;
}

inline Matrix<GaussianInteger> clear_denominators(const Matrix<GaussianRational>& a) {
  Matrix<GaussianInteger> out(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Integer scale = 1;
    for (std::size_t i = 0; i < a.rows(); ++i)
      scale = lcm_of(lcm_of(scale, a(i, j).re.get_den()), a(i, j).im.get_den());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      Rational re = a(i, j).re * scale, im = a(i, j).im * scale;
      out(i, j) = GaussianInteger{re.get_num(), im.get_num()};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Heights

template <class T>
std::size_t matrix_height(const Matrix<T>& a) {
  std::size_t h = 1;
  for (const auto& x : a.data()) h = std::max(h, height(x));
  return h;
}

inline std::size_t matrix_height(const Matrix<Scalar>& a) {
  std::size_t h = 1;
  for (const auto& x : a.data()) {
    switch (x.kind()) {
      case FieldKind::Q: h = std::max(h, height(x.rational())); break;
      case FieldKind::QI: h = std::max(h, height(x.gaussian())); break;
      case FieldKind::GF: fail(ErrorCode::FieldMismatch, "height is defined for rational entries only");
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Rank and Kronecker-Capelli

/// Exact rank. Q and Q(i) go through denominator clearing and fraction-free
/// elimination; finite fields use direct elimination.
inline std::size_t exact_rank(const Matrix<Scalar>& a) {
  if (a.data().empty()) return 0;
  switch (a.data().front().kind()) {
    case FieldKind::Q: return bareiss_eliminate(clear_denominators(to_rational_matrix(a))).rank;
    case FieldKind::QI: return bareiss_eliminate(clear_denominators(to_gaussian_matrix(a))).rank;
    case FieldKind::GF: return gauss_rank(a);
  }
  return 0;
}

/// Ax = b is solvable iff rank A = rank [A|b]. Wide systems are ranked through
/// their transposes.
inline bool solvable(const Matrix<Scalar>& a, const std::vector<Scalar>& b) {
  if (b.size() != a.rows()) fail(ErrorCode::DimensionMismatch, "right-hand side length does not match row count");
  Matrix<Scalar> plain = a;
  Matrix<Scalar> augmented = a.augmented(b);
  if (a.cols() > a.rows()) {
    plain = plain.transposed();
    augmented = augmented.transposed();
  }
  return exact_rank(plain) == exact_rank(augmented);
}

// ---------------------------------------------------------------------------
// Sparse fraction-free solver
//
// Solves A g = b where A is given by sparse columns. Columns are reduced
// against each other (elimination on A^T), keyed by their largest row index;
// b lies in the column span iff it reduces to zero. Each reduction step is
//   w <- (a * w - c * P) / content
// so entries stay in the integral domain, and the step history lets the
// solution be expanded back onto the original columns.

/// Sparse vector with entries sorted by strictly decreasing index.
template <class T>
using SparseVec = std::vector<std::pair<std::uint32_t, T>>;

struct IntegerDomain {
  using Elem = Integer;
  using Frac = Rational;

  static bool is_zero(const Elem& x) { return x == 0; }
  static Elem mul(const Elem& a, const Elem& b) { return a * b; }
  static Elem sub(const Elem& a, const Elem& b) { return a - b; }
  /// Positive gcd of the entries, signed so that the lead becomes positive.
  static Elem normalizer(const SparseVec<Elem>& v) {
    Integer g = 0;
    for (const auto& [_, x] : v) {
      g = gcd_of(g, x);
      if (g == 1) break;
    }
    return v.front().second < 0 ? Integer(-g) : g;
  }
  static Elem divide(const Elem& a, const Elem& g) { return exact_div(a, g); }
  static Frac frac(const Elem& x) { return Rational(x); }
  static Frac frac_one() { return Rational(1); }
  static bool frac_is_zero(const Frac& x) { return x == 0; }
  static Frac frac_mul(const Frac& a, const Frac& b) { return a * b; }
  static Frac frac_div(const Frac& a, const Frac& b) { return a / b; }
  static Frac frac_add(const Frac& a, const Frac& b) { return a + b; }
  static Frac frac_sub(const Frac& a, const Frac& b) { return a - b; }
  static std::size_t bits(const Elem& x) { return height(x); }
};

struct GaussianIntegerDomain {
  using Elem = GaussianInteger;
  using Frac = GaussianRational;

  static bool is_zero(const Elem& x) { return x.is_zero(); }
  static Elem mul(const Elem& a, const Elem& b) { return a * b; }
  static Elem sub(const Elem& a, const Elem& b) { return a - b; }
  static Elem normalizer(const SparseVec<Elem>& v) {
    GaussianInteger g{0, 0};
    for (const auto& [_, x] : v) {
      g = gcd_of(g, x);
      if (g.norm() == 1) break;
    }
    return g;
  }
  static Elem divide(const Elem& a, const Elem& g) { return exact_div(a, g); }
  static Frac frac(const Elem& x) { return to_gaussian_rational(x); }
  static Frac frac_one() { return GaussianRational{1, 0}; }
  static bool frac_is_zero(const Frac& x) { return x.is_zero(); }
  static Frac frac_mul(const Frac& a, const Frac& b) { return a * b; }
  static Frac frac_div(const Frac& a, const Frac& b) { return a / b; }
  static Frac frac_add(const Frac& a, const Frac& b) { return a + b; }
  static Frac frac_sub(const Frac& a, const Frac& b) { return a - b; }
  static std::size_t bits(const Elem& x) { return height(x); }
};

/// Field elimination over GF(q): the "content" is the lead coefficient, so
/// every stored pivot row is monic.
struct GfDomain {
  using Elem = std::uint32_t;
  using Frac = std::uint32_t;

  const GfField* field;

  bool is_zero(Elem x) const { return x == 0; }
  Elem mul(Elem a, Elem b) const { return field->mul(a, b); }
  Elem sub(Elem a, Elem b) const { return field->sub(a, b); }
  Elem normalizer(const SparseVec<Elem>& v) const { return v.front().second; }
  Elem divide(Elem a, Elem g) const { return field->div(a, g); }
  Frac frac(Elem x) const { return x; }
  Frac frac_one() const { return 1; }
  bool frac_is_zero(Frac x) const { return x == 0; }
  Frac frac_mul(Frac a, Frac b) const { return field->mul(a, b); }
  Frac frac_div(Frac a, Frac b) const { return field->div(a, b); }
  Frac frac_add(Frac a, Frac b) const { return field->add(a, b); }
  Frac frac_sub(Frac a, Frac b) const { return field->sub(a, b); }
  std::size_t bits(Elem) const { return 0; }
};

struct SparseTrace {
  std::size_t rank = 0;
  std::vector<std::uint32_t> pivot_rows;  // lead row of each independent column, in discovery order
  std::size_t max_height = 0;
  std::size_t reduction_steps = 0;
};

template <class Frac>
struct SparseSolution {
  bool solvable = false;
  std::vector<Frac> values;  // one per column; free columns are zero
  SparseTrace trace;
};

template <class Domain>
class SparseSolver {
 public:
  using Elem = typename Domain::Elem;
  using Frac = typename Domain::Frac;

  SparseSolver(Domain domain, std::size_t rows) : dom_(std::move(domain)), lead_owner_(rows, kNone) {}

  /// Grows the row range; existing pivots are unaffected.
  void ensure_rows(std::size_t rows) {
    if (rows > lead_owner_.size()) lead_owner_.resize(rows, kNone);
  }

  /// Adds column `index`; returns true if it was independent of the columns so far.
  bool add_column(std::size_t index, SparseVec<Elem> column) {
    Frac mu = dom_.frac_one();
    std::vector<std::pair<std::uint32_t, Frac>> history;
    reduce(column, mu, history);
    if (column.empty()) return false;
    const std::uint32_t lead = column.front().first;
    for (const auto& [_, x] : column) trace_.max_height = std::max(trace_.max_height, dom_.bits(x));
    lead_owner_[lead] = static_cast<std::uint32_t>(pivots_.size());
    pivots_.push_back(Pivot{std::move(column), std::move(mu), index, std::move(history)});
    trace_.pivot_rows.push_back(lead);
    trace_.rank = pivots_.size();
    return true;
  }

  /// Kronecker-Capelli on the columns added so far; on success the returned
  /// values satisfy sum_j values[j] * column_j = rhs.
  SparseSolution<Frac> solve(SparseVec<Elem> rhs, std::size_t column_count) {
    SparseSolution<Frac> out;
    Frac mu = dom_.frac_one();
    std::vector<std::pair<std::uint32_t, Frac>> history;
    reduce(rhs, mu, history);
    out.trace = trace_;
    if (!rhs.empty()) return out;
    out.solvable = true;
    const Frac zero = dom_.frac_sub(dom_.frac_one(), dom_.frac_one());
    out.values.assign(column_count, zero);
    std::vector<Frac> weight(pivots_.size(), zero);
    for (const auto& [id, gamma] : history) weight[id] = dom_.frac_add(weight[id], gamma);
    for (std::size_t id = pivots_.size(); id-- > 0;) {
      if (dom_.frac_is_zero(weight[id])) continue;
      const Pivot& p = pivots_[id];
      const Frac scaled = dom_.frac_mul(weight[id], p.mu);
      out.values[p.column] = dom_.frac_add(out.values[p.column], scaled);
      for (const auto& [earlier, gamma] : p.history)
        weight[earlier] = dom_.frac_sub(weight[earlier], dom_.frac_mul(scaled, gamma));
    }
    return out;
  }

  const SparseTrace& trace() const { return trace_; }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  struct Pivot {
    SparseVec<Elem> row;
    Frac mu;  // row = mu * (original column - sum gamma_l * pivot_l)
    std::size_t column;
    std::vector<std::pair<std::uint32_t, Frac>> history;
  };

  void normalize(SparseVec<Elem>& w, Frac& mu) {
    if (w.empty()) return;
    const Elem g = dom_.normalizer(w);
    for (auto& entry : w) entry.second = dom_.divide(entry.second, g);
    mu = dom_.frac_div(mu, dom_.frac(g));
  }

  void reduce(SparseVec<Elem>& w, Frac& mu, std::vector<std::pair<std::uint32_t, Frac>>& history) {
    normalize(w, mu);
    SparseVec<Elem> scratch;
    while (!w.empty()) {
      const std::uint32_t owner = lead_owner_[w.front().first];
      if (owner == kNone) return;
      const Pivot& p = pivots_[owner];
      const Elem a = p.row.front().second;
      const Elem c = w.front().second;
      history.emplace_back(owner, dom_.frac_div(dom_.frac(c), dom_.frac_mul(dom_.frac(a), mu)));
      // w <- a*w - c*p.row; the leads cancel
      scratch.clear();
      std::size_t i = 1, j = 1;
      while (i < w.size() || j < p.row.size()) {
        if (j == p.row.size() || (i < w.size() && w[i].first > p.row[j].first)) {
          scratch.emplace_back(w[i].first, dom_.mul(a, w[i].second));
          ++i;
        } else if (i == w.size() || p.row[j].first > w[i].first) {
          scratch.emplace_back(p.row[j].first, dom_.sub(Elem{}, dom_.mul(c, p.row[j].second)));
          ++j;
        } else {
          Elem v = dom_.sub(dom_.mul(a, w[i].second), dom_.mul(c, p.row[j].second));
          if (!dom_.is_zero(v)) scratch.emplace_back(w[i].first, std::move(v));
          ++i;
          ++j;
        }
      }
      std::swap(w, scratch);
      mu = dom_.frac_mul(mu, dom_.frac(a));
      normalize(w, mu);
      ++trace_.reduction_steps;
    }
  }

  Domain dom_;
  std::vector<std::uint32_t> lead_owner_;
  std::vector<Pivot> pivots_;
  SparseTrace trace_;
};

inline std::string format_trace(const SparseTrace& trace) {
  std::ostringstream os;
  os << "rank " << trace.rank << "\n";
  os << "pivot-rows";
  for (auto r : trace.pivot_rows) os << " " << r;
  os << "\nreduction-steps " << trace.reduction_steps << "\n";
  os << "max-height " << trace.max_height << "\n";
  return os.str();
}

}  // namespace tensorrank
