#pragma once

// Polynomial systems whose solvability over the algebraic closure is
// equivalent to "rank <= r", plus coordinate normalization.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "tensorrank/error.hpp"
#include "tensorrank/exact_arith.hpp"
#include "tensorrank/poly.hpp"
#include "tensorrank/tensor.hpp"

namespace tensorrank {

/// What a system variable stands for.
struct VariableRole {
  enum class Kind { Coordinate, Scale };
  Kind kind = Kind::Coordinate;
  std::size_t term = 0;
  std::size_t mode = 0;   // unused for Scale
  std::size_t coord = 0;  // unused for Scale

  std::string name() const {
    if (kind == Kind::Scale) return "t[" + std::to_string(term) + "]";
    return "x[" + std::to_string(term) + "][" + std::to_string(mode) + "][" + std::to_string(coord) + "]";
  }
  friend bool operator==(const VariableRole&, const VariableRole&) = default;
};

class PolySystem {
 public:
  PolySystem(std::size_t degree, FieldSpec field, std::vector<VariableRole> roles, std::vector<Poly> generators)
      : degree_(degree), field_(field), roles_(std::move(roles)), generators_(std::move(generators)) {
    for (const auto& g : generators_) {
      if (g.nvars() != roles_.size()) fail(ErrorCode::VariableMismatch, "generator variable count does not match the naming map");
      if (g.field() != field_) fail(ErrorCode::FieldMismatch, "generator over a different field");
      if (g.degree() > degree_) fail(ErrorCode::ShapeMismatch, "generator exceeds the system degree");
    }
  }

  std::size_t nvars() const { return roles_.size(); }
  std::size_t degree() const { return degree_; }
  const FieldSpec& field() const { return field_; }
  const std::vector<VariableRole>& roles() const { return roles_; }
  const std::vector<Poly>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }

  friend bool operator==(const PolySystem& a, const PolySystem& b) {
    return a.degree_ == b.degree_ && a.field_ == b.field_ && a.roles_ == b.roles_ && a.generators_ == b.generators_;
  }

 private:
  std::size_t degree_;
  FieldSpec field_;
  std::vector<VariableRole> roles_;
  std::vector<Poly> generators_;
};

/// sum_{i<r} x_{0,i} (x) ... (x) x_{d-1,i} - T = 0, one equation per entry
/// in colex order. Variables are term-major, then mode, then coordinate.
inline PolySystem build_rank_system(const DenseTensor& t, std::size_t r) {
  if (r == 0) fail(ErrorCode::InvalidRank, "rank must be at least 1");
  const Shape& shape = t.shape();
  const std::size_t d = shape.order(), L = shape.dim_sum(), M = r * L;
  std::vector<VariableRole> roles;
  std::vector<std::size_t> offset(d, 0);
  for (std::size_t j = 1; j < d; ++j) offset[j] = offset[j - 1] + shape.dim(j - 1);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < shape.dim(j); ++k) roles.push_back({VariableRole::Kind::Coordinate, i, j, k});
  std::vector<Poly> gens;
  gens.reserve(shape.num_entries());
  for (std::size_t linear = 0; linear < shape.num_entries(); ++linear) {
    const auto index = shape.multi_index(linear);
    Poly f(M, t.field());
    for (std::size_t i = 0; i < r; ++i) {
      Monomial m(M, 0);
      for (std::size_t j = 0; j < d; ++j) m[i * L + offset[j] + index[j]] = 1;
      f.add_term(m, t.field().one());
    }
    f.add_term(Monomial(M, 0), -t.at(linear));
    gens.push_back(std::move(f));
  }
  return PolySystem(d, t.field(), std::move(roles), std::move(gens));
}

namespace detail {
inline void check_sym_field(const FieldSpec& field, std::size_t d) {
  const auto q = field.size();
  if (q && *q < d) fail(ErrorCode::SmallField, "field has fewer than d = " + std::to_string(d) + " elements");
}

inline PolySystem sym_system(const SymTensor& s, std::size_t r, bool scaled) {
  if (r == 0) fail(ErrorCode::InvalidRank, "rank must be at least 1");
  const std::size_t n = s.n(), d = s.d();
  const std::size_t stride = scaled ? n + 1 : n;
  const std::size_t M = r * stride;
  std::vector<VariableRole> roles;
  for (std::size_t i = 0; i < r; ++i) {
    if (scaled) roles.push_back({VariableRole::Kind::Scale, i, 0, 0});
    for (std::size_t k = 0; k < n; ++k) roles.push_back({VariableRole::Kind::Coordinate, i, 0, k});
  }
  const auto exps = SymTensor::exponents(n, d);
  std::vector<Poly> gens;
  gens.reserve(exps.size());
  for (std::size_t e = 0; e < exps.size(); ++e) {
    Poly f(M, s.field());
    for (std::size_t i = 0; i < r; ++i) {
      Monomial m(M, 0);
      const std::size_t base = i * stride + (scaled ? 1 : 0);
      if (scaled) m[i * stride] = 1;
      for (std::size_t k = 0; k < n; ++k) m[base + k] = exps[e][k];
      f.add_term(m, s.field().one());
    }
    f.add_term(Monomial(M, 0), -s.coeffs()[e]);
    gens.push_back(std::move(f));
  }
  return PolySystem(scaled ? d + 1 : d, s.field(), std::move(roles), std::move(gens));
}
}  // namespace detail

/// sum_{i<r} x_i^{(x)d} - S = 0, one equation per sorted multi-index; rn variables.
inline PolySystem build_sym_rank_system(const SymTensor& s, std::size_t r) {
  detail::check_sym_field(s.field(), s.d());
  return detail::sym_system(s, r, false);
}

/// sum_{i<r} t_i x_i^{(x)d} - S = 0; per term the scale t_i precedes the
/// n coordinates of x_i, giving r(n+1) variables and generators of degree d+1.
inline PolySystem build_sym_rank_system_ff(const SymTensor& s, std::size_t r) { return detail::sym_system(s, r, true); }

/// Exact evaluation of every generator.
inline std::vector<Scalar> eval_system(const PolySystem& sys, std::span<const Scalar> assignment) {
  if (assignment.size() != sys.nvars()) fail(ErrorCode::DimensionMismatch, "assignment length does not match variable count");
  std::vector<Scalar> out;
  out.reserve(sys.size());
  for (const auto& g : sys.generators()) out.push_back(g.evaluate(assignment));
  return out;
}

/// Assignment for build_rank_system from an explicit decomposition.
inline std::vector<Scalar> assignment_of(const Decomposition& dec, const PolySystem& sys) {
  std::vector<Scalar> out(sys.nvars(), sys.field().zero());
  for (std::size_t v = 0; v < sys.nvars(); ++v) {
    const auto& role = sys.roles()[v];
    if (role.term >= dec.terms.size()) continue;
    const auto& term = dec.terms[role.term];
    if (role.kind == VariableRole::Kind::Scale)
      out[v] = term.scale ? *term.scale : sys.field().one();
    else
      out[v] = term.factors.at(role.mode).at(role.coord);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normalization

/// For each term and each normalized mode, the coordinate fixed to 1.
struct NormalizationPattern {
  std::vector<std::vector<std::size_t>> positions;  // [term][mode]
  friend bool operator==(const NormalizationPattern&, const NormalizationPattern&) = default;
};

/// All patterns for r terms, enumerated in lexicographic order of
/// (term 0 mode 0, term 0 mode 1, ..., term r-1 mode last).
class PatternSpace {
 public:
  PatternSpace(std::vector<std::size_t> radices, std::size_t r) : radices_(std::move(radices)), r_(r) {}

  std::size_t terms() const { return r_; }
  const std::vector<std::size_t>& radices() const { return radices_; }

  /// Choices per term, N(n') for general tensors.
  Integer per_term() const {
    Integer c = 1;
    for (auto x : radices_) c *= static_cast<unsigned long>(x);
    return c;
  }
  Integer count() const { return power(per_term(), r_); }

  NormalizationPattern at(std::uint64_t index) const {
    NormalizationPattern p;
    p.positions.assign(r_, std::vector<std::size_t>(radices_.size(), 0));
    for (std::size_t i = r_; i-- > 0;)
      for (std::size_t j = radices_.size(); j-- > 0;) {
        p.positions[i][j] = index % radices_[j];
        index /= radices_[j];
      }
    if (index != 0) fail(ErrorCode::DimensionMismatch, "pattern index out of range");
    return p;
  }

 private:
  std::vector<std::size_t> radices_;
  std::size_t r_;
};

/// Patterns fixing one coordinate in each of the first d-1 modes of every term.
inline PatternSpace normalization_patterns(const Shape& shape, std::size_t r) {
  std::vector<std::size_t> radices(shape.dims().begin(), shape.dims().end() - 1);
  return PatternSpace(std::move(radices), r);
}

/// Patterns fixing one coordinate of every x_i in the scaled symmetric system.
inline PatternSpace sym_normalization_patterns(std::size_t n, std::size_t r) { return PatternSpace({n}, r); }

/// Indices of the variables a pattern fixes, in increasing order.
inline std::vector<std::size_t> pattern_variables(const PolySystem& sys, const NormalizationPattern& p) {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> where;
  for (std::size_t v = 0; v < sys.nvars(); ++v) {
    const auto& role = sys.roles()[v];
    if (role.kind == VariableRole::Kind::Coordinate) where[{role.term, role.mode, role.coord}] = v;
  }
  std::vector<std::size_t> fixed;
  for (std::size_t i = 0; i < p.positions.size(); ++i)
    for (std::size_t j = 0; j < p.positions[i].size(); ++j) {
      auto it = where.find({i, j, p.positions[i][j]});
      if (it == where.end()) fail(ErrorCode::VariableMismatch, "pattern does not match the system's variables");
      fixed.push_back(it->second);
    }
  std::sort(fixed.begin(), fixed.end());
  return fixed;
}

/// Substitutes 1 for each variable in `fixed` (sorted) and drops it.
inline PolySystem substitute_ones(const PolySystem& sys, const std::vector<std::size_t>& fixed) {
  std::vector<bool> is_fixed(sys.nvars(), false);
  for (auto v : fixed) is_fixed.at(v) = true;
  std::vector<VariableRole> roles;
  for (std::size_t v = 0; v < sys.nvars(); ++v)
    if (!is_fixed[v]) roles.push_back(sys.roles()[v]);
  std::vector<Poly> gens;
  gens.reserve(sys.size());
  for (const auto& g : sys.generators()) {
    Poly f(roles.size(), sys.field());
    for (const auto& [m, c] : g.terms()) {
      Monomial reduced;
      reduced.reserve(roles.size());
      for (std::size_t v = 0; v < m.size(); ++v)
        if (!is_fixed[v]) reduced.push_back(m[v]);
      f.add_term(reduced, c);
    }
    gens.push_back(std::move(f));
  }
  return PolySystem(sys.degree(), sys.field(), std::move(roles), std::move(gens));
}

inline PolySystem apply_pattern(const PolySystem& sys, const NormalizationPattern& p) {
  return substitute_ones(sys, pattern_variables(sys, p));
}

/// Inserts the fixed 1s back into a solution of the substituted system.
inline std::vector<Scalar> extend_assignment(std::span<const Scalar> reduced, const std::vector<std::size_t>& fixed,
                                             std::size_t full_nvars, const FieldSpec& field) {
  if (reduced.size() + fixed.size() != full_nvars) fail(ErrorCode::DimensionMismatch, "assignment does not fit the full system");
  std::vector<Scalar> out;
  out.reserve(full_nvars);
  std::size_t next = 0, f = 0;
  for (std::size_t v = 0; v < full_nvars; ++v) {
    if (f < fixed.size() && fixed[f] == v) {
      out.push_back(field.one());
      ++f;
    } else {
      out.push_back(reduced[next++]);
    }
  }
  return out;
}

/// One generator per line in the documented variable naming.
inline std::string format_system(const PolySystem& sys) {
  std::string out;
  for (const auto& g : sys.generators()) out += format_poly(g) + "\n";
  return out;
}

}  // namespace tensorrank
