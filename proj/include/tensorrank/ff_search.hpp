#pragma once

// Exact rank and symmetric rank over GF(q) by exhaustive search over
// normalized rank-one terms.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tensorrank/error.hpp"
#include "tensorrank/exact_arith.hpp"
#include "tensorrank/parallel.hpp"
#include "tensorrank/tensor.hpp"

namespace tensorrank {

struct SearchBudget {
  Integer max_candidates{1000000000};  // candidate term tuples over all layers
  std::optional<std::chrono::milliseconds> time_limit;
  std::size_t threads = 0;
};

namespace detail {

using Codes = std::vector<std::uint32_t>;

struct CodesHash {
  std::size_t operator()(const Codes& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

/// Nonzero vectors of length n over GF(q); with `projective`, only those
/// whose first nonzero coordinate is 1. Lexicographic order.
inline std::vector<Codes> vectors_over(const GfField& f, std::size_t n, bool projective) {
  std::vector<Codes> out;
  Codes v(n, 0);
  for (;;) {
    std::size_t k = n;
    while (k-- > 0) {
      if (++v[k] < f.size()) break;
      v[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
    const auto lead = std::find_if(v.begin(), v.end(), [](auto x) { return x != 0; });
    if (projective && *lead != 1) continue;
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Candidate {
  Codes entries;  // flattened tensor, colex
  RankOneTerm term;
};

class LayerSearch {
 public:
  LayerSearch(const GfField& f, std::vector<Candidate> cands, Codes target, const SearchBudget& budget)
      : f_(f), cands_(std::move(cands)), target_(std::move(target)), budget_(budget),
        start_(std::chrono::steady_clock::now()) {
    for (std::size_t i = 0; i < cands_.size(); ++i) lookup_.emplace(cands_[i].entries, i);
  }

  std::size_t candidate_count() const { return cands_.size(); }
  const Candidate& candidate(std::size_t i) const { return cands_[i]; }

  /// Lexicographically first strictly increasing index tuple of length k
  /// whose terms sum to the target.
  std::optional<std::vector<std::size_t>> find(std::size_t k) {
    charge(binomial(cands_.size(), k));
    if (k == 0) {
      if (std::all_of(target_.begin(), target_.end(), [](auto x) { return x == 0; })) return std::vector<std::size_t>{};
      return std::nullopt;
    }
    const std::size_t shards = cands_.size();
    std::vector<std::optional<std::vector<std::size_t>>> found(shards);
    std::atomic<std::size_t> best{shards};
    parallel_for(shards, budget_.threads, [&](std::size_t first) {
      if (first > best.load()) return;
      std::vector<std::size_t> tuple{first};
      Codes partial = cands_[first].entries;
      if (extend(tuple, partial, k, best, first)) {
        found[first] = tuple;
        std::size_t cur = best.load();
        while (first < cur && !best.compare_exchange_weak(cur, first)) {
        }
      }
    });
    const std::size_t b = best.load();
    if (b < shards) return found[b];
    return std::nullopt;
  }

 private:
  void charge(const Integer& n) {
    consumed_ += n;
    if (consumed_ > budget_.max_candidates)
      fail(ErrorCode::BudgetExceeded, "search needs more than " + budget_.max_candidates.get_str() + " candidate tuples");
  }

  void check_time() const {
    if (!budget_.time_limit) return;
    if (std::chrono::steady_clock::now() - start_ > *budget_.time_limit) fail(ErrorCode::BudgetExceeded, "search time limit reached");
  }

  bool extend(std::vector<std::size_t>& tuple, Codes& partial, std::size_t k, const std::atomic<std::size_t>& best,
              std::size_t shard) {
    if (tuple.size() + 1 == k || k == 1) {
      if (k == 1) return partial == target_;
      Codes need(target_.size());
      for (std::size_t e = 0; e < need.size(); ++e) need[e] = f_.sub(target_[e], partial[e]);
      auto it = lookup_.find(need);
      if (it == lookup_.end() || it->second <= tuple.back()) return false;
      tuple.push_back(it->second);
      return true;
    }
    if ((++ticks_ & 0xfff) == 0) {
      check_time();
      if (shard > best.load()) return false;
    }
    for (std::size_t next = tuple.back() + 1; next < cands_.size(); ++next) {
      Codes sum(partial.size());
      for (std::size_t e = 0; e < sum.size(); ++e) sum[e] = f_.add(partial[e], cands_[next].entries[e]);
      tuple.push_back(next);
      if (extend(tuple, sum, k, best, shard)) return true;
      tuple.pop_back();
    }
    return false;
  }

  const GfField& f_;
  std::vector<Candidate> cands_;
  Codes target_;
  std::unordered_map<Codes, std::size_t, CodesHash> lookup_;
  SearchBudget budget_;
  Integer consumed_{0};
  std::chrono::steady_clock::time_point start_;
  inline static thread_local std::size_t ticks_ = 0;
};

inline Codes codes_of(const DenseTensor& t) {
  Codes out;
  out.reserve(t.entries().size());
  for (const auto& e : t.entries()) out.push_back(e.gf().code);
  return out;
}

inline const GfField& require_finite(const FieldSpec& field) {
  if (!field.is_finite()) fail(ErrorCode::NotFinite, "exhaustive search needs a finite field");
  return field.gf();
}

/// Normalized rank-one terms: projective vectors in modes j < d, any nonzero
/// vector in the last mode.
inline std::vector<Candidate> rank_one_candidates(const Shape& shape, const FieldSpec& field) {
  const GfField& f = require_finite(field);
  const std::size_t d = shape.order();
  std::vector<std::vector<Codes>> per_mode;
  for (std::size_t j = 0; j < d; ++j) per_mode.push_back(vectors_over(f, shape.dim(j), j + 1 < d));
  std::vector<Candidate> out;
  std::vector<std::size_t> pick(d, 0);
  for (;;) {
    Candidate c;
    c.entries.assign(shape.num_entries(), 0);
    for (std::size_t linear = 0; linear < shape.num_entries(); ++linear) {
      const auto index = shape.multi_index(linear);
      std::uint32_t v = 1;
      for (std::size_t j = 0; j < d && v != 0; ++j) v = f.mul(v, per_mode[j][pick[j]][index[j]]);
      c.entries[linear] = v;
    }
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<Scalar> x;
      for (auto code : per_mode[j][pick[j]]) x.push_back(field.from_code(code));
      c.term.factors.push_back(std::move(x));
    }
    out.push_back(std::move(c));
    std::size_t j = 0;  // odometer, first mode most significant
    for (j = d; j-- > 0;) {
      if (++pick[j] < per_mode[j].size()) break;
      pick[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

/// Terms t * x^{(x)d} with t != 0 and x projective.
inline std::vector<Candidate> waring_candidates(std::size_t n, std::size_t d, const FieldSpec& field) {
  const GfField& f = require_finite(field);
  const Shape shape(std::vector<std::size_t>(std::max<std::size_t>(d, 2), n));
  std::vector<Candidate> out;
  for (const auto& x : vectors_over(f, n, true))
    for (std::uint32_t t = 1; t < f.size(); ++t) {
      Candidate c;
      if (d >= 2) {
        c.entries.assign(shape.num_entries(), 0);
        for (std::size_t linear = 0; linear < shape.num_entries(); ++linear) {
          const auto index = shape.multi_index(linear);
          std::uint32_t v = t;
          for (std::size_t j = 0; j < d && v != 0; ++j) v = f.mul(v, x[index[j]]);
          c.entries[linear] = v;
        }
      } else {
        for (auto xi : x) c.entries.push_back(f.mul(t, xi));
      }
      std::vector<Scalar> xs;
      for (auto code : x) xs.push_back(field.from_code(code));
      c.term.factors.assign(d, xs);
      c.term.scale = field.from_code(t);
      out.push_back(std::move(c));
    }
  return out;
}

inline Decomposition assemble(const LayerSearch& search, const std::vector<std::size_t>& tuple) {
  Decomposition dec;
  for (auto i : tuple) dec.terms.push_back(search.candidate(i).term);
  return dec;
}

}  // namespace detail

/// Some decomposition with at most r terms, or none. Term counts are tried in
/// increasing order, so a returned witness has the fewest possible terms.
inline std::optional<Decomposition> search_decomposition(const DenseTensor& t, std::size_t r, const SearchBudget& budget = {}) {
  const GfField& f = detail::require_finite(t.field());
  detail::LayerSearch search(f, detail::rank_one_candidates(t.shape(), t.field()), detail::codes_of(t), budget);
  for (std::size_t k = 0; k <= r; ++k)
    if (auto tuple = search.find(k)) return detail::assemble(search, *tuple);
  return std::nullopt;
}

struct FqRank {
  std::size_t rank = 0;
  Decomposition witness;
};

/// Least r admitting a decomposition over GF(q), searched upward from the
/// largest unfolding rank.
inline FqRank rank_over_Fq(const DenseTensor& t, const SearchBudget& budget = {}) {
  const GfField& f = detail::require_finite(t.field());
  if (t.is_zero()) return {};
  const RankBounds bounds = rank_bounds(t);
  detail::LayerSearch search(f, detail::rank_one_candidates(t.shape(), t.field()), detail::codes_of(t), budget);
  for (std::size_t k = bounds.lower; k <= bounds.upper; ++k)
    if (auto tuple = search.find(k)) return {k, detail::assemble(search, *tuple)};
  throw std::logic_error("no decomposition within the slice bound");
}

struct FqSrank {
  bool decomposable = true;  // false: not a sum of scaled d-th powers
  std::size_t rank = 0;
  Decomposition witness;
};

/// Least r with sum_{i<r} t_i x_i^{(x)d} = S over GF(q). Minimal
/// decompositions have linearly independent terms, so the search stops at
/// dim S^d F^n = C(n+d-1, d).
inline FqSrank srank_over_Fq(const SymTensor& s, const SearchBudget& budget = {}) {
  const GfField& f = detail::require_finite(s.field());
  detail::Codes target;
  if (s.d() >= 2) {
    target = detail::codes_of(sym_expand(s));
  } else {
    for (const auto& c : s.coeffs()) target.push_back(c.gf().code);
  }
  if (std::all_of(target.begin(), target.end(), [](auto x) { return x == 0; })) return {};
  std::size_t lower = 1;
  if (s.d() >= 2) lower = unfolding_rank(sym_expand(s), 0);
  const std::size_t upper = SymTensor::exponents(s.n(), s.d()).size();
  detail::LayerSearch search(f, detail::waring_candidates(s.n(), s.d(), s.field()), std::move(target), budget);
  for (std::size_t k = lower; k <= upper; ++k)
    if (auto tuple = search.find(k)) return {true, k, detail::assemble(search, *tuple)};
  return {false, 0, {}};
}

}  // namespace tensorrank
