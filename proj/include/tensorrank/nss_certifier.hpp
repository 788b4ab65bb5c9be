#pragma once

// Degree-graded Nullstellensatz certificates: cofactors g_i with
// sum g_i f_i = 1 prove that {f_i = 0} has no solution over the algebraic
// closure, hence rank T > r.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tensorrank/error.hpp"
#include "tensorrank/exact_arith.hpp"
#include "tensorrank/exact_linalg.hpp"
#include "tensorrank/matrix.hpp"
#include "tensorrank/parallel.hpp"
#include "tensorrank/poly.hpp"
#include "tensorrank/poly_system.hpp"
#include "tensorrank/tensor.hpp"

namespace tensorrank {

namespace detail {
inline void push_monomials(std::vector<Monomial>& out, Monomial& current, std::size_t pos, std::size_t remaining) {
  if (pos + 1 >= current.size()) {
    if (!current.empty()) current[pos] = static_cast<std::uint32_t>(remaining);
    out.push_back(current);
    return;
  }
  for (std::size_t e = remaining + 1; e-- > 0;) {
    current[pos] = static_cast<std::uint32_t>(e);
    push_monomials(out, current, pos + 1, remaining - e);
  }
  current[pos] = 0;
}
}  // namespace detail

/// Monomials of degree exactly `deg` in m variables, lexicographically decreasing.
inline std::vector<Monomial> monomials_of_degree(std::size_t m, std::size_t deg) {
  std::vector<Monomial> out;
  if (m == 0) {
    if (deg == 0) out.emplace_back();
    return out;
  }
  Monomial current(m, 0);
  detail::push_monomials(out, current, 0, deg);
  return out;
}

/// All monomials of degree <= D in graded order: degree ascending, then
/// lexicographically decreasing, e.g. {1, x1, x2, x1^2, x1x2, x2^2}.
inline std::vector<Monomial> monomials_up_to(std::size_t m, std::size_t D) {
  std::vector<Monomial> out;
  for (std::size_t g = 0; g <= D; ++g) {
    auto block = monomials_of_degree(m, g);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

/// Position of a monomial in monomials_up_to(m, D) for any D >= its degree.
class MonomialRanker {
 public:
  explicit MonomialRanker(std::size_t m) : m_(m) {}

  std::uint64_t rank(const Monomial& mono) {
    std::size_t rem = degree(mono);
    std::uint64_t r = m_ == 0 ? 0 : choose(m_ + rem - 1, m_);  // monomials of smaller degree
    if (rem == 0) return 0;
    for (std::size_t k = 0; k + 1 < m_; ++k) {
      const std::size_t parts = m_ - k - 1;
      for (std::size_t e = rem; e > mono[k]; --e) r += choose(rem - e + parts - 1, parts - 1);
      rem -= mono[k];
      if (rem == 0) break;
    }
    return r;
  }

  /// C(m + D, m) with overflow detection.
  std::uint64_t count_up_to(std::size_t D) { return choose(m_ + D, m_); }

 private:
  std::uint64_t choose(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    while (table_.size() <= n) {
      const std::size_t row = table_.size();
      std::vector<std::uint64_t> next(row + 1, 1);
      for (std::size_t j = 1; j < row; ++j) {
        const std::uint64_t a = table_[row - 1][j - 1], b = table_[row - 1][j];
        next[j] = a > kCap - b ? kCap : a + b;
      }
      table_.push_back(std::move(next));
    }
    return table_[n][k];
  }

  static constexpr std::uint64_t kCap = std::numeric_limits<std::uint64_t>::max() / 2;
  std::size_t m_;
  std::vector<std::vector<std::uint64_t>> table_;
};

/// Optional restriction of the cofactor monomial basis: (generator, monomial) -> keep.
using MonomialFilter = std::function<bool(std::size_t, const Monomial&)>;

/// The linear system in the cofactor coefficients of sum g_i f_i = 1.
/// Column (i, nu) holds the coefficients of nu * f_i; row indices are
/// positions in monomials_up_to(M, D + d); the right-hand side is e_0.
struct CertificateSystem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::pair<std::size_t, Monomial>> column_keys;
  std::vector<std::vector<std::pair<std::uint64_t, Scalar>>> columns;  // row-descending
  FieldSpec field;

  Matrix<Scalar> dense_matrix() const {
    Matrix<Scalar> a(rows, cols, field.zero());
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [row, v] : columns[c]) a(row, c) = v;
    return a;
  }
  std::vector<Scalar> rhs() const {
    std::vector<Scalar> b(rows, field.zero());
    if (rows > 0) b[0] = field.one();
    return b;
  }
};

inline CertificateSystem build_certificate_system(const PolySystem& sys, std::size_t D, const MonomialFilter& filter = {}) {
  const std::size_t M = sys.nvars();
  MonomialRanker ranker(M);
  CertificateSystem out;
  out.field = sys.field();
  const std::uint64_t rows = ranker.count_up_to(D + sys.degree());
  if (rows > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::BudgetExceeded, "certificate system too large");
  out.rows = static_cast<std::size_t>(rows);
  const auto basis = monomials_up_to(M, D);
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (const auto& nu : basis) {
      if (filter && !filter(i, nu)) continue;
      std::vector<std::pair<std::uint64_t, Scalar>> col;
      for (const auto& [mu, c] : sys.generators()[i].terms()) col.emplace_back(ranker.rank(monomial_product(nu, mu)), c);
      std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      out.column_keys.emplace_back(i, nu);
      out.columns.push_back(std::move(col));
    }
  out.cols = out.columns.size();
  return out;
}

struct Certificate {
  std::size_t degree = 0;
  PolySystem system;
  std::vector<Poly> cofactors;
  std::string source = "full";  // which sub-system this certifies
};

/// sum g_i f_i == 1, by sparse polynomial arithmetic only.
inline bool verify_certificate(const Certificate& cert) {
  const PolySystem& sys = cert.system;
  if (cert.cofactors.size() != sys.size()) fail(ErrorCode::VariableMismatch, "one cofactor per generator required");
  Poly total(sys.nvars(), sys.field());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (cert.cofactors[i].nvars() != sys.nvars()) fail(ErrorCode::VariableMismatch, "cofactor variable count differs from the system");
    total += cert.cofactors[i] * sys.generators()[i];
  }
  return total == Poly::constant(sys.nvars(), sys.field(), sys.field().one());
}

struct DegreeStats {
  std::size_t degree = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 0;
  std::size_t reduction_steps = 0;
  std::size_t max_height = 0;
};

struct CertificateSearch {
  std::optional<Certificate> certificate;
  std::vector<DegreeStats> degrees;
};

namespace detail {

// Per-domain conversion of generator coefficients into solver elements.
// Each generator is scaled by an integer so that its coefficients are
// integral (Q, Q(i)); the solved weight is scaled back afterwards.
struct RationalAdapter {
  using Domain = IntegerDomain;
  static Domain domain(const FieldSpec&) { return {}; }
  static Integer scale_of(const Poly& f) {
    Integer l = 1;
    for (const auto& [_, c] : f.terms()) l = lcm_of(l, c.rational().get_den());
    return l;
  }
  static Integer element(const Scalar& c, const Integer& l) { return Integer(c.rational().get_num() * (l / c.rational().get_den())); }
  static Integer one() { return 1; }
  static Scalar value(const Rational& x, const Integer& l, const FieldSpec&) { return Scalar(Rational(x * l)); }
};

struct GaussianAdapter {
  using Domain = GaussianIntegerDomain;
  static Domain domain(const FieldSpec&) { return {}; }
  static Integer scale_of(const Poly& f) {
    Integer l = 1;
    for (const auto& [_, c] : f.terms()) {
      l = lcm_of(l, c.gaussian().re.get_den());
      l = lcm_of(l, c.gaussian().im.get_den());
    }
    return l;
  }
  static GaussianInteger element(const Scalar& c, const Integer& l) {
    const auto& z = c.gaussian();
    return {Integer(z.re.get_num() * (l / z.re.get_den())), Integer(z.im.get_num() * (l / z.im.get_den()))};
  }
  static GaussianInteger one() { return {1, 0}; }
  static Scalar value(const GaussianRational& x, const Integer& l, const FieldSpec&) {
    return Scalar(GaussianRational{x.re * l, x.im * l});
  }
};

struct GfAdapter {
  using Domain = GfDomain;
  static Domain domain(const FieldSpec& f) { return GfDomain{&f.gf()}; }
  static Integer scale_of(const Poly&) { return 1; }
  static std::uint32_t element(const Scalar& c, const Integer&) { return c.gf().code; }
  static std::uint32_t one() { return 1; }
  static Scalar value(std::uint32_t x, const Integer&, const FieldSpec& f) { return f.from_code(x); }
};

template <class Adapter>
CertificateSearch graded_search(const PolySystem& sys, std::size_t max_degree, const MonomialFilter& filter) {
  using Domain = typename Adapter::Domain;
  using Elem = typename Domain::Elem;
  const std::size_t M = sys.nvars(), K = sys.size();
  const FieldSpec& field = sys.field();
  MonomialRanker ranker(M);

  std::vector<Integer> scale(K);
  std::vector<std::vector<std::pair<Monomial, Elem>>> gens(K);
  for (std::size_t i = 0; i < K; ++i) {
    const Poly& f = sys.generators()[i];
    scale[i] = Adapter::scale_of(f);
    for (const auto& [mu, c] : f.terms()) gens[i].emplace_back(mu, Adapter::element(c, scale[i]));
  }

  SparseSolver<Domain> solver(Adapter::domain(field), 1);
  std::vector<std::pair<std::size_t, Monomial>> keys;
  CertificateSearch out;
  for (std::size_t D = 0; D <= max_degree; ++D) {
    const std::uint64_t rows = ranker.count_up_to(D + sys.degree());
    if (rows > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::BudgetExceeded, "certificate system too large");
    solver.ensure_rows(static_cast<std::size_t>(rows));
    const auto block = monomials_of_degree(M, D);
    for (std::size_t i = 0; i < K; ++i)
      for (const auto& nu : block) {
        if (filter && !filter(i, nu)) continue;
        SparseVec<Elem> col;
        col.reserve(gens[i].size());
        for (const auto& [mu, c] : gens[i]) col.emplace_back(static_cast<std::uint32_t>(ranker.rank(monomial_product(nu, mu))), c);
        std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        solver.add_column(keys.size(), std::move(col));
        keys.emplace_back(i, nu);
      }
    auto solution = solver.solve(SparseVec<Elem>{{0u, Adapter::one()}}, keys.size());
    out.degrees.push_back({D, static_cast<std::size_t>(rows), keys.size(), solution.trace.rank,
                           solution.trace.reduction_steps, solution.trace.max_height});
    if (!solution.solvable) continue;
    std::vector<Poly> cofactors(K, Poly(M, field));
    for (std::size_t c = 0; c < keys.size(); ++c) {
      const Scalar v = Adapter::value(solution.values[c], scale[keys[c].first], field);
      if (!v.is_zero()) cofactors[keys[c].first].add_term(keys[c].second, v);
    }
    Certificate cert{D, sys, std::move(cofactors), "full"};
    if (!verify_certificate(cert)) throw std::logic_error("certificate solver produced an invalid identity");
    out.certificate = std::move(cert);
    return out;
  }
  return out;
}

}  // namespace detail

/// Tries D = 0, 1, ..., max_degree; returns the first verified certificate.
inline CertificateSearch find_certificate_search(const PolySystem& sys, std::size_t max_degree, const MonomialFilter& filter = {}) {
  switch (sys.field().kind()) {
    case FieldKind::Q: return detail::graded_search<detail::RationalAdapter>(sys, max_degree, filter);
    case FieldKind::QI: return detail::graded_search<detail::GaussianAdapter>(sys, max_degree, filter);
    case FieldKind::GF: return detail::graded_search<detail::GfAdapter>(sys, max_degree, filter);
  }
  return {};
}

inline std::optional<Certificate> find_certificate(const PolySystem& sys, std::size_t max_degree, const MonomialFilter& filter = {}) {
  return find_certificate_search(sys, max_degree, filter).certificate;
}

// ---------------------------------------------------------------------------
// Verdicts

enum class VerdictKind { CertifiedGt, Disproved, Inconclusive };

inline std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::CertifiedGt: return "CERTIFIED_GT";
    case VerdictKind::Disproved: return "DISPROVED";
    case VerdictKind::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

struct UnfoldingJustification {
  std::size_t mode = 0;
  std::size_t rank = 0;
};

struct SystemStats {
  std::string source;
  std::size_t nvars = 0;
  std::size_t generators = 0;
  bool certified = false;
  std::vector<DegreeStats> degrees;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::size_t rank = 0;  // the r in "rank > r"
  bool symmetric = false;
  FieldSpec field;
  std::optional<UnfoldingJustification> justification;
  std::vector<Certificate> certificates;
  std::optional<Decomposition> witness;
  std::vector<SystemStats> systems;
  std::size_t max_degree = 0;
  std::string reason;

  /// Largest degree among bundled certificates.
  std::size_t certificate_degree() const {
    std::size_t d = 0;
    for (const auto& c : certificates) d = std::max(d, c.degree);
    return d;
  }
};

struct CertifyOptions {
  std::size_t max_degree = 4;
  bool normalize = false;
  std::optional<Decomposition> witness;
  MonomialFilter filter;
  std::size_t threads = 0;  // 0 = TRC_THREADS or hardware
};

inline std::string describe_pattern(std::size_t r, const NormalizationPattern& p) {
  std::string s = "rank " + std::to_string(r) + " pattern ";
  for (std::size_t i = 0; i < p.positions.size(); ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < p.positions[i].size(); ++j) {
      if (j) s += ",";
      s += std::to_string(p.positions[i][j]);
    }
  }
  return s;
}

namespace detail {

inline SystemStats stats_of(const std::string& source, const PolySystem& sys, const CertificateSearch& search) {
  return {source, sys.nvars(), sys.size(), search.certificate.has_value(), search.degrees};
}

inline void run_full(Verdict& v, const PolySystem& sys, const CertifyOptions& opt) {
  auto search = find_certificate_search(sys, opt.max_degree, opt.filter);
  v.systems.push_back(stats_of("full", sys, search));
  if (search.certificate) {
    v.kind = VerdictKind::CertifiedGt;
    v.certificates.push_back(std::move(*search.certificate));
  } else {
    v.kind = VerdictKind::Inconclusive;
    v.reason = "no certificate of degree <= " + std::to_string(opt.max_degree);
  }
}

/// Every pattern of every r' in [1, r] must be certified. Tasks are
/// processed in a fixed order; after a failure, later tasks are skipped but
/// earlier ones still finish, so the reported failure is always the first.
inline void run_normalized(Verdict& v, std::size_t r, const std::function<PolySystem(std::size_t)>& build,
                           const std::function<PatternSpace(std::size_t)>& patterns, const CertifyOptions& opt) {
  struct Task {
    std::size_t terms;
    std::uint64_t index;
  };
  std::vector<PolySystem> full;
  std::vector<PatternSpace> spaces;
  std::vector<Task> tasks;
  for (std::size_t rp = 1; rp <= r; ++rp) {
    full.push_back(build(rp));
    spaces.push_back(patterns(rp));
    const Integer count = spaces.back().count();
    if (count > Integer(1u << 24)) fail(ErrorCode::BudgetExceeded, "too many normalization patterns");
    for (std::uint64_t k = 0; k < count.get_ui(); ++k) tasks.push_back({rp, k});
  }
  std::vector<std::optional<CertificateSearch>> results(tasks.size());
  std::vector<std::string> sources(tasks.size());
  std::vector<std::optional<PolySystem>> systems(tasks.size());
  std::atomic<std::size_t> first_failure{tasks.size()};
  parallel_for(tasks.size(), opt.threads, [&](std::size_t t) {
    if (t > first_failure.load()) return;
    const auto& task = tasks[t];
    const auto pattern = spaces[task.terms - 1].at(task.index);
    PolySystem sys = apply_pattern(full[task.terms - 1], pattern);
    auto search = find_certificate_search(sys, opt.max_degree, opt.filter);
    if (search.certificate) search.certificate->source = describe_pattern(task.terms, pattern);
    sources[t] = describe_pattern(task.terms, pattern);
    const bool ok = search.certificate.has_value();
    systems[t] = std::move(sys);
    results[t] = std::move(search);
    if (!ok) {
      std::size_t cur = first_failure.load();
      while (t < cur && !first_failure.compare_exchange_weak(cur, t)) {
      }
    }
  });
  const std::size_t stop = first_failure.load();
  for (std::size_t t = 0; t < tasks.size() && t <= stop; ++t) v.systems.push_back(stats_of(sources[t], *systems[t], *results[t]));
  if (stop < tasks.size()) {
    v.kind = VerdictKind::Inconclusive;
    v.reason = "no certificate of degree <= " + std::to_string(opt.max_degree) + " for " + sources[stop];
    return;
  }
  v.kind = VerdictKind::CertifiedGt;
  for (auto& res : results) v.certificates.push_back(std::move(*res->certificate));
}

}  // namespace detail

/// One-sided decision of rank T > r over the algebraic closure of T's field.
inline Verdict certify_rank_gt(const DenseTensor& t, std::size_t r, const CertifyOptions& opt = {}) {
  if (r == 0) fail(ErrorCode::InvalidRank, "rank must be at least 1");
  if (t.is_zero()) fail(ErrorCode::ZeroTensor, "the zero tensor has rank 0");
  Verdict v;
  v.rank = r;
  v.field = t.field();
  v.max_degree = opt.max_degree;
  if (opt.witness) {
    if (eval_decomposition(*opt.witness, t.shape(), t.field()) != t)
      fail(ErrorCode::InvalidWitness, "witness does not evaluate to the tensor");
    if (opt.witness->terms.size() <= r) {
      v.kind = VerdictKind::Disproved;
      v.witness = opt.witness;
      v.reason = "witness with " + std::to_string(opt.witness->terms.size()) + " terms";
      return v;
    }
  }
  const auto ranks = unfolding_ranks(t);
  for (std::size_t j = 0; j < ranks.size(); ++j)
    if (ranks[j] > r) {
      v.kind = VerdictKind::CertifiedGt;
      v.justification = UnfoldingJustification{j, ranks[j]};
      v.reason = "unfolding rank r_" + std::to_string(j) + " = " + std::to_string(ranks[j]) + " > " + std::to_string(r);
      return v;
    }
  if (!opt.normalize) {
    detail::run_full(v, build_rank_system(t, r), opt);
  } else {
    detail::run_normalized(
        v, r, [&](std::size_t rp) { return build_rank_system(t, rp); },
        [&](std::size_t rp) { return normalization_patterns(t.shape(), rp); }, opt);
  }
  return v;
}

inline Verdict certify_rank_gt(const DenseTensor& t, std::size_t r, std::size_t max_degree, bool normalize) {
  CertifyOptions opt;
  opt.max_degree = max_degree;
  opt.normalize = normalize;
  return certify_rank_gt(t, r, opt);
}

/// One-sided decision of srank S > r over the algebraic closure. The
/// normalized variant uses the scaled system sum t_i x_i^{(x)d} with one
/// coordinate of each x_i fixed to 1.
inline Verdict certify_srank_gt(const SymTensor& s, std::size_t r, const CertifyOptions& opt = {}) {
  if (r == 0) fail(ErrorCode::InvalidRank, "rank must be at least 1");
  detail::check_sym_field(s.field(), s.d());
  const DenseTensor dense = sym_expand(s);
  if (dense.is_zero()) fail(ErrorCode::ZeroTensor, "the zero tensor has rank 0");
  Verdict v;
  v.rank = r;
  v.symmetric = true;
  v.field = s.field();
  v.max_degree = opt.max_degree;
  if (opt.witness) {
    for (const auto& term : opt.witness->terms)
      for (const auto& f : term.factors)
        if (f != term.factors.front()) fail(ErrorCode::InvalidWitness, "symmetric witness terms need equal factors");
    if (eval_decomposition(*opt.witness, dense.shape(), s.field()) != dense)
      fail(ErrorCode::InvalidWitness, "witness does not evaluate to the tensor");
    if (opt.witness->terms.size() <= r) {
      v.kind = VerdictKind::Disproved;
      v.witness = opt.witness;
      v.reason = "witness with " + std::to_string(opt.witness->terms.size()) + " terms";
      return v;
    }
  }
  if (s.d() >= 2) {
    const std::size_t r0 = unfolding_rank(dense, 0);
    if (r0 > r) {
      v.kind = VerdictKind::CertifiedGt;
      v.justification = UnfoldingJustification{0, r0};
      v.reason = "unfolding rank r_0 = " + std::to_string(r0) + " > " + std::to_string(r);
      return v;
    }
  }
  if (!opt.normalize) {
    detail::run_full(v, build_sym_rank_system(s, r), opt);
  } else {
    detail::run_normalized(
        v, r, [&](std::size_t rp) { return build_sym_rank_system_ff(s, rp); },
        [&](std::size_t rp) { return sym_normalization_patterns(s.n(), rp); }, opt);
  }
  return v;
}

inline Verdict certify_srank_gt(const SymTensor& s, std::size_t r, std::size_t max_degree, bool normalize) {
  CertifyOptions opt;
  opt.max_degree = max_degree;
  opt.normalize = normalize;
  return certify_srank_gt(s, r, opt);
}

// ---------------------------------------------------------------------------
// Complexity figures

/// Rational upper bound for e used in every bound comparison.
inline Rational e_upper() { return Rational(2718282, 1000000); }

inline Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer ceil_of(const Rational& x) { return ceil_div(x.get_num(), x.get_den()); }

/// C(n, k) for a big n.
inline Integer binomial_big(const Integer& n, std::size_t k) {
  Integer out;
  mpz_bin_ui(out.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(k));
  return out;
}

/// Effective Nullstellensatz cofactor degree bound d^{M-1}.
inline Integer kollar_degree_bound(std::size_t d, std::size_t M) {
  if (M == 0) fail(ErrorCode::DimensionMismatch, "variable count must be positive");
  return power(Integer(static_cast<unsigned long>(d)), M - 1);
}

/// ceil(e * d^{M(M-1)}), the closed-form bound on monomials of degree <= d^{M-1}.
inline Integer monomial_bound(std::size_t d, std::size_t M) {
  return ceil_of(e_upper() * Rational(power(Integer(static_cast<unsigned long>(d)), M * (M - 1))));
}

/// C(M + d^{M-1}, M), the exact monomial count at the Kollar degree.
inline Integer kollar_monomial_count(std::size_t d, std::size_t M) {
  return binomial_big(Integer(static_cast<unsigned long>(M)) + kollar_degree_bound(d, M), M);
}

inline bool monomial_bound_holds(std::size_t d, std::size_t M) { return kollar_monomial_count(d, M) <= monomial_bound(d, M); }

struct ComplexityReport {
  bool symmetric = false;
  std::size_t r = 0;
  std::size_t d = 0;           // generator degree
  std::size_t variables = 0;   // M
  Integer equations;           // N(n) or C(n+d-1, d)
  Integer kollar_bound;        // d^{M-1}
  Integer monomial_count;      // C(M + d^{M-1}, M)
  Integer monomial_bound;      // ceil(e d^{M(M-1)})
  Integer linear_unknowns_bound;  // ceil(e N d^{M(M-1)})
  Integer flop_exponent;       // flops O(equations * d^{flop_exponent})
  std::size_t reduced_variables = 0;
  Integer pattern_multiplier;  // N(n')^r, or n^r for the symmetric case
  Integer reduced_flop_exponent;
  Integer single_term_reduced_flop_exponent;  // 3(M-d+1)(M-d), exact only for r = 1
  Integer equation_bound;      // symmetric: min(n^d, (d+1)^{n-1})
  std::size_t brute_force_exponent = 0;  // q^{M} candidate count over GF(q)
};

inline ComplexityReport complexity_estimate(const Shape& shape, std::size_t r, bool symmetric) {
  if (r == 0) fail(ErrorCode::InvalidRank, "rank must be at least 1");
  ComplexityReport rep;
  rep.symmetric = symmetric;
  rep.r = r;
  rep.d = shape.order();
  const std::size_t d = shape.order();
  const auto big = [](std::size_t x) { return Integer(static_cast<unsigned long>(x)); };
  if (symmetric) {
    const std::size_t n = shape.dim(0);
    for (auto x : shape.dims())
      if (x != n) fail(ErrorCode::NonCubical, "symmetric estimate needs equal mode lengths");
    rep.variables = n * r;
    rep.equations = binomial(n + d - 1, d);
    rep.equation_bound = std::min(power(big(n), d), power(big(d + 1), n - 1));
    rep.reduced_variables = n * r;  // r scales plus r(n-1) free coordinates
    rep.pattern_multiplier = power(big(n), r);
  } else {
    rep.variables = r * shape.dim_sum();
    rep.equations = big(shape.num_entries());
    rep.reduced_variables = rep.variables - r * (d - 1);
    rep.pattern_multiplier = power(normalization_patterns(shape, 1).per_term(), r);
  }
  const std::size_t M = rep.variables;
  rep.kollar_bound = kollar_degree_bound(d, M);
  rep.monomial_count = kollar_monomial_count(d, M);
  rep.monomial_bound = monomial_bound(d, M);
  rep.linear_unknowns_bound =
      ceil_of(e_upper() * Rational(rep.equations * power(big(d), M * (M - 1))));
  rep.flop_exponent = big(3) * big(M) * big(M - 1);
  const std::size_t Mr = rep.reduced_variables;
  rep.reduced_flop_exponent = big(3) * big(Mr) * big(Mr == 0 ? 0 : Mr - 1);
  rep.single_term_reduced_flop_exponent = M + 1 >= d + 1 ? big(3) * big(M - d + 1) * big(M >= d ? M - d : 0) : Integer(0);
  rep.brute_force_exponent = M;
  return rep;
}

inline std::string format_report(const ComplexityReport& rep) {
  std::ostringstream os;
  os << "kind " << (rep.symmetric ? "symmetric" : "general") << "\n";
  os << "rank " << rep.r << "\n";
  os << "degree " << rep.d << "\n";
  os << "variables " << rep.variables << "\n";
  os << "equations " << rep.equations << "\n";
  if (rep.symmetric) os << "equation-bound " << rep.equation_bound << "\n";
  os << "kollar-degree-bound " << rep.kollar_bound << "\n";
  os << "monomial-count " << rep.monomial_count << "\n";
  os << "monomial-bound " << rep.monomial_bound << "\n";
  os << "linear-unknowns-bound " << rep.linear_unknowns_bound << "\n";
  os << "flops " << rep.equations << " * " << rep.d << "^" << rep.flop_exponent << "\n";
  os << "reduced-variables " << rep.reduced_variables << "\n";
  os << "pattern-multiplier " << rep.pattern_multiplier << "\n";
  os << "reduced-flops " << rep.pattern_multiplier << " * " << rep.d << "^" << rep.reduced_flop_exponent << "\n";
  os << "single-term-reduced-exponent " << rep.single_term_reduced_flop_exponent << "\n";
  os << "brute-force q^" << rep.brute_force_exponent << "\n";
  return os.str();
}

}  // namespace tensorrank
