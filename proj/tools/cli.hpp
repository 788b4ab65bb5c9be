#pragma once

// The `trc` command-line front end. run_cli is kept separate from main so
// tests can drive it with in-memory streams.

#include <CLI11.hpp>

#include <chrono>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "tensorrank/tensorrank.hpp"

namespace trc {

namespace exit_code {
inline constexpr int ok = 0;          // definitive answer
inline constexpr int usage = 1;       // usage, parse or IO error
inline constexpr int inconclusive = 2;
inline constexpr int invalid = 3;     // an artifact failed verification
}  // namespace exit_code

using namespace tensorrank;

namespace detail {

struct Flags {
  std::string input;
  std::string second;
  std::size_t rank = 0;
  std::size_t max_degree = 4;
  bool normalize = false;
  std::string budget;
  bool trace = false;
  std::string output;
  std::string witness;
  std::string tensor;
  std::vector<std::size_t> shape;
  bool symmetric = false;
  std::size_t threads = 0;
};

inline std::string join(const std::vector<std::size_t>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += sep;
    s += std::to_string(v[k]);
  }
  return s;
}

inline TensorFile load_tensor(const std::string& path) { return parse_tensor(read_file(path)); }

inline DenseTensor dense_of(const TensorFile& f) {
  return std::holds_alternative<DenseTensor>(f) ? std::get<DenseTensor>(f) : sym_expand(std::get<SymTensor>(f));
}

inline FieldSpec field_of(const TensorFile& f) {
  return std::holds_alternative<DenseTensor>(f) ? std::get<DenseTensor>(f).field() : std::get<SymTensor>(f).field();
}

inline SearchBudget budget_of(const Flags& fl) {
  SearchBudget b;
  b.threads = fl.threads;
  if (!fl.budget.empty()) {
    try {
      b.max_candidates = Integer(fl.budget);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "budget must be a nonnegative integer");
    }
    if (b.max_candidates < 0) fail(ErrorCode::ParseError, "budget must be a nonnegative integer");
  }
  return b;
}

/// Writes to --output if given, else to stdout.
inline void emit(const Flags& fl, std::ostream& out, const std::string& text) {
  if (fl.output.empty())
    out << text;
  else
    write_file(fl.output, text);
}

inline int cmd_info(const Flags& fl, std::ostream& out) {
  const TensorFile f = load_tensor(fl.input);
  const DenseTensor t = dense_of(f);
  const bool sym_file = std::holds_alternative<SymTensor>(f);
  out << "kind " << (sym_file ? "symtensor" : "tensor") << "\n";
  out << "field " << t.field().to_string() << "\n";
  if (sym_file) out << "n " << std::get<SymTensor>(f).n() << " d " << std::get<SymTensor>(f).d() << "\n";
  out << "shape " << join(t.shape().dims()) << "\n";
  out << "entries " << t.shape().num_entries() << "\n";
  out << "unfolding-ranks " << join(unfolding_ranks(t)) << "\n";
  if (t.is_zero()) {
    out << "rank-bounds 0..0\n";
  } else {
    const RankBounds b = rank_bounds(t);
    out << "rank-bounds " << b.lower << ".." << b.upper << "\n";
  }
  bool cubical = true;
  for (auto n : t.shape().dims()) cubical = cubical && n == t.shape().dim(0);
  out << "symmetric " << (cubical && is_symmetric(t) ? "yes" : "no") << "\n";
  return exit_code::ok;
}

inline int cmd_compress(const Flags& fl, std::ostream& out) {
  const DenseTensor t = dense_of(load_tensor(fl.input));
  const Compression c = compress(t);
  std::string text = format_tensor(c.core);
  for (std::size_t j = 0; j < c.bases.size(); ++j) {
    text += "# basis mode " + std::to_string(j) + "\n";
    for (std::size_t i = 0; i < c.bases[j].rows(); ++i) {
      text += "#";
      for (std::size_t k = 0; k < c.bases[j].cols(); ++k) text += " " + format_scalar(c.bases[j](i, k));
      text += "\n";
    }
  }
  emit(fl, out, text);
  return exit_code::ok;
}

inline void print_trace(const Verdict& v, std::ostream& out) {
  for (const auto& s : v.systems) {
    out << "trace system \"" << s.source << "\" variables " << s.nvars << " generators " << s.generators
        << (s.certified ? " certified" : " open") << "\n";
    for (const auto& d : s.degrees)
      out << "trace   degree " << d.degree << " rows " << d.rows << " cols " << d.cols << " rank " << d.rank
          << " reductions " << d.reduction_steps << " max-height " << d.max_height << "\n";
  }
}

inline int report_verdict(const Flags& fl, const Verdict& v, std::ostream& out, const FieldSpec& field) {
  out << "verdict " << to_string(v.kind) << "\n";
  out << (v.symmetric ? "srank" : "rank") << " > " << v.rank << ": "
      << (v.kind == VerdictKind::CertifiedGt ? "proven" : v.kind == VerdictKind::Disproved ? "false" : "not proven") << "\n";
  if (!v.reason.empty()) out << "reason " << v.reason << "\n";
  if (v.justification) out << "justification unfolding-rank mode " << v.justification->mode << " rank " << v.justification->rank << "\n";
  if (v.kind == VerdictKind::CertifiedGt && !v.justification) {
    out << "certificates " << v.certificates.size() << "\n";
    out << "certificate-degree " << v.certificate_degree() << "\n";
  }
  if (v.kind == VerdictKind::Inconclusive) out << "max-degree " << v.max_degree << "\n";
  if (fl.trace) print_trace(v, out);
  if (v.kind == VerdictKind::Disproved && v.witness) out << format_decomposition(*v.witness, field);
  if (v.kind == VerdictKind::CertifiedGt) {
    if (!fl.output.empty()) {
      write_file(fl.output, format_bundle(bundle_of(v, fl.normalize)));
      out << "bundle " << fl.output << "\n";
    }
  }
  return v.kind == VerdictKind::Inconclusive ? exit_code::inconclusive : exit_code::ok;
}

inline CertifyOptions options_of(const Flags& fl, const FieldSpec& field) {
  CertifyOptions opt;
  opt.max_degree = fl.max_degree;
  opt.normalize = fl.normalize;
  opt.threads = fl.threads;
  if (!fl.witness.empty()) opt.witness = parse_decomposition(read_file(fl.witness), field);
  return opt;
}

inline int cmd_certify(const Flags& fl, std::ostream& out) {
  const DenseTensor t = dense_of(load_tensor(fl.input));
  const Verdict v = certify_rank_gt(t, fl.rank, options_of(fl, t.field()));
  return report_verdict(fl, v, out, t.field());
}

inline int cmd_certify_sym(const Flags& fl, std::ostream& out) {
  const TensorFile f = load_tensor(fl.input);
  const SymTensor s = std::holds_alternative<SymTensor>(f) ? std::get<SymTensor>(f) : sym_pack(std::get<DenseTensor>(f));
  const Verdict v = certify_srank_gt(s, fl.rank, options_of(fl, s.field()));
  return report_verdict(fl, v, out, s.field());
}

inline int cmd_search(const Flags& fl, std::ostream& out) {
  const DenseTensor t = dense_of(load_tensor(fl.input));
  const auto dec = search_decomposition(t, fl.rank, budget_of(fl));
  if (!dec) {
    out << "result none\n";
    out << "rank over " << t.field().to_string() << " exceeds " << fl.rank << "\n";
    return exit_code::ok;
  }
  out << "result found " << dec->terms.size() << " terms\n";
  emit(fl, out, format_decomposition(*dec, t.field()));
  return exit_code::ok;
}

inline int cmd_rank(const Flags& fl, std::ostream& out) {
  const DenseTensor t = dense_of(load_tensor(fl.input));
  const FqRank r = rank_over_Fq(t, budget_of(fl));
  out << "rank " << r.rank << "\n";
  emit(fl, out, format_decomposition(r.witness, t.field()));
  return exit_code::ok;
}

inline int cmd_srank(const Flags& fl, std::ostream& out) {
  const TensorFile f = load_tensor(fl.input);
  const SymTensor s = std::holds_alternative<SymTensor>(f) ? std::get<SymTensor>(f) : sym_pack(std::get<DenseTensor>(f));
  const FqSrank r = srank_over_Fq(s, budget_of(fl));
  if (!r.decomposable) {
    out << "srank none\n";
    out << "NotWaringDecomposable\n";
    return exit_code::ok;
  }
  out << "srank " << r.rank << "\n";
  emit(fl, out, format_decomposition(r.witness, s.field()));
  return exit_code::ok;
}

inline int cmd_verify_cert(const Flags& fl, std::ostream& out) {
  const CertificateBundle b = parse_bundle(read_file(fl.input));
  std::optional<TensorFile> t;
  if (!fl.tensor.empty()) t = load_tensor(fl.tensor);
  const BundleCheck c = check_bundle(b, t);
  out << (c.valid ? "VALID" : "INVALID") << "\n";
  out << c.message << "\n";
  return c.valid ? exit_code::ok : exit_code::invalid;
}

inline int cmd_verify_decomp(const Flags& fl, std::ostream& out) {
  const DenseTensor t = dense_of(load_tensor(fl.input));
  const Decomposition dec = parse_decomposition(read_file(fl.second), t.field());
  const bool ok = eval_decomposition(dec, t.shape(), t.field()) == t;
  out << (ok ? "VALID" : "INVALID") << "\n";
  if (ok) out << "rank <= " << dec.terms.size() << "\n";
  return ok ? exit_code::ok : exit_code::invalid;
}

inline int cmd_estimate(const Flags& fl, std::ostream& out) {
  std::optional<Shape> shape;
  bool symmetric = fl.symmetric;
  if (!fl.input.empty()) {
    const TensorFile f = load_tensor(fl.input);
    shape = dense_of(f).shape();
    symmetric = symmetric || std::holds_alternative<SymTensor>(f);
  } else if (!fl.shape.empty()) {
    shape = Shape(fl.shape);
  } else {
    throw CLI::ValidationError("estimate", "needs a tensor file or --shape");
  }
  out << format_report(complexity_estimate(*shape, fl.rank, symmetric));
  return exit_code::ok;
}

}  // namespace detail

/// Parses argv, dispatches, and maps outcomes to exit codes. Diagnostics go
/// to `err` as `error: <Code>: <message>`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tensor rank certificates and finite-field rank search", "trc"};
  app.require_subcommand(1);
  detail::Flags fl;
  app.add_option("--threads", fl.threads, "worker threads (0: TRC_THREADS or all cores)");

  auto with_input = [&](CLI::App* sub, const char* what) { sub->add_option("file", fl.input, what)->required(); };
  auto with_rank = [&](CLI::App* sub) {
    sub->add_option("--rank,-r", fl.rank, "the r in rank > r")->required()->check(CLI::PositiveNumber);
  };
  auto with_output = [&](CLI::App* sub, const char* what) { sub->add_option("--output,-o", fl.output, what); };
  auto with_budget = [&](CLI::App* sub) { sub->add_option("--budget", fl.budget, "max candidate term tuples"); };
  auto with_certify = [&](CLI::App* sub) {
    with_input(sub, "tensor file");
    with_rank(sub);
    sub->add_option("--max-degree,-D", fl.max_degree, "largest cofactor degree tried")->capture_default_str();
    sub->add_flag("--normalize", fl.normalize, "fix one coordinate per factor, union over patterns");
    sub->add_flag("--trace", fl.trace, "print elimination statistics");
    sub->add_option("--witness", fl.witness, "decomposition file proving rank <= r");
    with_output(sub, "certificate bundle path");
  };

  auto* info = app.add_subcommand("info", "shape, field, unfolding ranks and rank bounds");
  with_input(info, "tensor file");
  auto* comp = app.add_subcommand("compress", "core tensor and change-of-basis matrices");
  with_input(comp, "tensor file");
  with_output(comp, "core tensor path");
  auto* cert = app.add_subcommand("certify", "Nullstellensatz certificate for rank > r");
  with_certify(cert);
  auto* cert_sym = app.add_subcommand("certify-sym", "Nullstellensatz certificate for symmetric rank > r");
  with_certify(cert_sym);
  auto* search = app.add_subcommand("search", "decomposition with at most r terms over GF(q)");
  with_input(search, "tensor file");
  with_rank(search);
  with_budget(search);
  with_output(search, "witness path");
  auto* rank = app.add_subcommand("rank", "exact rank over GF(q)");
  with_input(rank, "tensor file");
  with_budget(rank);
  with_output(rank, "witness path");
  auto* srank = app.add_subcommand("srank", "exact symmetric rank over GF(q)");
  with_input(srank, "tensor file");
  with_budget(srank);
  with_output(srank, "witness path");
  auto* vcert = app.add_subcommand("verify-cert", "re-check a certificate bundle");
  with_input(vcert, "bundle file");
  vcert->add_option("--tensor", fl.tensor, "also check the bundle covers this tensor's systems");
  auto* vdec = app.add_subcommand("verify-decomp", "check a decomposition against a tensor");
  with_input(vdec, "tensor file");
  vdec->add_option("decomposition", fl.second, "decomposition file")->required();
  auto* est = app.add_subcommand("estimate", "complexity figures for the certificate method");
  est->add_option("file", fl.input, "tensor file");
  est->add_option("--shape", fl.shape, "mode lengths instead of a file")->expected(2, 64);
  est->add_flag("--symmetric", fl.symmetric, "symmetric system figures");
  with_rank(est);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << e.what() << "\n";
    return exit_code::usage;
  }

  try {
    if (*info) return detail::cmd_info(fl, out);
    if (*comp) return detail::cmd_compress(fl, out);
    if (*cert) return detail::cmd_certify(fl, out);
    if (*cert_sym) return detail::cmd_certify_sym(fl, out);
    if (*search) return detail::cmd_search(fl, out);
    if (*rank) return detail::cmd_rank(fl, out);
    if (*srank) return detail::cmd_srank(fl, out);
    if (*vcert) return detail::cmd_verify_cert(fl, out);
    if (*vdec) return detail::cmd_verify_decomp(fl, out);
    if (*est) return detail::cmd_estimate(fl, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    // running out of budget is not a rank statement
    return e.code() == ErrorCode::BudgetExceeded ? exit_code::inconclusive : exit_code::usage;
  } catch (const CLI::Error& e) {
    err << "error: Usage: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "error: IOError: " << e.what() << "\n";
    return exit_code::usage;
  }
  return exit_code::usage;
}

}  // namespace trc
