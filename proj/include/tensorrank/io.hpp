#pragma once

// Line-oriented text formats for tensors, decompositions and certificate
// bundles. Blank lines and lines starting with '#' are ignored on input.

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tensorrank/error.hpp"
#include "tensorrank/exact_arith.hpp"
#include "tensorrank/nss_certifier.hpp"
#include "tensorrank/poly.hpp"
#include "tensorrank/poly_system.hpp"
#include "tensorrank/tensor.hpp"

namespace tensorrank {

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

/// Content lines: trimmed, without blanks and comments.
inline std::vector<std::string> content_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

inline std::size_t parse_count(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    fail(ErrorCode::ParseError, std::string("expected a nonnegative integer for ") + what + ", got '" + s + "'");
  return std::stoul(s);
}

class LineCursor {
 public:
  explicit LineCursor(std::string_view text) : lines_(content_lines(text)) {}
  bool done() const { return pos_ >= lines_.size(); }
  const std::string& peek() const {
    if (done()) fail(ErrorCode::ParseError, "unexpected end of input");
    return lines_[pos_];
  }
  std::string next() {
    const std::string& s = peek();
    ++pos_;
    return s;
  }
  std::vector<std::string> expect(std::string_view keyword) {
    auto tokens = split_ws(next());
    if (tokens.empty() || tokens[0] != keyword)
      fail(ErrorCode::ParseError, "expected '" + std::string(keyword) + "' line");
    tokens.erase(tokens.begin());
    return tokens;
  }
  bool at(std::string_view keyword) const {
    if (done()) return false;
    auto tokens = split_ws(peek());
    return !tokens.empty() && tokens[0] == keyword;
  }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the tokens after `field`: Q | QI | GF p l [m0,...,ml].
inline FieldSpec parse_field(const std::vector<std::string>& tokens) {
  if (tokens.empty()) fail(ErrorCode::ParseError, "missing field name");
  if (tokens[0] == "Q" && tokens.size() == 1) return FieldSpec::rationals();
  if (tokens[0] == "QI" && tokens.size() == 1) return FieldSpec::gaussian_rationals();
  if (tokens[0] == "GF" && tokens.size() >= 3) {
    const auto p = detail::parse_count(tokens[1], "characteristic");
    const auto l = detail::parse_count(tokens[2], "extension degree");
    std::vector<std::uint32_t> modulus;
    if (tokens.size() > 3) {
      std::string joined;
      for (std::size_t k = 3; k < tokens.size(); ++k) joined += tokens[k];
      if (joined.size() < 2 || joined.front() != '[' || joined.back() != ']')
        fail(ErrorCode::ParseError, "modulus must be written as [m0,...,ml]");
      std::istringstream is(joined.substr(1, joined.size() - 2));
      std::string part;
      while (std::getline(is, part, ',')) modulus.push_back(static_cast<std::uint32_t>(detail::parse_count(part, "modulus coefficient")));
    }
    return FieldSpec::finite(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(l), std::move(modulus));
  }
  fail(ErrorCode::InvalidField, "unknown field");
}

inline FieldSpec parse_field(std::string_view text) { return parse_field(detail::split_ws(text)); }

using TensorFile = std::variant<DenseTensor, SymTensor>;

inline TensorFile parse_tensor(std::string_view text) {
  detail::LineCursor in(text);
  const auto head = detail::split_ws(in.next());
  if (head.size() != 1 || (head[0] != "tensor" && head[0] != "symtensor"))
    fail(ErrorCode::ParseError, "first line must be 'tensor' or 'symtensor'");
  const bool sym = head[0] == "symtensor";
  const FieldSpec field = parse_field(in.expect("field"));
  std::vector<std::size_t> dims;
  std::size_t n = 0, d = 0, count = 0;
  if (sym) {
    const auto t = detail::split_ws(in.next());
    if (t.size() != 4 || t[0] != "n" || t[2] != "d") fail(ErrorCode::ParseError, "expected 'n <n> d <d>'");
    n = detail::parse_count(t[1], "n");
    d = detail::parse_count(t[3], "d");
    if (n == 0 || d == 0) fail(ErrorCode::ShapeMismatch, "n and d must be positive");
    count = binomial(n + d - 1, d).get_ui();
  } else {
    for (const auto& s : in.expect("shape")) dims.push_back(detail::parse_count(s, "mode length"));
    count = Shape(dims).num_entries();
  }
  if (!in.expect("entries").empty()) fail(ErrorCode::ParseError, "'entries' line takes no arguments");
  std::vector<Scalar> values;
  while (!in.done())
    for (const auto& tok : detail::split_ws(in.next())) values.push_back(parse_scalar(tok, field));
  if (values.size() != count)
    fail(ErrorCode::ShapeMismatch, "expected " + std::to_string(count) + " entries, found " + std::to_string(values.size()));
  if (sym) return SymTensor(n, d, field, std::move(values));
  return DenseTensor(Shape(dims), field, std::move(values));
}

namespace detail {
inline std::string join_scalars(const std::vector<Scalar>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += " ";
    s += format_scalar(v[k]);
  }
  return s;
}
}  // namespace detail

inline std::string format_tensor(const DenseTensor& t) {
  std::string s = "tensor\nfield " + t.field().to_string() + "\nshape";
  for (auto n : t.shape().dims()) s += " " + std::to_string(n);
  return s + "\nentries\n" + detail::join_scalars(t.entries()) + "\n";
}

inline std::string format_tensor(const SymTensor& t) {
  return "symtensor\nfield " + t.field().to_string() + "\nn " + std::to_string(t.n()) + " d " + std::to_string(t.d()) +
         "\nentries\n" + detail::join_scalars(t.coeffs()) + "\n";
}

/// Reads a decomposition; an optional `field` line must agree with `field`.
inline Decomposition parse_decomposition(std::string_view text, const FieldSpec& field) {
  detail::LineCursor in(text);
  const auto head = in.expect("decomposition");
  if (head.size() != 1) fail(ErrorCode::ParseError, "expected 'decomposition <r>'");
  const std::size_t r = detail::parse_count(head[0], "term count");
  if (in.at("field") && parse_field(in.expect("field")) != field)
    fail(ErrorCode::FieldMismatch, "decomposition field differs from the tensor field");
  Decomposition dec;
  while (!in.done()) {
    if (!in.expect("term").empty()) fail(ErrorCode::ParseError, "'term' line takes no arguments");
    RankOneTerm term;
    while (!in.done() && !in.at("term") && !in.at("scale")) {
      std::vector<Scalar> x;
      for (const auto& tok : detail::split_ws(in.next())) x.push_back(parse_scalar(tok, field));
      term.factors.push_back(std::move(x));
    }
    if (in.at("scale")) {
      const auto s = in.expect("scale");
      if (s.size() != 1) fail(ErrorCode::ParseError, "expected 'scale <t>'");
      term.scale = parse_scalar(s[0], field);
    }
    if (term.factors.empty()) fail(ErrorCode::ParseError, "term without factors");
    dec.terms.push_back(std::move(term));
  }
  if (dec.terms.size() != r)
    fail(ErrorCode::ParseError, "header announces " + std::to_string(r) + " terms, found " + std::to_string(dec.terms.size()));
  return dec;
}

inline std::string format_decomposition(const Decomposition& dec, const FieldSpec& field) {
  std::string s = "decomposition " + std::to_string(dec.terms.size()) + "\nfield " + field.to_string() + "\n";
  for (const auto& term : dec.terms) {
    s += "term\n";
    for (const auto& x : term.factors) s += detail::join_scalars(x) + "\n";
    if (term.scale) s += "scale " + format_scalar(*term.scale) + "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Certificate bundles

struct CertificateBundle {
  bool symmetric = false;
  std::size_t rank = 0;
  bool normalized = false;
  FieldSpec field;
  std::optional<UnfoldingJustification> justification;
  std::vector<Certificate> certificates;
};

inline CertificateBundle bundle_of(const Verdict& v, bool normalized) {
  if (v.kind != VerdictKind::CertifiedGt) fail(ErrorCode::InvalidRank, "only certified verdicts produce a bundle");
  return {v.symmetric, v.rank, normalized, v.field, v.justification, v.certificates};
}

inline std::string format_bundle(const CertificateBundle& b) {
  std::ostringstream os;
  os << "certificate-bundle " << b.certificates.size() << "\n";
  os << "kind " << (b.symmetric ? "srank" : "rank") << "\n";
  os << "rank " << b.rank << "\n";
  os << "normalize " << (b.normalized ? "yes" : "no") << "\n";
  os << "field " << b.field.to_string() << "\n";
  if (b.justification) os << "justification unfolding-rank mode " << b.justification->mode << " rank " << b.justification->rank << "\n";
  for (const auto& c : b.certificates) {
    os << "certificate\n";
    os << "source " << c.source << "\n";
    os << "system " << c.system.nvars() << " " << c.system.size() << " " << c.system.degree() << "\n";
    os << "vars";
    for (const auto& role : c.system.roles()) os << " " << role.name();
    os << "\n";
    for (const auto& f : c.system.generators()) os << "f " << format_poly(f) << "\n";
    os << "degree " << c.degree << "\n";
    for (std::size_t i = 0; i < c.cofactors.size(); ++i) os << "g " << i << "\n" << format_poly(c.cofactors[i]) << "\n";
    os << "end\n";
  }
  return os.str();
}

namespace detail {
inline VariableRole parse_role(const std::string& s) {
  std::vector<std::size_t> idx;
  std::size_t pos = 1;
  while (pos < s.size() && s[pos] == '[') {
    const auto close = s.find(']', pos);
    if (close == std::string::npos) fail(ErrorCode::ParseError, "malformed variable name '" + s + "'");
    idx.push_back(parse_count(s.substr(pos + 1, close - pos - 1), "variable index"));
    pos = close + 1;
  }
  if (pos != s.size()) fail(ErrorCode::ParseError, "malformed variable name '" + s + "'");
  if (s[0] == 't' && idx.size() == 1) return {VariableRole::Kind::Scale, idx[0], 0, 0};
  if (s[0] == 'x' && idx.size() == 3) return {VariableRole::Kind::Coordinate, idx[0], idx[1], idx[2]};
  fail(ErrorCode::ParseError, "malformed variable name '" + s + "'");
}
}  // namespace detail

inline CertificateBundle parse_bundle(std::string_view text) {
  detail::LineCursor in(text);
  const auto head = in.expect("certificate-bundle");
  if (head.size() != 1) fail(ErrorCode::ParseError, "expected 'certificate-bundle <count>'");
  const std::size_t count = detail::parse_count(head[0], "certificate count");
  CertificateBundle b;
  const auto kind = in.expect("kind");
  if (kind.size() != 1 || (kind[0] != "rank" && kind[0] != "srank")) fail(ErrorCode::ParseError, "kind must be rank or srank");
  b.symmetric = kind[0] == "srank";
  const auto rank = in.expect("rank");
  if (rank.size() != 1) fail(ErrorCode::ParseError, "expected 'rank <r>'");
  b.rank = detail::parse_count(rank[0], "rank");
  const auto norm = in.expect("normalize");
  if (norm.size() != 1 || (norm[0] != "yes" && norm[0] != "no")) fail(ErrorCode::ParseError, "normalize must be yes or no");
  b.normalized = norm[0] == "yes";
  b.field = parse_field(in.expect("field"));
  if (in.at("justification")) {
    const auto j = in.expect("justification");
    if (j.size() != 5 || j[0] != "unfolding-rank" || j[1] != "mode" || j[3] != "rank")
      fail(ErrorCode::ParseError, "expected 'justification unfolding-rank mode <j> rank <r>'");
    b.justification = UnfoldingJustification{detail::parse_count(j[2], "mode"), detail::parse_count(j[4], "rank")};
  }
  for (std::size_t k = 0; k < count; ++k) {
    in.expect("certificate");
    const std::string source_line = in.next();
    if (source_line.rfind("source ", 0) != 0) fail(ErrorCode::ParseError, "expected 'source' line");
    const std::string source = source_line.substr(7);
    const auto sys = in.expect("system");
    if (sys.size() != 3) fail(ErrorCode::ParseError, "expected 'system <M> <K> <d>'");
    const std::size_t M = detail::parse_count(sys[0], "variable count");
    const std::size_t K = detail::parse_count(sys[1], "generator count");
    const std::size_t deg = detail::parse_count(sys[2], "system degree");
    std::vector<VariableRole> roles;
    for (const auto& name : in.expect("vars")) roles.push_back(detail::parse_role(name));
    if (roles.size() != M) fail(ErrorCode::VariableMismatch, "vars line does not list M variables");
    std::vector<Poly> gens;
    for (std::size_t i = 0; i < K; ++i) {
      const std::string line = in.next();
      if (line.rfind("f ", 0) != 0) fail(ErrorCode::ParseError, "expected 'f <poly>' line");
      gens.push_back(parse_poly(line.substr(2), M, b.field));
    }
    const auto degree = in.expect("degree");
    if (degree.size() != 1) fail(ErrorCode::ParseError, "expected 'degree <D>'");
    std::vector<Poly> cofactors;
    for (std::size_t i = 0; i < K; ++i) {
      const auto g = in.expect("g");
      if (g.size() != 1 || detail::parse_count(g[0], "cofactor index") != i) fail(ErrorCode::ParseError, "cofactors must be listed in order");
      cofactors.push_back(parse_poly(in.next(), M, b.field));
    }
    in.expect("end");
    b.certificates.push_back(
        Certificate{detail::parse_count(degree[0], "degree"), PolySystem(deg, b.field, std::move(roles), std::move(gens)),
                    std::move(cofactors), source});
  }
  if (!in.done()) fail(ErrorCode::ParseError, "trailing content after the last certificate");
  return b;
}

struct BundleCheck {
  bool valid = false;
  std::string message;
};

/// Verifies every certificate identity; with a tensor, also checks that the
/// bundle certifies exactly the systems that tensor and rank require.
inline BundleCheck check_bundle(const CertificateBundle& b, const std::optional<TensorFile>& tensor = std::nullopt) {
  for (std::size_t k = 0; k < b.certificates.size(); ++k)
    if (!verify_certificate(b.certificates[k])) return {false, "certificate " + std::to_string(k) + " fails sum g_i f_i = 1"};
  if (b.rank == 0) return {false, "rank must be positive"};
  if (!tensor) {
    if (b.certificates.empty() && !b.justification) return {false, "bundle has neither certificates nor a justification"};
    return {true, std::to_string(b.certificates.size()) + " certificate identities hold"};
  }
  DenseTensor dense = std::holds_alternative<DenseTensor>(*tensor) ? std::get<DenseTensor>(*tensor) : sym_expand(std::get<SymTensor>(*tensor));
  if (dense.field() != b.field) return {false, "bundle field differs from the tensor field"};
  if (b.symmetric != std::holds_alternative<SymTensor>(*tensor)) return {false, "bundle kind does not match the tensor file"};
  if (b.justification) {
    if (b.justification->mode >= dense.shape().order()) return {false, "justification mode out of range"};
    const std::size_t rj = unfolding_rank(dense, b.justification->mode);
    if (rj != b.justification->rank) return {false, "stated unfolding rank is wrong"};
    if (rj <= b.rank) return {false, "unfolding rank does not exceed the rank"};
    return {true, "unfolding rank " + std::to_string(rj) + " > " + std::to_string(b.rank)};
  }
  std::vector<std::pair<std::string, PolySystem>> expected;
  auto build = [&](std::size_t r) {
    return b.symmetric ? (b.normalized ? build_sym_rank_system_ff(std::get<SymTensor>(*tensor), r)
                                       : build_sym_rank_system(std::get<SymTensor>(*tensor), r))
                       : build_rank_system(dense, r);
  };
  if (!b.normalized) {
    expected.emplace_back("full", build(b.rank));
  } else {
    for (std::size_t r = 1; r <= b.rank; ++r) {
      const PatternSpace space = b.symmetric ? sym_normalization_patterns(std::get<SymTensor>(*tensor).n(), r)
                                             : normalization_patterns(dense.shape(), r);
      const PolySystem full = build(r);
      const Integer count = space.count();
      if (count > Integer(1u << 24)) return {false, "too many patterns to audit"};
      for (std::uint64_t k = 0; k < count.get_ui(); ++k) {
        const auto p = space.at(k);
        expected.emplace_back(describe_pattern(r, p), apply_pattern(full, p));
      }
    }
  }
  if (expected.size() != b.certificates.size())
    return {false, "bundle has " + std::to_string(b.certificates.size()) + " certificates, " + std::to_string(expected.size()) + " required"};
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (b.certificates[k].source != expected[k].first) return {false, "certificate " + std::to_string(k) + " has an unexpected source"};
    if (!(b.certificates[k].system == expected[k].second))
      return {false, "certificate " + std::to_string(k) + " is for a different system"};
  }
  return {true, std::to_string(expected.size()) + " certificates cover every required system"};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace tensorrank
