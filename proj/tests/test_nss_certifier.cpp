#include <gtest/gtest.h>

#include <random>
#include <set>

#include "tensorrank/nss_certifier.hpp"

using namespace tensorrank;

namespace {

const FieldSpec Q = FieldSpec::rationals();

DenseTensor int_tensor(const std::vector<std::size_t>& dims, const std::vector<long>& entries, const FieldSpec& f = Q) {
  std::vector<Scalar> v;
  for (auto x : entries) v.push_back(f.from_integer(x));
  return DenseTensor(Shape(dims), f, v);
}

DenseTensor w_tensor(const FieldSpec& f = Q) { return int_tensor({2, 2, 2}, {0, 1, 1, 0, 1, 0, 0, 0}, f); }

SymTensor sym_w(const FieldSpec& f = Q) { return SymTensor(2, 3, f, {f.zero(), f.one(), f.zero(), f.zero()}); }

PolySystem system_of(const std::vector<std::string>& polys, std::size_t nvars, std::size_t degree, const FieldSpec& f = Q) {
  std::vector<VariableRole> roles;
  for (std::size_t k = 0; k < nvars; ++k) roles.push_back({VariableRole::Kind::Coordinate, 0, 0, k});
  std::vector<Poly> gens;
  for (const auto& p : polys) gens.push_back(parse_poly(p, nvars, f));
  return PolySystem(degree, f, roles, gens);
}

std::size_t choose(std::size_t n, std::size_t k) { return binomial(n, k).get_ui(); }

}  // namespace

TEST(Monomials, CountsAndOrder) {
  const auto m = monomials_up_to(2, 2);
  EXPECT_EQ(m, (std::vector<Monomial>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}));
  EXPECT_EQ(monomials_up_to(3, 0), (std::vector<Monomial>{{0, 0, 0}}));
  EXPECT_EQ(monomials_up_to(4, 3).size(), 35u);
  for (std::size_t m2 = 1; m2 <= 5; ++m2)
    for (std::size_t D = 0; D <= 4; ++D) EXPECT_EQ(monomials_up_to(m2, D).size(), choose(m2 + D, m2));
}

TEST(Monomials, RankerAgreesWithEnumeration) {
  for (std::size_t m = 1; m <= 5; ++m) {
    MonomialRanker ranker(m);
    const auto all = monomials_up_to(m, 5);
    for (std::size_t k = 0; k < all.size(); ++k) ASSERT_EQ(ranker.rank(all[k]), k) << m;
    EXPECT_EQ(ranker.count_up_to(5), all.size());
  }
}

TEST(CertificateSystem, Dimensions) {
  const auto sys = build_rank_system(w_tensor(), 1);
  for (std::size_t D = 0; D <= 2; ++D) {
    const auto cs = build_certificate_system(sys, D);
    EXPECT_EQ(cs.cols, 8 * choose(6 + D, 6));
    EXPECT_EQ(cs.rows, choose(6 + D + 3, 6));
  }
  const auto big = build_certificate_system(build_rank_system(w_tensor(), 2), 0);
  EXPECT_EQ(big.rows, 455u);
  EXPECT_EQ(big.cols, 8u);
}

TEST(CertificateSystem, ConstantGenerator) {
  const auto sys = system_of({"2"}, 1, 0);
  const auto cert = find_certificate(sys, 0);
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->degree, 0u);
  EXPECT_EQ(cert->cofactors[0], Poly::constant(1, Q, Scalar(Rational(1, 2))));
}

TEST(CertificateSystem, ConsistentSystemHasNoCertificate) {
  EXPECT_FALSE(find_certificate(system_of({"1*v0"}, 1, 1), 6));
  EXPECT_FALSE(find_certificate(system_of({"1*v0*v1 + -1", "1*v0 + -1"}, 2, 2), 5));
}

TEST(CertificateSystem, DegreeZeroCertificate) {
  // 1 = x - (x - 1)
  const auto cert = find_certificate(system_of({"1*v0 + -1", "1*v0"}, 1, 1), 3);
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->degree, 0u);
  EXPECT_TRUE(verify_certificate(*cert));
}

TEST(CertificateSystem, SolverAgreesWithDenseRankTest) {
  // the sparse solver and the dense Kronecker-Capelli test decide the same
  // linear systems
  std::mt19937 rng(21);
  std::uniform_int_distribution<long> c(-2, 2);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::string> polys;
    for (int g = 0; g < 2; ++g) {
      std::string p = std::to_string(c(rng)) + "*v0*v1 + " + std::to_string(c(rng)) + "*v0 + " + std::to_string(c(rng)) + "*v1 + " +
                      std::to_string(c(rng));
      polys.push_back(p);
    }
    const auto sys = system_of(polys, 2, 2);
    const auto search = find_certificate_search(sys, 2);
    std::optional<std::size_t> dense_first;
    for (std::size_t D = 0; D <= 2 && !dense_first; ++D) {
      const auto cs = build_certificate_system(sys, D);
      if (solvable(cs.dense_matrix(), cs.rhs())) dense_first = D;
    }
    ASSERT_EQ(search.certificate.has_value(), dense_first.has_value()) << trial;
    if (dense_first) {
      EXPECT_EQ(search.certificate->degree, *dense_first);
      EXPECT_TRUE(verify_certificate(*search.certificate));
    }
    for (const auto& st : search.degrees) {
      const auto cs = build_certificate_system(sys, st.degree);
      EXPECT_EQ(st.rank, gauss_rank(cs.dense_matrix())) << trial;
      EXPECT_EQ(st.rows, cs.rows);
      EXPECT_EQ(st.cols, cs.cols);
    }
  }
}

TEST(Certificates, IdentityMatrixRankOne) {
  const auto I = int_tensor({2, 2}, {1, 0, 0, 1});
  const auto sys = build_rank_system(I, 1);
  const auto cert = find_certificate(sys, 2);
  ASSERT_TRUE(cert);
  EXPECT_LE(cert->degree, 2u);
  EXPECT_TRUE(verify_certificate(*cert));
}

TEST(Certificates, HandWrittenIdentity) {
  // variables a0 a1 b0 b1 with f_ij = a_i b_j - I_ij
  const auto sys = build_rank_system(int_tensor({2, 2}, {1, 0, 0, 1}), 1);
  // generators in colex order: f00, f10, f01, f11; f00 itself gets cofactor -1 - f11
  const Poly& f01 = sys.generators()[2];
  const Poly& f11 = sys.generators()[3];
  const std::size_t M = sys.nvars();
  auto v = [&](std::size_t k) { return Poly::variable(M, Q, k); };
  const Poly one = Poly::constant(M, Q, Q.one());
  // f00 f11 - f10 f01 = 1 - a0b0 - a1b1 = -1 - f00 - f11, so
  // 1 = -f00 - f11 - f00 f11 + f10 f01 = (-1 - f11) f00 + f01 f10 + (-1) f11
  Certificate cert{2, sys, {-one - f11, f01, Poly(M, Q), -one}, "full"};
  EXPECT_TRUE(verify_certificate(cert));
  Certificate bad = cert;
  bad.cofactors[1] = f01 + v(0);
  EXPECT_FALSE(verify_certificate(bad));
}

TEST(Certifier, UnfoldingFastPath) {
  const auto v = certify_rank_gt(w_tensor(), 1, 4, false);
  EXPECT_EQ(v.kind, VerdictKind::CertifiedGt);
  ASSERT_TRUE(v.justification);
  EXPECT_EQ(v.justification->rank, 2u);
  EXPECT_TRUE(v.certificates.empty());
}

TEST(Certifier, WRankTwoNormalized) {
  const auto v = certify_rank_gt(w_tensor(), 2, 4, true);
  ASSERT_EQ(v.kind, VerdictKind::CertifiedGt) << v.reason;
  EXPECT_EQ(v.certificate_degree(), 4u);
  EXPECT_EQ(v.certificates.size(), 4u + 16u);
  std::set<std::string> sources;
  for (const auto& c : v.certificates) {
    EXPECT_TRUE(verify_certificate(c));
    sources.insert(c.source);
  }
  EXPECT_EQ(sources.size(), 20u);
  EXPECT_EQ(v.certificates.front().source, "rank 1 pattern 0,0");
}

TEST(Certifier, WRankTwoNormalizedNeedsDegreeFour) {
  const auto v = certify_rank_gt(w_tensor(), 2, 3, true);
  EXPECT_EQ(v.kind, VerdictKind::Inconclusive);
  EXPECT_FALSE(v.reason.empty());
}

TEST(Certifier, WRankTwoUnnormalized) {
  const auto low = certify_rank_gt(w_tensor(), 2, 5, false);
  EXPECT_EQ(low.kind, VerdictKind::Inconclusive);
  const auto v = certify_rank_gt(w_tensor(), 2, 6, false);
  ASSERT_EQ(v.kind, VerdictKind::CertifiedGt);
  EXPECT_EQ(v.certificate_degree(), 6u);
  ASSERT_EQ(v.certificates.size(), 1u);
  EXPECT_TRUE(verify_certificate(v.certificates[0]));
}

TEST(Certifier, RankOneTensorStaysInconclusive) {
  DenseTensor e = DenseTensor::zeros(Shape({2, 2, 2}), Q);
  e.set({0, 0, 0}, Q.one());
  for (bool normalize : {false, true}) {
    const auto v = certify_rank_gt(e, 1, 3, normalize);
    EXPECT_EQ(v.kind, VerdictKind::Inconclusive);
    EXPECT_TRUE(v.certificates.empty());
  }
}

TEST(Certifier, WitnessDisproves) {
  CertifyOptions opt;
  opt.witness = Decomposition{{RankOneTerm{{{Q.one(), Q.zero()}, {Q.one(), Q.zero()}, {Q.one(), Q.zero()}}, {}}}};
  DenseTensor e = DenseTensor::zeros(Shape({2, 2, 2}), Q);
  e.set({0, 0, 0}, Q.one());
  const auto v = certify_rank_gt(e, 1, opt);
  EXPECT_EQ(v.kind, VerdictKind::Disproved);
  try {
    certify_rank_gt(w_tensor(), 1, opt);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::InvalidWitness);
  }
}

TEST(Certifier, InputErrors) {
  EXPECT_THROW(certify_rank_gt(w_tensor(), 0, 2, false), Error);
  EXPECT_THROW(certify_rank_gt(DenseTensor::zeros(Shape({2, 2}), Q), 1, 2, false), Error);
}

TEST(SymCertifier, SymmetricW) {
  const auto fast = certify_srank_gt(sym_w(), 1, 4, false);
  EXPECT_EQ(fast.kind, VerdictKind::CertifiedGt);
  EXPECT_TRUE(fast.justification);

  const auto norm = certify_srank_gt(sym_w(), 2, 5, true);
  ASSERT_EQ(norm.kind, VerdictKind::CertifiedGt) << norm.reason;
  EXPECT_EQ(norm.certificate_degree(), 5u);
  EXPECT_EQ(certify_srank_gt(sym_w(), 2, 4, true).kind, VerdictKind::Inconclusive);

  const auto full = certify_srank_gt(sym_w(), 2, 6, false);
  ASSERT_EQ(full.kind, VerdictKind::CertifiedGt);
  EXPECT_EQ(full.certificate_degree(), 6u);
  EXPECT_EQ(certify_srank_gt(sym_w(), 2, 5, false).kind, VerdictKind::Inconclusive);
  for (const auto& c : norm.certificates) EXPECT_TRUE(verify_certificate(c));
}

TEST(SymCertifier, SmallFieldAndWitness) {
  const auto F = FieldSpec::finite(2);
  try {
    certify_srank_gt(sym_w(F), 2, 2, false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SmallField);
  }
  CertifyOptions opt;
  opt.witness = Decomposition{{RankOneTerm{{{Q.one(), Q.zero()}, {Q.one(), Q.zero()}, {Q.zero(), Q.one()}}, {}}}};
  EXPECT_THROW(certify_srank_gt(sym_w(), 3, opt), Error);
}

TEST(Certifier, OtherFields) {
  const auto QI = FieldSpec::gaussian_rationals();
  const auto v = certify_rank_gt(w_tensor(QI), 2, 4, true);
  EXPECT_EQ(v.kind, VerdictKind::CertifiedGt);
  const auto F = FieldSpec::finite(5);
  const auto g = certify_rank_gt(w_tensor(F), 2, 4, true);
  EXPECT_EQ(g.kind, VerdictKind::CertifiedGt);
  for (const auto& c : g.certificates) EXPECT_TRUE(verify_certificate(c));
}

TEST(Certifier, RationalEntriesUseScaledGenerators) {
  // halving T leaves the verdict unchanged, and certificates must still verify
  const auto half = Scalar(Rational(1, 2));
  const DenseTensor w = w_tensor();
  std::vector<Scalar> e;
  for (const auto& x : w.entries()) e.push_back(x * half);
  const DenseTensor t(Shape({2, 2, 2}), Q, e);
  const auto v = certify_rank_gt(t, 2, 4, true);
  ASSERT_EQ(v.kind, VerdictKind::CertifiedGt);
  for (const auto& c : v.certificates) EXPECT_TRUE(verify_certificate(c));
}

TEST(Certifier, MonomialFilterRestrictsTheBasis) {
  const auto sys = system_of({"1*v0 + -1", "1*v0"}, 1, 1);
  MonomialFilter none = [](std::size_t gen, const Monomial&) { return gen == 0; };
  EXPECT_FALSE(find_certificate(sys, 3, none));
  const auto cs = build_certificate_system(sys, 2, none);
  EXPECT_EQ(cs.cols, 3u);
}

TEST(Complexity, KollarFigures) {
  EXPECT_EQ(kollar_degree_bound(3, 12), 177147);
  EXPECT_EQ(kollar_degree_bound(3, 1), 1);
  EXPECT_EQ(kollar_degree_bound(2, 5), 16);
  EXPECT_TRUE(monomial_bound_holds(3, 4));
  EXPECT_EQ(monomial_bound(2, 1), 3);  // ceil(e)
  for (std::size_t d = 2; d <= 4; ++d)
    for (std::size_t M = 1; M <= 5; ++M) EXPECT_TRUE(monomial_bound_holds(d, M)) << d << " " << M;
}

TEST(Complexity, WRankTwoReport) {
  const auto rep = complexity_estimate(Shape({2, 2, 2}), 2, false);
  EXPECT_EQ(rep.variables, 12u);
  EXPECT_EQ(rep.equations, 8);
  EXPECT_EQ(rep.kollar_bound, power(Integer(3), 11));
  EXPECT_EQ(rep.flop_exponent, 396);
  EXPECT_EQ(rep.reduced_variables, 8u);
  EXPECT_EQ(rep.pattern_multiplier, 16);
  EXPECT_EQ(rep.brute_force_exponent, 12u);
  const auto sym = complexity_estimate(Shape({2, 2, 2}), 2, true);
  EXPECT_EQ(sym.variables, 4u);
  EXPECT_EQ(sym.equations, 4);
  EXPECT_THROW(complexity_estimate(Shape({2, 3}), 1, true), Error);
  EXPECT_THROW(complexity_estimate(Shape({2, 2}), 0, false), Error);
  EXPECT_NE(format_report(rep).find("variables 12"), std::string::npos);
}
