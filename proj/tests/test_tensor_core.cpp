#include <gtest/gtest.h>

#include <random>

#include "tensorrank/ff_search.hpp"
#include "tensorrank/io.hpp"
#include "tensorrank/tensor.hpp"

using namespace tensorrank;

namespace {

const FieldSpec Q = FieldSpec::rationals();

DenseTensor int_tensor(const std::vector<std::size_t>& dims, const std::vector<long>& entries, const FieldSpec& f = Q) {
  std::vector<Scalar> v;
  for (auto x : entries) v.push_back(f.from_integer(x));
  return DenseTensor(Shape(dims), f, v);
}

DenseTensor w_tensor(const FieldSpec& f = Q) { return int_tensor({2, 2, 2}, {0, 1, 1, 0, 1, 0, 0, 0}, f); }

DenseTensor unit_tensor(const std::vector<std::size_t>& dims, const FieldSpec& f = Q) {
  DenseTensor t = DenseTensor::zeros(Shape(dims), f);
  t.set(std::vector<std::size_t>(dims.size(), 0), f.one());
  return t;
}

DenseTensor random_tensor(const std::vector<std::size_t>& dims, std::mt19937& rng, long bound = 3) {
  std::uniform_int_distribution<long> d(-bound, bound);
  std::vector<long> e(Shape(dims).num_entries());
  for (auto& x : e) x = d(rng);
  return int_tensor(dims, e);
}

std::vector<Scalar> ints(const std::vector<long>& v, const FieldSpec& f = Q) {
  std::vector<Scalar> out;
  for (auto x : v) out.push_back(f.from_integer(x));
  return out;
}

}  // namespace

TEST(Shape, DerivedQuantities) {
  const Shape s({2, 3, 4});
  EXPECT_EQ(s.num_entries(), 24u);
  EXPECT_EQ(s.dim_sum(), 9u);
  // colex: first index fastest
  EXPECT_EQ(s.linear_index({1, 0, 0}), 1u);
  EXPECT_EQ(s.linear_index({0, 1, 0}), 2u);
  EXPECT_EQ(s.linear_index({0, 0, 1}), 6u);
  for (std::size_t k = 0; k < 24; ++k) EXPECT_EQ(s.linear_index(s.multi_index(k)), k);
  EXPECT_THROW(Shape({3}), Error);
  EXPECT_THROW(Shape({2, 0}), Error);
}

TEST(Unfold, RankOneUnitTensor) {
  const auto m = unfold(unit_tensor({2, 2, 2}), 0);
  ASSERT_EQ(m.rows(), 2u);
  ASSERT_EQ(m.cols(), 4u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(m(i, j), (i == 0 && j == 0) ? Q.one() : Q.zero());
}

TEST(Unfold, RefoldRoundTrip) {
  std::mt19937 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto T = random_tensor({2, 3, 2, 2}, rng);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(refold(unfold(T, j), T.shape(), j, Q), T);
  }
}

TEST(Unfold, ModeOutOfRange) {
  try {
    unfold(w_tensor(), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ModeOutOfRange);
  }
}

TEST(UnfoldingRank, Examples) {
  EXPECT_EQ(unfolding_rank(DenseTensor::zeros(Shape({2, 2, 2}), Q), 0), 0u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(unfolding_rank(unit_tensor({2, 2, 2}), j), 1u);
  // W: each unfolding has a nonzero 2x2 minor, so rank 2
  for (std::size_t j = 0; j < 3; ++j) {
    const auto m = unfold(w_tensor(), j);
    bool minor = false;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) minor = minor || !(m(0, a) * m(1, b) - m(0, b) * m(1, a)).is_zero();
    EXPECT_TRUE(minor);
    EXPECT_EQ(unfolding_rank(w_tensor(), j), 2u);
  }
}

TEST(UnfoldingRank, BoundedByMatrixShape) {
  std::mt19937 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto T = random_tensor({2, 3, 4}, rng);
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_LE(unfolding_rank(T, j), std::min(T.shape().dim(j), T.shape().num_entries() / T.shape().dim(j)));
  }
}

TEST(Compress, RankOneCubeToUnitCore) {
  const auto T = eval_decomposition(Decomposition{{RankOneTerm{{ints({1, 2, 0}), ints({0, 1, -1}), ints({3, 0, 1})}, {}}}},
                                    Shape({3, 3, 3}), Q);
  const auto c = compress(T);
  EXPECT_EQ(c.core.shape(), Shape({1, 1, 1}));
  EXPECT_EQ(expand_core(c.core, c.bases), T);
}

TEST(Compress, PaddedWTensor) {
  DenseTensor T = DenseTensor::zeros(Shape({3, 3, 3}), Q);
  T.set({0, 0, 1}, Q.one());
  T.set({0, 1, 0}, Q.one());
  T.set({1, 0, 0}, Q.one());
  const auto c = compress(T);
  EXPECT_EQ(c.core.shape(), Shape({2, 2, 2}));
  EXPECT_EQ(unfolding_ranks(c.core), (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_EQ(expand_core(c.core, c.bases), T);
}

TEST(Compress, FullRankTensorKeepsShape) {
  const auto c = compress(w_tensor());
  EXPECT_EQ(c.core.shape(), Shape({2, 2, 2}));
  EXPECT_EQ(expand_core(c.core, c.bases), w_tensor());
}

TEST(Compress, RoundTripAndInvertibleBases) {
  std::mt19937 rng(3);
  for (int t = 0; t < 20; ++t) {
    // low multilinear rank: sum of two rank-one terms in a 3x4x3 frame
    std::uniform_int_distribution<long> d(-2, 2);
    Decomposition dec;
    for (int k = 0; k < 2; ++k) {
      RankOneTerm term;
      for (std::size_t n : {3u, 4u, 3u}) {
        std::vector<long> v(n);
        for (auto& x : v) x = d(rng);
        term.factors.push_back(ints(v));
      }
      dec.terms.push_back(term);
    }
    const auto T = eval_decomposition(dec, Shape({3, 4, 3}), Q);
    if (T.is_zero()) continue;
    const auto c = compress(T);
    EXPECT_EQ(c.core.shape().dims(), unfolding_ranks(T));
    EXPECT_EQ(unfolding_ranks(c.core), c.core.shape().dims());
    for (const auto& B : c.bases) EXPECT_EQ(gauss_rank(B), B.rows());  // square and invertible
    EXPECT_EQ(expand_core(c.core, c.bases), T);
  }
  EXPECT_THROW(compress(DenseTensor::zeros(Shape({2, 2}), Q)), Error);
}

TEST(Compress, PreservesRankOverGf2) {
  // every 2x2x2 tensor over GF(2) placed in the corner of a 3x3x3 frame
  const auto F = FieldSpec::finite(2);
  for (unsigned bits = 1; bits < 256; ++bits) {
    DenseTensor small = DenseTensor::zeros(Shape({2, 2, 2}), F);
    DenseTensor big = DenseTensor::zeros(Shape({3, 3, 3}), F);
    for (std::size_t k = 0; k < 8; ++k)
      if (bits >> k & 1) {
        const auto idx = small.shape().multi_index(k);
        small.set(idx, F.one());
        big.set(idx, F.one());
      }
    const auto core = compress(big).core;
    EXPECT_EQ(rank_over_Fq(core).rank, rank_over_Fq(small).rank) << bits;
  }
}

TEST(RankBounds, Examples) {
  const auto b = rank_bounds(w_tensor());
  EXPECT_EQ(b.lower, 2u);
  EXPECT_EQ(b.upper, 4u);
  const auto one = rank_bounds(unit_tensor({1, 1, 1}));
  EXPECT_EQ(one.lower, 1u);
  EXPECT_EQ(one.upper, 1u);
  // a compressed 2x2x3 tensor: slices e_a (x) e_b (x) e_{2a+b} for (a,b) != (1,1), plus a rank-one fourth slice
  DenseTensor t = DenseTensor::zeros(Shape({2, 2, 3}), Q);
  t.set({0, 0, 0}, Q.one());
  t.set({0, 1, 1}, Q.one());
  t.set({1, 0, 2}, Q.one());
  t.set({1, 1, 0}, Q.one());
  ASSERT_EQ(unfolding_ranks(t), (std::vector<std::size_t>{2, 2, 3}));
  const auto c = rank_bounds(t);
  EXPECT_EQ(c.lower, 3u);
  EXPECT_EQ(c.upper, 4u);
  try {
    rank_bounds(DenseTensor::zeros(Shape({2, 2}), Q));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroTensor);
  }
}

TEST(Symmetric, Detection) {
  EXPECT_TRUE(is_symmetric(w_tensor()));
  DenseTensor t = DenseTensor::zeros(Shape({2, 2, 2}), Q);
  t.set({0, 0, 1}, Q.one());
  EXPECT_FALSE(is_symmetric(t));
  try {
    is_symmetric(DenseTensor::zeros(Shape({2, 3}), Q));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonCubical);
  }
}

TEST(Symmetric, StorageCountMatchesDimension) {
  for (std::size_t n = 1; n <= 8; ++n)
    for (std::size_t d = 1; d <= 8; ++d) EXPECT_EQ(SymTensor::exponents(n, d).size(), binomial(n + d - 1, d).get_ui());
}

TEST(Symmetric, PackExpandExamples) {
  const auto z = SymTensor::zeros(2, 3, Q);
  EXPECT_TRUE(sym_expand(z).is_zero());
  EXPECT_EQ(sym_pack(sym_expand(z)), z);
  SymTensor e = SymTensor::zeros(2, 3, Q);
  auto coeffs = e.coeffs();
  coeffs[e.index_of({3, 0})] = Q.one();
  e = SymTensor(2, 3, Q, coeffs);
  EXPECT_EQ(sym_expand(e), unit_tensor({2, 2, 2}));
  EXPECT_THROW(sym_pack(int_tensor({2, 2}, {0, 1, 0, 0})), Error);
}

TEST(Symmetric, RoundTripOnRandomTensors) {
  std::mt19937 rng(4);
  std::uniform_int_distribution<long> d(-5, 5);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + t % 3, deg = 2 + t % 3;
    std::vector<Scalar> c;
    for (std::size_t k = 0; k < SymTensor::exponents(n, deg).size(); ++k) c.push_back(Q.from_integer(d(rng)));
    const SymTensor s(n, deg, Q, c);
    const auto dense = sym_expand(s);
    EXPECT_TRUE(is_symmetric(dense));
    EXPECT_EQ(sym_pack(dense), s);
  }
}

TEST(Symmetric, PolynomialCorrespondence) {
  // f = x1^2 + 2 x1 x2 -> [[1,1],[1,0]]
  Poly f(2, Q);
  f.add_term({2, 0}, Q.one());
  f.add_term({1, 1}, Q.from_integer(2));
  const auto s = sym_of_poly(f, 2, 2);
  EXPECT_EQ(sym_expand(s), int_tensor({2, 2}, {1, 1, 1, 0}));
  EXPECT_EQ(poly_of_sym(s), f);
  Poly cube(2, Q);
  cube.add_term({3, 0}, Q.one());
  EXPECT_EQ(sym_expand(sym_of_poly(cube, 2, 3)), unit_tensor({2, 2, 2}));
}

TEST(Symmetric, SmallCharacteristicRefused) {
  const auto F = FieldSpec::finite(3);
  Poly f(2, F);
  f.add_term({2, 1}, F.one());
  try {
    sym_of_poly(f, 2, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SmallCharacteristic);
  }
}

TEST(Decomposition, EvaluationExamples) {
  EXPECT_TRUE(eval_decomposition({}, Shape({2, 2, 2}), Q).is_zero());
  const Decomposition one{{RankOneTerm{{ints({1, 0}), ints({1, 0}), ints({1, 0})}, {}}}};
  EXPECT_EQ(eval_decomposition(one, Shape({2, 2, 2}), Q), unit_tensor({2, 2, 2}));
  Decomposition scaled = one;
  scaled.terms[0].scale = Q.from_integer(5);
  EXPECT_EQ(eval_decomposition(scaled, Shape({2, 2, 2}), Q).at(0), Q.from_integer(5));
  const Decomposition bad{{RankOneTerm{{ints({1, 0}), ints({1, 0})}, {}}}};
  EXPECT_THROW(eval_decomposition(bad, Shape({2, 2, 2}), Q), Error);
}

TEST(Decomposition, StrassenReproducesMatrixMultiplication) {
  const auto T = std::get<DenseTensor>(parse_tensor(read_file(std::string(TRC_SAMPLES_DIR) + "/matmul222.tensor")));
  // independent construction: entry (A_ij, B_jk, C_ik) = 1 with pair (p,q) -> 2p+q
  DenseTensor M = DenseTensor::zeros(Shape({4, 4, 4}), Q);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) M.set({2 * i + j, 2 * j + k, 2 * i + k}, Q.one());
  EXPECT_EQ(T, M);
  const auto dec = parse_decomposition(read_file(std::string(TRC_SAMPLES_DIR) + "/strassen.decomp"), Q);
  EXPECT_EQ(dec.terms.size(), 7u);
  EXPECT_EQ(eval_decomposition(dec, M.shape(), Q), M);
}

TEST(Decomposition, RankDominatesUnfoldingRanks) {
  std::mt19937 rng(6);
  std::uniform_int_distribution<long> d(-2, 2);
  for (int t = 0; t < 30; ++t) {
    const std::size_t r = 1 + t % 4;
    Decomposition dec;
    for (std::size_t k = 0; k < r; ++k) {
      RankOneTerm term;
      for (std::size_t n : {3u, 3u, 2u}) {
        std::vector<long> v(n);
        for (auto& x : v) x = d(rng);
        term.factors.push_back(ints(v));
      }
      dec.terms.push_back(term);
    }
    const auto ranks = unfolding_ranks(eval_decomposition(dec, Shape({3, 3, 2}), Q));
    for (auto rj : ranks) EXPECT_LE(rj, r);
  }
}

TEST(TensorText, RoundTrip) {
  std::mt19937 rng(7);
  const auto T = random_tensor({2, 3, 2}, rng);
  EXPECT_EQ(std::get<DenseTensor>(parse_tensor(format_tensor(T))), T);
  const auto F = FieldSpec::finite(3, 2);
  std::vector<Scalar> c;
  for (std::uint32_t k = 0; k < 4; ++k) c.push_back(F.from_code(k * 2));
  const SymTensor s(2, 3, F, c);
  EXPECT_EQ(std::get<SymTensor>(parse_tensor(format_tensor(s))), s);
  EXPECT_THROW(parse_tensor("tensor\nfield Q\nshape 2 2\nentries\n1 2 3\n"), Error);
  EXPECT_THROW(parse_tensor("matrix\nfield Q\n"), Error);
  EXPECT_THROW(parse_tensor("tensor\nfield R\nshape 2 2\nentries\n1 2 3 4\n"), Error);
}
