#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "trc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = trc::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(TRC_SAMPLES_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("trc_test_" + std::to_string(::getpid()) + "_" + name)).string();
}

bool contains(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, InfoOnW) {
  const auto r = run({"info", sample("w.tensor")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "field Q\n"));
  EXPECT_TRUE(contains(r.out, "shape 2 2 2\n"));
  EXPECT_TRUE(contains(r.out, "unfolding-ranks 2 2 2\n"));
  EXPECT_TRUE(contains(r.out, "rank-bounds 2..4\n"));
  EXPECT_TRUE(contains(r.out, "symmetric yes\n"));
}

TEST(Cli, InfoOnSymmetricFile) {
  const auto r = run({"info", sample("w.symtensor")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "kind symtensor\n"));
  EXPECT_TRUE(contains(r.out, "n 2 d 3\n"));
}

TEST(Cli, CertifyFastPath) {
  const auto r = run({"certify", sample("w.tensor"), "--rank", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "verdict CERTIFIED_GT\n"));
  EXPECT_TRUE(contains(r.out, "justification unfolding-rank mode 0 rank 2\n"));
}

TEST(Cli, CertifyInconclusiveExitCode) {
  const auto r = run({"certify", sample("w.tensor"), "--rank", "2", "--max-degree", "2", "--normalize"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.out, "verdict INCONCLUSIVE\n"));
  EXPECT_TRUE(contains(r.out, "max-degree 2\n"));
}

TEST(Cli, CertifyBundleRoundTrip) {
  const auto bundle = temp_path("w.bundle");
  const auto r = run({"certify", sample("w.tensor"), "-r", "2", "-D", "4", "--normalize", "-o", bundle});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "certificates 20\n"));
  EXPECT_TRUE(contains(r.out, "certificate-degree 4\n"));
  const auto v = run({"verify-cert", bundle, "--tensor", sample("w.tensor")});
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_TRUE(contains(v.out, "VALID\n"));

  // the same bundle does not cover a different tensor
  const auto other = run({"verify-cert", bundle, "--tensor", sample("identity2.tensor")});
  EXPECT_EQ(other.code, 3);

  // a tampered cofactor is caught
  std::string text = tensorrank::read_file(bundle);
  const auto pos = text.find("\ng 0\n");
  ASSERT_NE(pos, std::string::npos);
  const auto line = text.find('\n', pos + 5);
  text.insert(line, " + 1*v0");
  const auto bad = temp_path("bad.bundle");
  tensorrank::write_file(bad, text);
  const auto t = run({"verify-cert", bad});
  EXPECT_EQ(t.code, 3);
  EXPECT_TRUE(contains(t.out, "INVALID\n"));
  std::filesystem::remove(bundle);
  std::filesystem::remove(bad);
}

TEST(Cli, CertifyWithWitness) {
  const auto r = run({"certify", sample("w.tensor"), "-r", "3", "--witness", sample("w3.decomp")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "verdict DISPROVED\n"));
  const auto bad = run({"certify", sample("identity2.tensor"), "-r", "3", "--witness", sample("w3.decomp")});
  EXPECT_EQ(bad.code, 1);
}

TEST(Cli, CertifySymmetric) {
  const auto r = run({"certify-sym", sample("w.symtensor"), "-r", "2", "-D", "5", "--normalize"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "srank > 2: proven\n"));
}

TEST(Cli, RankAndSearchOverGf2) {
  const auto r = run({"rank", sample("w_gf2.tensor")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "rank 3\n"));
  const auto none = run({"search", sample("w_gf2.tensor"), "-r", "2"});
  EXPECT_EQ(none.code, 0);
  EXPECT_TRUE(contains(none.out, "result none\n"));
  const auto found = run({"search", sample("w_gf2.tensor"), "-r", "3"});
  EXPECT_TRUE(contains(found.out, "result found 3 terms\n"));
  const auto budget = run({"rank", sample("w_gf2.tensor"), "--budget", "5"});
  EXPECT_EQ(budget.code, 2);
  EXPECT_TRUE(contains(budget.err, "BudgetExceeded"));
}

TEST(Cli, RankNeedsFiniteField) {
  const auto r = run({"rank", sample("w.tensor")});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "error: NotFinite"));
}

TEST(Cli, SearchOutputVerifies) {
  const auto dec = temp_path("w_gf2.decomp");
  const auto r = run({"search", sample("w_gf2.tensor"), "-r", "3", "-o", dec});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto v = run({"verify-decomp", sample("w_gf2.tensor"), dec});
  EXPECT_EQ(v.code, 0);
  EXPECT_TRUE(contains(v.out, "rank <= 3\n"));
  std::filesystem::remove(dec);
}

TEST(Cli, VerifyDecomposition) {
  const auto ok = run({"verify-decomp", sample("matmul222.tensor"), sample("strassen.decomp")});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_TRUE(contains(ok.out, "rank <= 7\n"));
  const auto bad = run({"verify-decomp", sample("w.tensor"), sample("strassen.decomp")});
  EXPECT_NE(bad.code, 0);
  const auto good = run({"verify-decomp", sample("w.tensor"), sample("w3.decomp")});
  EXPECT_EQ(good.code, 0);
}

TEST(Cli, Estimate) {
  const auto r = run({"estimate", "--shape", "2", "2", "2", "-r", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "variables 12\n"));
  EXPECT_TRUE(contains(r.out, "kollar-degree-bound 177147\n"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"certify", sample("w.tensor")}).code, 1);
  EXPECT_EQ(run({"certify", sample("w.tensor"), "-r", "0"}).code, 1);
  const auto missing = run({"info", "/nonexistent/file.tensor"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_TRUE(contains(missing.err, "error: "));
  EXPECT_EQ(run({"frobnicate"}).code, 1);
}

TEST(Cli, ParseErrorReported) {
  const auto path = temp_path("broken.tensor");
  tensorrank::write_file(path, "tensor\nfield Q\nshape 2 2\nentries\n1 2 x 4\n");
  const auto r = run({"info", path});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "error: ParseError"));
  std::filesystem::remove(path);
}

TEST(Cli, CompressWritesCore) {
  const auto r = run({"compress", sample("identity2.tensor")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto core = tensorrank::parse_tensor(r.out);
  EXPECT_EQ(std::get<tensorrank::DenseTensor>(core).shape().dims(), (std::vector<std::size_t>{2, 2}));
}
