#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "builtin_example.hpp"
#include "cli/commands.hpp"
#include "fixtures.hpp"

namespace coat::cli {
namespace {

namespace fs = std::filesystem;
using testing::data_file;
using testing::kDataDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_args(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("coat_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string fig(const char* name) const { return (kDataDir / "clinic" / name).string(); }
  std::string tmp(const char* name) const { return (dir_ / name).string(); }
  void put(const char* name, const std::string& text) const { write_text_file(dir_ / name, text); }

  fs::path dir_;
};

TEST_F(CliTest, AnonymizeWritesGoldenArtifacts) {
  auto r = run_args({"anonymize", "--data", fig("dataset.txt"), "--privacy", fig("privacy.txt"),
                     "--utility", fig("utility.txt"), "--taxonomy", fig("taxonomy.txt"), "--k", "5",
                     "--s", "15", "--out-dir", tmp("out")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(read_text_file(dir_ / "out/anonymized.txt"), data_file("clinic/expected_anonymized.txt"));
  EXPECT_EQ(read_text_file(dir_ / "out/map.tsv"), data_file("clinic/expected_map.tsv"));
  EXPECT_EQ(read_text_file(dir_ / "out/trace.txt"), data_file("clinic/expected_trace.txt"));
  std::string metrics = read_text_file(dir_ / "out/metrics.txt");
  EXPECT_NE(metrics.find("suppressed_percent=12.5\n"), std::string::npos);
  EXPECT_NE(metrics.find("weights=lca\n"), std::string::npos);
  EXPECT_NE(metrics.find("\nul="), std::string::npos);
  EXPECT_NE(metrics.find("\navg_re="), std::string::npos);
}

TEST_F(CliTest, PgenPolicyIsWrittenAsSideArtifact) {
  auto r = run_args({"anonymize", "--data", (kDataDir / "pgen_mini/dataset.txt").string(),
                     "--privacy", "pgen", "--k", "2", "--s", "100", "--out-dir", tmp("out")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(read_text_file(dir_ / "out/privacy.txt"), data_file("pgen_mini/expected_privacy.txt"));
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, MissingUtilityUsesOneBlock) {
  auto r = run_args({"anonymize", "--data", fig("dataset.txt"), "--privacy", fig("privacy.txt"),
                     "--k", "5", "--s", "15", "--out-metrics", tmp("m.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("warning: no --utility"), std::string::npos);
  EXPECT_NE(read_text_file(dir_ / "m.txt").find("utility_blocks=1\n"), std::string::npos);
}

TEST_F(CliTest, ErrorsMapToDistinctCodes) {
  put("bad_privacy.txt", "a zz\n");
  auto parse = run_args({"anonymize", "--data", fig("dataset.txt"), "--privacy", tmp("bad_privacy.txt"),
                         "--k", "5"});
  EXPECT_EQ(parse.code, kExitParse);
  EXPECT_NE(parse.err.find("reason=invalid-item"), std::string::npos);

  auto budget = run_args({"anonymize", "--data", fig("dataset.txt"), "--privacy", fig("privacy.txt"),
                          "--utility", fig("utility.txt"), "--k", "5", "--s", "5"});
  EXPECT_EQ(budget.code, kExitBudget);
  EXPECT_NE(budget.err.find("reason=utility-budget-violated group=d suppressed_percent=12.5"),
            std::string::npos);

  auto big = run_args({"km-policy", "--data", fig("dataset.txt"), "--m", "4", "--cap", "10"});
  EXPECT_EQ(big.code, kExitPolicyTooLarge);
  EXPECT_NE(big.err.find("70"), std::string::npos);

  put("other.txt", "x y\n");
  auto mismatch = run_args({"evaluate", "--data", tmp("other.txt"), "--map", fig("expected_map.tsv")});
  EXPECT_EQ(mismatch.code, kExitVocabularyMismatch);
  put("short_map.tsv", "0\ta b\n");
  auto partial = run_args({"evaluate", "--data", fig("dataset.txt"), "--map", tmp("short_map.tsv")});
  EXPECT_EQ(partial.code, kExitVocabularyMismatch);

  auto missing = run_args({"pgen", "--data", tmp("nope.txt"), "--k", "2"});
  EXPECT_EQ(missing.code, kExitParse);
  EXPECT_NE(missing.err.find("reason=io-error"), std::string::npos);

  EXPECT_EQ(run_args({"anonymize", "--data", fig("dataset.txt")}).code, kExitUsage);
  EXPECT_EQ(run_args({}).code, kExitUsage);
  EXPECT_EQ(run_args({"--help"}).code, kExitOk);
}

TEST(ExitCodes, Distinct) {
  EXPECT_EQ(exit_code_for(ErrorCode::kParse), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::kBudgetViolated), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::kPolicyTooLarge), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::kInvalidMap), 5);
  EXPECT_EQ(exit_code_for(ErrorCode::kEmptyWorkload), 7);
}

TEST_F(CliTest, PgenAndKmToStdoutAndFile) {
  auto p = run_args({"pgen", "--data", (kDataDir / "pgen_mini/dataset.txt").string(), "--k", "2"});
  EXPECT_EQ(p.out, "a c f\nb h\n");
  auto k = run_args({"km-policy", "--data", fig("dataset.txt"), "--m", "5", "--out", tmp("km.txt")});
  ASSERT_EQ(k.code, kExitOk);
  std::string text = read_text_file(dir_ / "km.txt");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 56);
}

TEST_F(CliTest, EvaluateReportsPerQueryErrors) {
  put("wa.txt", "# seed=0 q=1 n=1\na\n");
  auto a = run_args({"evaluate", "--data", fig("dataset.txt"), "--map", fig("expected_map.tsv"),
                     "--workload", tmp("wa.txt")});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_NE(a.out.find("avg_re=0.22222222222222221\n"), std::string::npos);
  EXPECT_NE(a.out.find("query\t0\ta\ta=6\te=4.666666666666667\tre=0.22222222222222221\n"),
            std::string::npos);

  put("wc.txt", "c\n");
  auto c = run_args({"evaluate", "--data", fig("dataset.txt"), "--map", fig("expected_map.tsv"),
                     "--workload", tmp("wc.txt")});
  EXPECT_NE(c.out.find("avg_re=0\n"), std::string::npos);

  put("identity.tsv", "0\ta\n1\tb\n2\tc\n3\td\n4\te\n5\tf\n6\tg\n7\th\n");
  auto id = run_args({"evaluate", "--data", fig("dataset.txt"), "--map", tmp("identity.tsv"), "--q",
                      "3", "--n", "50", "--out-workload", tmp("w.txt")});
  EXPECT_NE(id.out.find("avg_re=0\n"), std::string::npos);
  EXPECT_EQ(read_text_file(dir_ / "w.txt").rfind("# seed=1 q=3 n=50\n", 0), 0u);
}

TEST(Selftest, BuiltinPasses) {
  auto r = run_args({"selftest"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(std::string(builtin::kDataset), data_file("clinic/dataset.txt"));
  EXPECT_EQ(std::string(builtin::kExpectedAnonymized), data_file("clinic/expected_anonymized.txt"));
  EXPECT_EQ(std::string(builtin::kExpectedTrace), data_file("clinic/expected_trace.txt"));
}

const SelftestCheck* find_check(const std::vector<SelftestCheck>& checks, const std::string& prefix) {
  for (const auto& c : checks) {
    if (c.name.rfind(prefix, 0) == 0) return &c;
  }
  return nullptr;
}

TEST(Selftest, TamperedWeightFailsUlCheck) {
  auto in = SelftestInputs::builtin();
  // Hang a and b directly under a two-leaf node: weight 2/8, UL drops.
  in.taxonomy = "root\n  (a,b)\n    a\n    b\n  c\n  (d,e,f,g,h)\n    d\n    e\n    f\n    g\n    h\n";
  auto checks = run_selftest(in);
  ASSERT_NE(find_check(checks, "weight of (a,b)"), nullptr);
  EXPECT_FALSE(find_check(checks, "weight of (a,b)")->passed);

  auto expect_half = SelftestInputs::builtin();
  expect_half.expected_weight_ab = 0.5;
  expect_half.expected_ul_ab = (3.0 / 255.0) * 0.5 * (7.0 / 8.0) * 2;
  auto half = run_selftest(expect_half);
  EXPECT_FALSE(find_check(half, "weight of (a,b)")->passed);
  EXPECT_FALSE(find_check(half, "UL of (a,b)")->passed);
}

TEST(Selftest, TamperedTieBreakFailsTrace) {
  // Renaming g to x flips the g/h tie: h now sorts first and merges with x.
  auto in = SelftestInputs::builtin();
  auto rename = [](std::string s) {
    for (auto& ch : s) {
      if (ch == 'g') ch = 'x';
    }
    return s;
  };
  in.dataset = rename(in.dataset);
  in.privacy = rename(in.privacy);
  in.utility = rename(in.utility);
  in.taxonomy = rename(in.taxonomy);
  in.expected_trace = rename(in.expected_trace);
  auto checks = run_selftest(in);
  const auto* trace = find_check(checks, "golden trace");
  ASSERT_NE(trace, nullptr);
  EXPECT_FALSE(trace->passed);
  EXPECT_NE(trace->detail.find("MERGE h x"), std::string::npos) << trace->detail;
}

}  // namespace
}  // namespace coat::cli
