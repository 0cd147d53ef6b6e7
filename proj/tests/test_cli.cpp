#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pdlkit/model_io.hpp"
#include "pdlkit/parser.hpp"
#include "pdlkit/semantics.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(PDLKIT_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pdlkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, TranslateReportsVariableFreeOutput) {
  Outcome r = run("translate --dialect pdl --format lines '[a1]p1'");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["variables"], 0);
  EXPECT_EQ(j["n"], 1);
  EXPECT_EQ(j["l"], 1);
  EXPECT_EQ(j["b"], 1);
  EXPECT_EQ(j["input_size"], 3);
  pdlkit::Formula out = pdlkit::parse(j["result"].get<std::string>(), pdlkit::Dialect::PDL);
  EXPECT_TRUE(pdlkit::metrics(out).variables.empty());
  EXPECT_EQ(j["output_size"], out.size());
}

TEST_F(Cli, TranslateEmitHatShowsNestedChains) {
  Outcome r = run("translate --dialect prspdl --emit-hat '[a1][a2]false'");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("theta:     p1 & [a1](<a2>p1 -> p1)"), std::string::npos) << r.out;
}

TEST_F(Cli, TranslateRejectsEmptyInput) {
  EXPECT_EQ(run("translate --dialect pdl ''").code, 2);
  EXPECT_EQ(run("translate --dialect pdl").code, 2);
  EXPECT_EQ(run("translate '[a1]p1'").code, 2);
  EXPECT_EQ(run("translate --dialect pdl '[a1 p1'").code, 2);
  EXPECT_EQ(run("translate --dialect pdl '[a1 & a2]p1'").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(Cli, TranslateReadsFormulaFiles) {
  {
    std::FILE* f = std::fopen(path("in.txt").c_str(), "w");
    std::fputs("# two formulas\n[a1]p1\n\np1 -> <a2>p2\n", f);
    std::fclose(f);
  }
  Outcome r = run("translate --dialect pdl --format lines --input " + path("in.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
}

TEST_F(Cli, CheckOnGadgetModel) {
  Outcome g = run("gadget --dialect pdl --m 1 --b 1 --format lines --output " + path("m1.json"));
  ASSERT_EQ(g.code, 0);
  const std::string a1 = nlohmann::json::parse(g.out)["A"].get<std::string>();
  EXPECT_EQ(pdlkit::parse(a1, pdlkit::Dialect::PDL),
            pdlkit::parse("<a1>[a1]false & (~<a1><a1>[a1]false & <a1>(<a1>true & [a1]<a1>true))", pdlkit::Dialect::PDL));
  Outcome at0 = run("check --dialect pdl --model " + path("m1.json") + " --state 0 '" + a1 + "'");
  EXPECT_EQ(at0.code, 0);
  EXPECT_EQ(at0.out, "true\n");
  Outcome at1 = run("check --dialect pdl --model " + path("m1.json") + " --state 1 '" + a1 + "'");
  EXPECT_EQ(at1.out, "false\n");
  Outcome all = run("check --dialect pdl --model " + path("m1.json") + " false");
  EXPECT_EQ(all.out, "0: false\n1: false\n2: false\n");
}

TEST_F(Cli, CheckErrors) {
  run("gadget --dialect pdl --m 1 --output " + path("m1.json"));
  EXPECT_EQ(run("check --dialect pdl --model " + path("m1.json") + " --state 3 p1").code, 2);
  EXPECT_EQ(run("check --dialect pdl --model " + path("missing.json") + " p1").code, 2);
  EXPECT_EQ(run("check --dialect prspdl --model " + path("m1.json") + " '[r1]p1'").code, 2);
}

TEST_F(Cli, SatVerdicts) {
  Outcome u = run("sat --dialect pdl 'p1 & ~p1'");
  EXPECT_EQ(u.code, 0);
  EXPECT_EQ(u.out, "unsatisfiable\n");

  Outcome s = run("sat --dialect ipdl --bounded 3 --emit-witness " + path("w.json") + " --format lines '<a1 & a2>true'");
  ASSERT_EQ(s.code, 0);
  auto j = nlohmann::json::parse(s.out);
  EXPECT_EQ(j["verdict"], "satisfiable");
  const std::size_t root = j["witness_root"].get<std::size_t>();
  Outcome c = run("check --dialect ipdl --model " + path("w.json") + " --state " + std::to_string(root) + " '<a1 & a2>true'");
  EXPECT_EQ(c.out, "true\n");

  EXPECT_EQ(run("sat --dialect prspdl --complete '[r1]p1'").code, 2);
  EXPECT_EQ(run("sat --dialect ipdl --complete 'p1'").code, 2);
  Outcome unknown = run("sat --dialect prspdl --bounded 2 'p1 & ~p1'");
  EXPECT_EQ(unknown.code, 0);
  EXPECT_EQ(unknown.out, "unknown-at-bound (searched up to 2 states)\n");
}

TEST_F(Cli, EquisatFuzzIsDeterministic) {
  const std::string args = "equisat-fuzz --dialect pdl --count 40 --seed 9 --replay-dir " + path("replays");
  Outcome first = run(args);
  Outcome second = run(args);
  EXPECT_EQ(first.code, 0) << first.out;
  EXPECT_EQ(first.out, second.out);
  EXPECT_NE(first.out.find("failed:      0"), std::string::npos) << first.out;
  EXPECT_FALSE(fs::exists(path("replays")) && !fs::is_empty(path("replays")));
}

TEST_F(Cli, EquisatFuzzWitnessMode) {
  for (const char* d : {"pdl", "ipdl", "prspdl"}) {
    Outcome r = run(std::string("equisat-fuzz --dialect ") + d + " --mode witness --count 15 --seed 3 --format lines");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["failed"], 0);
    EXPECT_EQ(j["passed"].get<int>() + j["skipped"].get<int>(), 15);
  }
  EXPECT_EQ(run("equisat-fuzz --dialect ipdl --mode complete --count 5").code, 2);
}

TEST_F(Cli, EquisatFuzzFlagsCeilingViolation) {
  Outcome r = run("equisat-fuzz --dialect pdl --count 5 --c-ceiling 0.5 --format lines");
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["c_measured"].get<double>(), 0.5);
}

TEST_F(Cli, GadgetPrintsModelAndFormulas) {
  Outcome r = run("gadget --dialect pdl --m 2 --b 3");
  ASSERT_EQ(r.code, 0);
  const auto brace = r.out.find("\n}\n");
  ASSERT_NE(brace, std::string::npos);
  pdlkit::KripkeModel m = pdlkit::load_model_string(r.out.substr(0, brace + 3));
  EXPECT_EQ(m.num_states(), 4u);
  EXPECT_EQ(m.relation(3).num_pairs(), 5u);
  EXPECT_NE(r.out.find("B2: <a3>"), std::string::npos);
  EXPECT_EQ(run("gadget --dialect pdl --m 0").code, 2);
}
