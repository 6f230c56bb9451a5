#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli/cli.hpp"
#include "threshold_lab/family_io.hpp"

namespace {

using nlohmann::json;
using threshold_lab::cli::run;

struct Result {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Result invoke(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = run(args, in, out, err);
  return {code, out.str(), err.str()};
}

const std::string kPairs = R"({"n":3,"sets":[[0,1],[0,2],[1,2]]})";

std::filesystem::path temp_file(const std::string& name, const std::string& contents = "") {
  const auto path = std::filesystem::temp_directory_path() / ("threshold_lab_cli_" + name);
  if (!contents.empty()) std::ofstream(path) << contents;
  return path;
}

std::size_t csv_fields(const std::string& line) {
  std::size_t fields = 1;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) ++fields;
  }
  return fields;
}

}  // namespace

TEST(CliInfo, CliqueFamily) {
  const auto r = invoke({"info", "--gen", "clique:4,3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = r.report()["result"];
  EXPECT_EQ(res["n"], 6);
  EXPECT_EQ(res["members"], 4);
  EXPECT_EQ(res["ell"], 3);
  EXPECT_TRUE(res["antichain"].get<bool>());
  EXPECT_EQ(r.report()["config"]["input"], "gen:clique:4,3");
}

TEST(CliInfo, EmptySetWarns) {
  const auto r = invoke({"info", "-"}, R"({"n":2,"sets":[[]]})");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["result"]["ell"], 0);
  EXPECT_EQ(r.report()["result"]["warnings"].size(), 1u);
}

TEST(CliInfo, EmptyInputIsAnError) {
  EXPECT_EQ(invoke({"info", "-"}, "").code, 2);
  EXPECT_EQ(invoke({"info", "/nonexistent/family.json"}).code, 2);
  EXPECT_EQ(invoke({"info"}).code, 2);
}

TEST(CliCost, Examples) {
  auto r = invoke({"cost", "-", "--q", "0.3"}, R"({"n":1,"sets":[[0]]})");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.report()["result"]["c_q"].get<double>(), 0.3, 1e-15);
  EXPECT_TRUE(r.report()["result"]["small"].get<bool>());

  r = invoke({"cost", "-", "--q", "0.3", "--assert"}, R"({"n":1,"sets":[[]]})");
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(r.report()["result"]["c_q"], 1.0);
  EXPECT_FALSE(r.report()["result"]["small"].get<bool>());

  r = invoke({"cost", "-", "--q", "0.3"}, kPairs);
  EXPECT_NEAR(r.report()["result"]["c_q"].get<double>(), 0.27, 1e-12);
  EXPECT_EQ(r.report()["result"]["cover"].size(), 3u);

  r = invoke({"cost", "-", "--q", "3/10", "--rational"}, kPairs);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["result"]["c_q_exact"], "27/100");
}

TEST(CliCost, ProbabilitySources) {
  const std::string with_q = R"({"n":3,"sets":[[0,1],[0,2],[1,2]],"q":[0.1,0.2,0.3]})";
  auto r = invoke({"cost", "-", "--q", "file"}, with_q);
  ASSERT_EQ(r.code, 0) << r.err;
  // Options: pairs 0.02 + 0.03 + 0.06, or {0} with {1,2}: 0.1 + 0.06.
  EXPECT_NEAR(r.report()["result"]["c_q"].get<double>(), 0.11, 1e-12);
  r = invoke({"cost", "-", "--q", "0.1,0.2,0.3"}, kPairs);
  EXPECT_NEAR(r.report()["result"]["c_q"].get<double>(), 0.11, 1e-12);
  EXPECT_EQ(invoke({"cost", "-", "--q", "0.1,0.2"}, kPairs).code, 2);
  EXPECT_EQ(invoke({"cost", "-", "--q", "file"}, kPairs).code, 2);
  EXPECT_EQ(invoke({"cost", "-", "--q", "1"}, kPairs).code, 2);
  EXPECT_EQ(invoke({"cost", "-", "--q", "abc"}, kPairs).code, 2);
}

TEST(CliThresholds, Examples) {
  auto r = invoke({"pc", "-", "--tol", "1e-6"}, R"({"n":1,"sets":[[0]]})");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(r.report()["result"]["lo"].get<double>(), 0.5);
  EXPECT_GE(r.report()["result"]["hi"].get<double>(), 0.5);

  r = invoke({"qc", "-"}, R"({"n":4,"sets":[[0,1,2,3]]})");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.report()["result"]["lo"].get<double>(), 0.8409, 1e-4);

  EXPECT_EQ(invoke({"pc", "-", "--tol", "0"}, kPairs).code, 2);
  EXPECT_EQ(invoke({"pc", "-"}, R"({"n":2,"sets":[]})").code, 2);
}

TEST(CliKk, RandomThreeBoundedPasses) {
  for (int seed = 1; seed <= 5; ++seed) {
    const auto r = invoke({"kk", "--gen", "random:7,6,3", "--seed", std::to_string(seed), "--assert"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.report()["result"]["pass"].get<bool>());
  }
}

TEST(CliProb, ExactAndMonteCarlo) {
  auto r = invoke({"prob", "-", "--p", "0.5"}, kPairs);
  EXPECT_DOUBLE_EQ(r.report()["result"]["probability"].get<double>(), 0.5);
  r = invoke({"prob", "-", "--p", "0.5", "--mode", "mc", "--trials", "4000", "--seed", "11"}, kPairs);
  const auto res = r.report()["result"];
  EXPECT_LE(res["lo"].get<double>(), 0.5);
  EXPECT_GE(res["hi"].get<double>(), 0.5);
  const auto threaded =
      invoke({"prob", "-", "--p", "0.5", "--mode", "mc", "--trials", "4000", "--seed", "11", "--threads", "3"}, kPairs);
  EXPECT_EQ(threaded.report()["result"]["probability"], res["probability"]);
}

TEST(CliSeeds, GeneratedSeedIsReported) {
  const auto r = invoke({"prob", "-", "--p", "0.5", "--mode", "mc", "--trials", "100"}, kPairs);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("using seed"), std::string::npos);
  const auto seed = r.report()["config"]["seed"].get<std::uint64_t>();
  const auto replay =
      invoke({"prob", "-", "--p", "0.5", "--mode", "mc", "--trials", "100", "--seed", std::to_string(seed)}, kPairs);
  EXPECT_EQ(replay.report()["result"], r.report()["result"]);
}

TEST(CliSimulate, ExamplesAndDeterminism) {
  const std::vector<std::string> base = {"simulate", "-", "--q", "0.45", "--trials", "2000", "--seed", "8", "--costs"};
  const auto r = invoke(base, kPairs);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = r.report()["result"];
  // c_q = 3 * 0.45^2 > 1/2 here.
  EXPECT_GT(res["c_q"].get<double>(), 0.5);
  const double frac = res["member_hit_fraction"].get<double>();
  const double exact = res["member_hit_exact"].get<double>();
  EXPECT_GT(frac, 0.5 - 3 * std::sqrt(0.25 / 2000));
  EXPECT_NEAR(frac, exact, 3 * std::sqrt(0.25 / 2000));
  EXPECT_EQ(res["violations_total"], 0);
  EXPECT_EQ(invoke(base, kPairs).out, r.out);

  auto threaded = base;
  threaded.insert(threaded.end(), {"--threads", "4"});
  EXPECT_EQ(invoke(threaded, kPairs).report()["result"], res);
}

TEST(CliSimulate, TraceOutAndErrors) {
  const auto trace = temp_file("trace.jsonl");
  const auto r = invoke({"simulate", "-", "--q", "0.2", "--trials", "25", "--seed", "1", "--trace-out", trace.string()},
                        kPairs);
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(trace);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    const auto j = json::parse(line);
    EXPECT_EQ(j["trial"], lines);
    EXPECT_EQ(j["rounds"].size(), 2u);
    ++lines;
  }
  EXPECT_EQ(lines, 25);
  EXPECT_EQ(invoke({"simulate", "-", "--q", "0.2", "--trials", "0", "--seed", "1"}, kPairs).code, 2);
  EXPECT_EQ(invoke({"simulate", "-", "--q", "0.2", "--seed", "1", "--schedule", "const:0.5"}, kPairs).code, 2);
}

TEST(CliVerify, Lemmas) {
  auto r = invoke({"verify", "-", "--lemma", "1", "--q", "0.3", "--L", "4", "--m", "2", "--assert"}, kPairs);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.report()["result"]["verdict"].get<bool>());
  EXPECT_NEAR(r.report()["result"]["tail_weight"].get<double>(), 1.0 / 16, 1e-15);

  r = invoke({"verify", "-", "--lemma", "2", "--q", "0.25", "--L", "4"}, R"({"n":1,"sets":[[0]]})");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.report()["result"]["lhs"].get<double>(), 0.25 * std::pow(0.75, 4), 1e-15);
  EXPECT_EQ(invoke({"verify", "-", "--lemma", "2", "--q", "0.25", "--L", "4"}, kPairs).code, 2);
  EXPECT_EQ(invoke({"verify", "-", "--lemma", "3", "--q", "0.25"}, kPairs).code, 2);
}

TEST(CliCertify, ClosedForm) {
  const auto r = invoke({"certify", "const:6", "--closed-form", "--assert"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = r.report()["result"];
  EXPECT_EQ(res["value"], "23/48");
  EXPECT_EQ(res["verdict"], "below-half");
  EXPECT_EQ(res["coefficients"], json::array({1, 3, 1, 35}));
  EXPECT_EQ(invoke({"certify", "const:5", "--closed-form"}).code, 2);
}

TEST(CliCertify, Schedules) {
  auto r = invoke({"certify", "const:4.5", "--assert"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["result"]["verdict"], "below-half");
  EXPECT_EQ(r.report()["result"]["schedule"], "const:9/2");

  r = invoke({"certify", "const:4", "--assert"});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(r.report()["result"]["verdict"], "not-below-half");
  EXPECT_EQ(r.report()["result"]["exceeds_half_at"], 3);

  const auto log = temp_file("proof.log");
  r = invoke({"certify", "standard", "--proof-log", log.string()});
  EXPECT_EQ(r.report()["result"]["verdict"], "below-half");
  std::ifstream in(log);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("verdict below-half"), std::string::npos);
}

TEST(CliOutput, CsvIsFlatProjection) {
  const auto r = invoke({"kk", "-", "--format", "csv"}, kPairs);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_NE(header.find("result.ratio_bound"), std::string::npos);
  EXPECT_NE(header.find("config.tol"), std::string::npos);
  EXPECT_EQ(csv_fields(header), csv_fields(row));
  EXPECT_EQ(csv_fields(header), 20u);
}

TEST(CliOutput, OutputFileAndGen) {
  const auto out = temp_file("family.json");
  ASSERT_EQ(invoke({"gen", "random:8,6,3", "--seed", "5", "-o", out.string()}).code, 0);
  const auto file = threshold_lab::read_family_file(out);
  EXPECT_EQ(file.family.size(), 6u);
  EXPECT_EQ(invoke({"gen", "random:8,6,3", "--seed", "5"}).out, threshold_lab::serialize_family(file.family) + "\n");
  EXPECT_EQ(invoke({"gen", "random:3,8,3", "--seed", "5"}).code, 2);

  const auto report = temp_file("report.json");
  const auto r = invoke({"info", out.string(), "-o", report.string()});
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(report);
  EXPECT_EQ(json::parse(in)["result"]["members"], 6);
}

TEST(CliExitCodes, CapsAndParsing) {
  EXPECT_EQ(invoke({"prob", "--gen", "random:25,4,2", "--seed", "1", "--p", "0.3"}).code, 3);
  EXPECT_EQ(invoke({"prob", "-", "--p", "0.3", "--caps", "exact_ground=2"}, kPairs).code, 3);
  EXPECT_EQ(invoke({"prob", "-", "--p", "0.3", "--caps", "bogus=2"}, kPairs).code, 2);
  setenv("THRESHOLD_LAB_CAPS", "exact_ground=2", 1);
  const auto capped = invoke({"prob", "-", "--p", "0.3"}, kPairs);
  unsetenv("THRESHOLD_LAB_CAPS");
  EXPECT_EQ(capped.code, 3);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"--version"}).out, "0.1.0\n");
}

TEST(CliFragment, RevealedSet) {
  const auto r = invoke({"fragment", "-", "--w", "0", "--m", "1"}, kPairs);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = r.report()["result"];
  EXPECT_EQ(res["minimal_fragments"], json::array({{1}, {2}}));
  EXPECT_EQ(res["large"], json::array({{1}, {2}}));
  EXPECT_EQ(invoke({"fragment", "-", "--w", "7"}, kPairs).code, 2);
  EXPECT_EQ(invoke({"fragment", "-"}, kPairs).code, 2);
}
