#include "msrmp/cli.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

// Ordered so that assignment objects keep the model's control order.
using json = nlohmann::ordered_json;
using testing_support::fixture;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = msrmp::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("msrmp-test-" + std::to_string(::getpid()) + "-" + name);
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST(Cli, ValidateRunningExample) {
  const auto r = run({"validate", fixture("running-example.json")});
  ASSERT_EQ(r.code, msrmp::exit_ok) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["valid"].get<bool>());
  EXPECT_EQ(doc["controls"], 25);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, msrmp::exit_usage_error);
  EXPECT_EQ(run({"frobnicate"}).code, msrmp::exit_usage_error);
  EXPECT_EQ(run({"solve", fixture("running-example.json"), "--strategy", "sideways"}).code, msrmp::exit_usage_error);
  EXPECT_EQ(run({"solve", fixture("running-example.json"), "--min-bound", "DS"}).code, msrmp::exit_usage_error);
  EXPECT_EQ(run({"solve", fixture("running-example.json"), "--min-bound", "XX=0.1"}).code, msrmp::exit_usage_error);
  EXPECT_EQ(run({"solve", fixture("running-example.json"), "--chunk", "0"}).code, msrmp::exit_usage_error);
  EXPECT_EQ(run({"map-back", fixture("running-example.json")}).code, msrmp::exit_usage_error);
  EXPECT_EQ(run({"validate", fixture("does-not-exist.json")}).code, msrmp::exit_model_error);
  EXPECT_EQ(run({"map-back", fixture("running-example.json"), "--residues", "1,1,0.3,1,1"}).code,
            msrmp::exit_model_error);

  const auto bad = temp_file("bad.json");
  {
    auto m = testing_support::three_threat();
    m.aversion["s1"]["p1"]["T1"] = 11;
    m.stakeholders[1].criteria[0].weight = msrmp::Rational(1, 2);
    std::ofstream(bad) << msrmp::render_model(m);
  }
  const auto r = run({"validate", bad.string()});
  EXPECT_EQ(r.code, msrmp::exit_model_error);
  EXPECT_NE(r.err.find("aversion.s1.p1.T1"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("stakeholders[1].criteria"), std::string::npos) << r.err;
  std::ofstream(bad) << "{\"threats\": [";
  EXPECT_EQ(run({"count", bad.string()}).code, msrmp::exit_model_error);
  std::filesystem::remove(bad);
}

TEST(Cli, GoalsModeRejectsThreatWithoutGoals) {
  const auto path = temp_file("nogoal.json");
  auto m = testing_support::three_threat();
  m.threats[2].goals.clear();
  std::ofstream(path) << msrmp::render_model(m);
  EXPECT_EQ(run({"solve", path.string(), "--mode", "criteria"}).code, msrmp::exit_ok);
  const auto r = run({"solve", path.string(), "--mode", "goals"});
  EXPECT_EQ(r.code, msrmp::exit_model_error);
  EXPECT_NE(r.err.find("threats[2].goals"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, CountDocument) {
  const auto r = run({"count", fixture("running-example.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["reduced_count"], "57600");
  EXPECT_EQ(doc["raw_count"], "772782433280");
  EXPECT_EQ(doc["threats"][1]["residues"], 20);
}

TEST(Cli, AssessDocument) {
  const auto r = run({"assess", fixture("running-example.json"), "--precision", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["objectives"][0]["decimal"], "0.549");
  EXPECT_EQ(doc["objectives"][1]["decimal"], "0.576");
  EXPECT_EQ(doc["residues"][3]["exact"], "5/6");
  EXPECT_FALSE(doc.contains("seconds"));
  EXPECT_TRUE(json::parse(run({"assess", fixture("running-example.json"), "--timing"}).out).contains("seconds"));
}

TEST(Cli, SolveDocumentsAreByteIdentical) {
  const std::string model = fixture("running-example.json");
  for (const std::vector<std::string>& bounds :
       {std::vector<std::string>{}, std::vector<std::string>{"--min-bound", "DS=0.45", "--min-bound", "DC=0.55"}}) {
    std::vector<std::string> base_args{"solve", model};
    base_args.insert(base_args.end(), bounds.begin(), bounds.end());
    const auto base = run(base_args);
    ASSERT_EQ(base.code, 0) << base.err;
    for (const char* strategy : {"upfront", "chunk-collect", "chunk-carry"}) {
      for (const char* d : {"1", "333", "4096"}) {
        for (const char* threads : {"1", "4"}) {
          auto args = base_args;
          args.insert(args.end(), {"--strategy", strategy, "--chunk", d, "--threads", threads});
          EXPECT_EQ(run(args).out, base.out) << strategy << " d=" << d << " threads=" << threads;
        }
      }
    }
    EXPECT_EQ(run(base_args).out, base.out);
  }
}

TEST(Cli, SolveRunningExample) {
  const auto r = run({"solve", fixture("running-example.json"), "--with-rmps", "--limit", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["status"], "ok");
  ASSERT_EQ(doc["front"].size(), 1u);
  const auto& entry = doc["front"][0];
  EXPECT_EQ(entry["objectives"][0]["decimal"], "0.2260");
  EXPECT_EQ(entry["residues"][0]["T2"], "0.05");
  EXPECT_EQ(entry["residues"][0]["T4"], "1/6");
  EXPECT_EQ(entry["rmp_count"], "360");
  EXPECT_FALSE(doc.contains("seconds"));
  EXPECT_FALSE(doc["config"].contains("strategy"));
}

TEST(Cli, WritesToOutFile) {
  const auto path = temp_file("front.json");
  const auto r = run({"solve", fixture("three-threat.json"), "--mode", "criteria", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(msrmp::read_file(path))["front"].size(), 1u);
  std::filesystem::remove(path);
}

TEST(Cli, PlotCsv) {
  const auto r = run({"plot", fixture("three-threat.json"), "--mode", "criteria"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 33u);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "ordinal,s1,s2,pareto");
  std::size_t flagged = 0;
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) flagged += line.ends_with(",1") ? 1 : 0;
  EXPECT_EQ(flagged, 1u);
  EXPECT_NE(r.out.find("\n31,0.3500,0.5000,1\n"), std::string::npos);

  const auto none = run({"plot", fixture("three-threat.json"), "--mode", "criteria", "--min-bound", "s1=5"});
  ASSERT_EQ(none.code, 0) << none.err;
  EXPECT_EQ(none.out, "ordinal,s1,s2,pareto\n");
}

TEST(Cli, PlotRunningExample) {
  const auto r = run({"plot", fixture("running-example.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 57601u);
  std::size_t flagged = 0;
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) flagged += line.ends_with(",1") ? 1 : 0;
  EXPECT_EQ(flagged, 1u);
}

TEST(Cli, PlotSvg) {
  const auto svg = temp_file("plot.svg");
  const auto r = run({"plot", fixture("three-threat.json"), "--mode", "criteria", "--svg", svg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(msrmp::read_file(svg).rfind("<svg", 0), 0u);
  std::filesystem::remove(svg);

  const auto three = temp_file("three.json");
  std::ofstream(three) << msrmp::render_model(testing_support::random_model(5, 3, 3, 3));
  EXPECT_EQ(run({"plot", three.string(), "--svg", svg.string()}).code, msrmp::exit_usage_error);
  EXPECT_EQ(run({"plot", three.string()}).code, msrmp::exit_ok);
  std::filesystem::remove(three);
}

TEST(Cli, MapBackMatchesGoldenFile) {
  const auto r = run({"map-back", fixture("running-example.json"), "--residues", "1,0.05,0.125,1/6,1/6"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, msrmp::read_file(fixture("running-example-rmps.json")));
}

// The three example columns: T1 untouched; for T2..T5 column k puts 0.5 on the
// k-th control and 1 on the others.
TEST(Cli, GoldenFileHoldsExampleColumns) {
  const auto doc = json::parse(msrmp::read_file(fixture("running-example-rmps.json")));
  EXPECT_EQ(doc["total"], "360");
  const auto& threats = doc["threats"];
  ASSERT_EQ(threats.size(), 5u);
  ASSERT_EQ(threats[0]["assignments"].size(), 1u);
  for (const auto& [cid, level] : threats[0]["assignments"][0].items()) EXPECT_EQ(level, "0") << cid;
  for (std::size_t column = 0; column < 3; ++column) {
    for (std::size_t t = 1; t < 5; ++t) {
      bool found = false;
      for (const auto& a : threats[t]["assignments"]) {
        std::size_t i = 0;
        bool match = true;
        for (const auto& [cid, level] : a.items()) match = match && level == (i++ == column ? "0.5" : "1");
        found = found || match;
      }
      EXPECT_TRUE(found) << "column " << column << " threat " << t;
    }
  }
}

TEST(Cli, BenchCsv) {
  const auto r = run({"bench", "--threats", "3", "--controls", "2", "--strategies", "upfront,chunk-carry", "--chunks",
                      "5,50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 4u);
  EXPECT_EQ(r.out.rfind("threats,", 0), 0u);
  EXPECT_EQ(run({"bench", "--strategies", "fastest"}).code, msrmp::exit_usage_error);
}
