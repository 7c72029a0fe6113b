#include "msrmp/harness.hpp"
#include "msrmp/residue.hpp"

#include <gtest/gtest.h>

using namespace msrmp;

TEST(Harness, InstancesAreDeterministicAndValid) {
  BenchSpec spec;
  spec.threat_counts = {5, 6, 7};
  for (std::size_t i = 0; i < spec.threat_counts.size(); ++i) {
    const auto a = gen_instance(spec, i);
    EXPECT_EQ(a, gen_instance(spec, i));
    EXPECT_TRUE(validate_model(a, ScoringMode::goals).empty());
    EXPECT_EQ(a.threats.size(), spec.threat_counts[i]);
    EXPECT_EQ(a.stakeholders.size(), 2u);
    EXPECT_EQ(a.stakeholders[0].criteria.size(), 4u);
    EXPECT_EQ(a.stakeholders[1].criteria.size(), 2u);
    for (const auto& t : a.threats) {
      EXPECT_EQ(t.controls.size(), 4u);
      EXPECT_FALSE(t.goals.empty());
    }
  }
  BenchSpec other = spec;
  other.seed = 43;
  EXPECT_NE(gen_instance(other, 0), gen_instance(spec, 0));
}

TEST(Harness, ExtraStakeholdersRepeatLastCriteriaCount) {
  BenchSpec spec;
  spec.stakeholders = 4;
  spec.criteria_per_stakeholder = {3, 1};
  const auto m = gen_instance(spec, 0);
  ASSERT_EQ(m.stakeholders.size(), 4u);
  EXPECT_EQ(m.stakeholders[3].criteria.size(), 1u);
  EXPECT_TRUE(validate_model(m, ScoringMode::goals).empty());
}

TEST(Harness, SyntheticCounts) {
  BenchSpec spec;
  spec.threat_counts = {5};
  EXPECT_EQ(count_reduced(gen_instance(spec, 0)), BigInt(32768));
  spec.controls_per_threat = 5;
  EXPECT_EQ(count_reduced(gen_instance(spec, 0)), BigInt(100000));
}

TEST(Harness, SpecChecks) {
  BenchSpec spec;
  spec.threat_counts = {};
  EXPECT_THROW(check_spec(spec), std::invalid_argument);
  spec = BenchSpec{};
  spec.chunks = {0};
  spec.strategies = {Strategy::chunk_carry};
  EXPECT_THROW(check_spec(spec), std::invalid_argument);
  spec = BenchSpec{};
  spec.goals = 0;
  EXPECT_THROW(check_spec(spec), std::invalid_argument);
}

TEST(Harness, RunBenchCells) {
  BenchSpec spec;
  spec.threat_counts = {3};
  spec.controls_per_threat = 3;
  spec.strategies = {Strategy::upfront, Strategy::chunk_collect, Strategy::chunk_carry};
  spec.chunks = {1, 50};
  std::size_t sunk = 0;
  const auto records = run_bench(spec, [&](const BenchRecord&) { ++sunk; });
  ASSERT_EQ(records.size(), 5u);
  EXPECT_EQ(sunk, 5u);
  EXPECT_FALSE(records[0].d.has_value());
  EXPECT_EQ(records[1].d, 1u);
  for (const auto& r : records) {
    EXPECT_EQ(r.front_size, records[0].front_size);
    EXPECT_EQ(r.reduced_count, BigInt(216));
    EXPECT_EQ(r.raw_count, BigInt(26 * 26 * 26));
    EXPECT_FALSE(r.timed_out);
  }
  EXPECT_EQ(records[0].reduction_factor(), Rational(BigInt(26 * 26 * 26), BigInt(216)));
}

TEST(Harness, CsvShape) {
  EXPECT_EQ(bench_csv_header(),
            "threats,controls_total,raw_count,reduced_count,reduction_factor,mode,strategy,d,seconds,"
            "peak_mem_mb,front_size,timed_out\n");
  BenchRecord r;
  r.threats = 5;
  r.controls_total = 20;
  r.raw_count = BigInt("3276800000");
  r.reduced_count = 32768;
  r.timed_out = true;
  const auto row = bench_csv_row(r);
  EXPECT_EQ(row.rfind("5,20,3276800000,32768,100000,goals,upfront,,", 0), 0u) << row;
  EXPECT_EQ(row.substr(row.size() - 6), ",true\n");
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 11);
}

TEST(Harness, TimeoutIsRecorded) {
  BenchSpec spec;
  spec.threat_counts = {6};
  spec.strategies = {Strategy::chunk_carry};
  spec.chunks = {1};
  spec.timeout_secs = 1e-9;
  const auto records = run_bench(spec);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_TRUE(records[0].timed_out);
}

TEST(Harness, PeakMemoryIsReported) {
  const auto mb = peak_memory_mb();
  ASSERT_TRUE(mb.has_value());
  EXPECT_GT(*mb, 0.0);
}
