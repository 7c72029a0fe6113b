#include "msrmp/impact.hpp"
#include "msrmp/residue.hpp"

#include "helpers.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace msrmp;
using testing_support::q;

namespace {

ResidueVector fixed_residues() { return {q("2/5"), q("7/20"), q("1/4"), q("5/6"), q("2/3")}; }

ResidueVector random_residues(const RiskModel& m, std::mt19937_64& rng) {
  ResidueVector x;
  for (std::size_t t = 0; t < m.threats.size(); ++t) {
    const auto set = residue_set(m, t);
    x.push_back(set.values[rng() % set.size()]);
  }
  return x;
}

}  // namespace

TEST(Impact, ImpactLevels) {
  const auto m = testing_support::running_example();
  EXPECT_EQ(impact_level(m, "DS", "T2"), q("0.725"));
  EXPECT_EQ(impact_level(m, "DC", "T1"), q("0.4"));
  EXPECT_THROW(impact_level(m, "XX", "T1"), std::out_of_range);
  const auto profile = impact_profile(m);
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t t = 0; t < 5; ++t) {
      EXPECT_EQ(oracle::q_of(profile.at(s, t)), oracle::impact(m, s, t));
      EXPECT_GE(profile.at(s, t), Rational(0));
      EXPECT_LE(profile.at(s, t), Rational(1));
    }
  }
}

TEST(Impact, ZeroAversionGivesZero) {
  auto m = testing_support::three_threat();
  m.aversion["s1"]["p1"]["T2"] = 0;
  EXPECT_EQ(impact_level(m, "s1", "T2"), Rational(0));
}

TEST(Impact, ObservationWeights) {
  const auto m = testing_support::running_example();
  EXPECT_EQ(observation_weight(m, "T1"), q("2/10"));
  EXPECT_EQ(observation_weight(m, "T2"), q("3/10"));
  const auto w = goal_weights(m);
  EXPECT_EQ(w.affected_goals, (std::vector<int>{2, 3, 2, 2, 1}));
  // G5 is affected by no threat.
  EXPECT_EQ(w.threats_per_goal, (std::vector<int>{3, 2, 2, 2, 0, 1}));

  auto single = testing_support::three_threat();
  single.threats.resize(1);
  EXPECT_EQ(observation_weight(single, "T1"), Rational(1));

  for (auto& t : single.threats) t.goals.clear();
  EXPECT_THROW(goal_weights(single), ModelError);
}

TEST(Impact, NtcOnFixedResidues) {
  const auto m = testing_support::running_example();
  const auto x = fixed_residues();
  const auto n = ntc(m, x);
  Rational d;
  for (std::size_t t = 0; t < 5; ++t) d += observation_weight(m, m.threats[t].id) * x[t];
  EXPECT_EQ(n[0], q("2/10") * q("2/5") / d);
  Rational sum;
  for (const auto& v : n) sum += v;
  EXPECT_EQ(sum, Rational(1));
  EXPECT_THROW(ntc(m, ResidueVector(5, Rational(0))), std::domain_error);
}

TEST(Impact, NtcUniformCase) {
  auto m = testing_support::three_threat();
  const auto n = ntc(m, {q("0.5"), q("0.5"), q("0.5")});
  for (const auto& v : n) EXPECT_EQ(v, q("1/3"));
}

TEST(Impact, CriteriaObjectiveExamples) {
  const auto m = testing_support::three_threat();
  EXPECT_EQ(objective_criteria(m, {Rational(1), Rational(1), Rational(1)}).values,
            (std::vector<Rational>{q("1.1"), q("1.4")}));
  EXPECT_EQ(objective_criteria(m, {q("0.25"), q("0.25"), q("0.5")}).values,
            (std::vector<Rational>{q("0.35"), q("0.5")}));
}

TEST(Impact, ZeroImpactThreatDoesNotMove) {
  auto m = testing_support::three_threat();
  m.aversion["s1"]["p1"]["T2"] = 0;
  m.aversion["s2"]["p1"]["T2"] = 0;
  const auto a = objective_criteria(m, {q("0.5"), Rational(1), q("0.5")});
  const auto b = objective_criteria(m, {q("0.5"), q("0.5"), q("0.5")});
  EXPECT_EQ(a, b);
}

TEST(Impact, GoalsObjectiveOnFixedAssignment) {
  const auto m = testing_support::running_example();
  const auto p = objective_goals(m, fixed_residues());
  EXPECT_EQ(p[0].to_decimal(3), "0.549");
  EXPECT_EQ(p[1].to_decimal(3), "0.576");
  EXPECT_EQ(objective_goals_ratio(m, fixed_residues()), p);
  EXPECT_EQ(oracle::q_vec(p.values), oracle::objective(m, oracle::q_vec(fixed_residues()), ScoringMode::goals));
}

TEST(Impact, SingleGoalSingleThreat) {
  auto m = testing_support::three_threat();
  m.threats.resize(1);
  const auto p = objective_goals(m, {q("0.25")});
  EXPECT_EQ(p[0], impact_level(m, "s1", "T1"));
  EXPECT_EQ(p[1], impact_level(m, "s2", "T1"));
}

TEST(Impact, AssessFixedAssignment) {
  const auto m = testing_support::running_example();
  const auto a = assess(m, fixed_assignment(m), ScoringMode::goals);
  EXPECT_EQ(a.residues, fixed_residues());
  ASSERT_EQ(a.goal_averages.size(), 5u);  // G5 skipped
  EXPECT_EQ(a.goal_averages[0].goal_id, "G1");
  EXPECT_EQ(a.goal_averages[0].per_stakeholder[0].to_decimal(3), "0.074");
  EXPECT_EQ(a.goal_averages[0].per_stakeholder[1].to_decimal(3), "0.087");
  EXPECT_EQ(a.objectives, objective_goals(m, a.residues));
  EXPECT_EQ(a.impacts.at(0, 1), q("0.725"));

  const auto c = assess(m, fixed_assignment(m), ScoringMode::criteria);
  EXPECT_TRUE(c.ntc.empty());
  EXPECT_EQ(c.objectives, objective_criteria(m, a.residues));
}

TEST(Impact, AssessNoMitigation) {
  const auto m = testing_support::running_example();
  std::vector<MitigationAssignment> zero;
  for (const auto& t : m.threats) zero.push_back({t.id, std::vector<Rational>(t.controls.size())});
  EXPECT_EQ(assess(m, zero, ScoringMode::goals).residues, ResidueVector(5, Rational(1)));
}

TEST(Impact, AssessMinimalResidues) {
  const auto m = testing_support::running_example();
  std::vector<MitigationAssignment> near_max;
  for (const auto& t : m.threats) {
    std::vector<Rational> levels(t.controls.size(), Rational(1));
    levels.back() = q("0.5");
    near_max.push_back({t.id, levels});
  }
  const auto a = assess(m, near_max, ScoringMode::goals);
  for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(a.residues[t], residue_set(m, t).values.back());
}

TEST(Impact, AssessErrors) {
  const auto m = testing_support::running_example();
  auto rows = fixed_assignment(m);
  auto missing = rows;
  missing.erase(missing.begin() + 2);
  try {
    assess(m, missing, ScoringMode::goals);
    FAIL();
  } catch (const ModelError& e) {
    ASSERT_EQ(e.diagnostics().size(), 1u);
    EXPECT_EQ(e.diagnostics()[0].path, "assignment.T3");
  }
  auto bad_level = rows;
  bad_level[0].levels[0] = q("0.7");
  EXPECT_THROW(assess(m, bad_level, ScoringMode::goals), ModelError);
  auto short_row = rows;
  short_row[1].levels.pop_back();
  EXPECT_THROW(assess(m, short_row, ScoringMode::goals), ModelError);
  auto twice = rows;
  twice.push_back(rows[0]);
  EXPECT_THROW(assess(m, twice, ScoringMode::goals), ModelError);
  auto unknown = rows;
  unknown[0].threat_id = "T0";
  EXPECT_THROW(assess(m, unknown, ScoringMode::goals), ModelError);
}

TEST(Impact, RatioFormMatchesLiteralFormOnRandomInstances) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto m = testing_support::random_model(seed, 6, 4, 2 + seed % 2);
    const ObjectiveFunction f(m, ScoringMode::goals);
    const oracle::Scorer score(m, ScoringMode::goals);
    for (int i = 0; i < 5; ++i) {
      const auto x = random_residues(m, rng);
      const auto literal = objective_goals(m, x);
      ASSERT_EQ(objective_goals_ratio(m, x), literal) << "seed " << seed;
      ASSERT_EQ(f(x), literal) << "seed " << seed;
      ASSERT_EQ(oracle::q_vec(literal.values), score(oracle::q_vec(x))) << "seed " << seed;
    }
  }
}

TEST(Impact, CriteriaMatchesOracle) {
  std::mt19937_64 rng(12);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = testing_support::random_model(seed, 6, 4);
    const ObjectiveFunction f(m, ScoringMode::criteria);
    const auto x = random_residues(m, rng);
    ASSERT_EQ(f(x), objective_criteria(m, x));
    ASSERT_EQ(oracle::q_vec(f(x).values), oracle::objective(m, oracle::q_vec(x), ScoringMode::criteria));
  }
}

TEST(Impact, GoalsObjectiveIsHomogeneous) {
  std::mt19937_64 rng(13);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = testing_support::random_model(seed, 6, 4);
    const auto x = random_residues(m, rng);
    const Rational c(1 + static_cast<std::int64_t>(rng() % 17), 1 + static_cast<std::int64_t>(rng() % 13));
    ResidueVector scaled;
    for (const auto& v : x) scaled.push_back(v * c);
    ASSERT_EQ(objective_goals(m, scaled), objective_goals(m, x));
  }
}

TEST(Impact, CriteriaObjectiveIsMonotone) {
  std::mt19937_64 rng(14);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = testing_support::random_model(seed, 6, 4);
    auto x = random_residues(m, rng);
    auto y = x;
    const std::size_t t = rng() % x.size();
    y[t] = residue_set(m, t).values.front();  // largest residue for that threat
    const auto px = objective_criteria(m, x);
    const auto py = objective_criteria(m, y);
    for (std::size_t s = 0; s < px.size(); ++s) ASSERT_LE(px[s], py[s]);
  }
}

TEST(Impact, NtcSumsToOneOnRandomVectors) {
  std::mt19937_64 rng(15);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto m = testing_support::random_model(seed, 6, 4);
    const auto n = ntc(m, random_residues(m, rng));
    Rational sum;
    for (const auto& v : n) sum += v;
    ASSERT_EQ(sum, Rational(1));
  }
}
