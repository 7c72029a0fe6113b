#include "msrmp/mapback.hpp"
#include "msrmp/impact.hpp"
#include "msrmp/pareto.hpp"
#include "msrmp/residue.hpp"

#include "helpers.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace msrmp;
using testing_support::q;

namespace {

std::vector<std::vector<Rational>> levels_of(const std::vector<MitigationAssignment>& rows) {
  std::vector<std::vector<Rational>> out;
  for (const auto& r : rows) out.push_back(r.levels);
  return out;
}

std::vector<Rational> lv(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(q(t));
  return out;
}

}  // namespace

TEST(Mapback, ThreeThreatLists) {
  const auto m = testing_support::three_threat();
  EXPECT_EQ(levels_of(assignments_for_residue(m, "T1", q("0.25"))),
            (std::vector<std::vector<Rational>>{lv({"1", "0.5"}), lv({"0.5", "1"})}));
  EXPECT_EQ(levels_of(assignments_for_residue(m, "T2", q("0.5"))),
            (std::vector<std::vector<Rational>>{lv({"1", "0"}), lv({"0.5", "0.5"}), lv({"0", "1"})}));
  EXPECT_EQ(levels_of(assignments_for_residue(m, "T3", q("0.5"))), (std::vector<std::vector<Rational>>{lv({"0.5"})}));
  const auto e = enumerate_rmps(m, lv({"0.25", "0.5", "0.5"}));
  EXPECT_EQ(e.total, BigInt(6));
  EXPECT_EQ(e.counts, (std::vector<BigInt>{2, 3, 1}));
  EXPECT_FALSE(e.truncated);
}

TEST(Mapback, NoMitigationIsUnique) {
  const auto m = testing_support::running_example();
  const auto rows = assignments_for_residue(m, "T2", Rational(1));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].levels, std::vector<Rational>(10, Rational(0)));
  EXPECT_EQ(count_rmps(m, ResidueVector(5, Rational(1))), BigInt(1));
}

TEST(Mapback, RunningExampleOptimum) {
  const auto m = testing_support::running_example();
  const auto t2 = assignments_for_residue(m, "T2", q("0.05"));
  ASSERT_EQ(t2.size(), 10u);
  for (const auto& a : t2) {
    EXPECT_EQ(std::count(a.levels.begin(), a.levels.end(), Rational(1)), 9);
    EXPECT_EQ(std::count(a.levels.begin(), a.levels.end(), q("0.5")), 1);
  }
  EXPECT_EQ(count_assignments(m, "T3", q("0.875")), BigInt(4));
  const ResidueVector x = lv({"1", "1/20", "1/8", "1/6", "1/6"});
  EXPECT_EQ(count_rmps(m, x), BigInt(360));
  const auto e = enumerate_rmps(m, x);
  EXPECT_EQ(e.counts, (std::vector<BigInt>{1, 10, 4, 3, 3}));
  EXPECT_EQ(e.total, BigInt(360));
}

TEST(Mapback, LimitKeepsExactCounts) {
  const auto m = testing_support::running_example();
  const ResidueVector x = lv({"1", "1/20", "1/8", "1/6", "1/6"});
  const auto e = enumerate_rmps(m, x, 2);
  EXPECT_TRUE(e.truncated);
  EXPECT_EQ(e.total, BigInt(360));
  EXPECT_EQ(e.assignments[0].size(), 1u);
  EXPECT_EQ(e.assignments[1].size(), 2u);
  EXPECT_EQ(e.counts[1], BigInt(10));
  const auto full = enumerate_rmps(m, x);
  EXPECT_EQ(e.assignments[1][0], full.assignments[1][0]);
  EXPECT_FALSE(enumerate_rmps(m, x, 10).truncated);

  std::uint64_t seen = 0;
  const auto emitted = assignments_for_residue(m, "T2", q("0.05"), [&](const MitigationAssignment&) {
    return ++seen < 3;
  });
  EXPECT_EQ(emitted, 3u);
}

TEST(Mapback, UnachievableResidues) {
  const auto m = testing_support::running_example();
  EXPECT_THROW(assignments_for_residue(m, "T4", q("0.3")), UnachievableResidue);
  EXPECT_THROW(count_rmps(m, lv({"1", "1", "1", "1", "0"})), UnachievableResidue);
  EXPECT_THROW(enumerate_rmps(m, lv({"1", "1"})), std::invalid_argument);
  try {
    enumerate_rmps(m, lv({"1", "1", "0.3", "1", "1"}));
    FAIL();
  } catch (const UnachievableResidue& e) {
    EXPECT_EQ(e.threat(), "T3");
  }
}

TEST(Mapback, CompleteAgainstBruteForce) {
  for (const auto& scale : {std::vector<Rational>{Rational(0), q("0.5"), Rational(1)},
                            std::vector<Rational>{Rational(0), q("0.25"), q("0.5"), Rational(1)},
                            std::vector<Rational>{Rational(0), q("1/3"), Rational(1)}}) {
    for (std::size_t n = 1; n <= 6; ++n) {
      RiskModel m = testing_support::three_threat();
      m.scale.levels = scale;
      m.threats[0].controls.clear();
      for (std::size_t i = 0; i < n; ++i) m.threats[0].controls.push_back({"k" + std::to_string(i), ""});
      std::map<oracle::Q, std::set<std::vector<oracle::Q>>> expected;
      for (const auto& v : oracle::all_level_vectors(m, n)) expected[oracle::residue_of(v)].insert(v);
      for (const auto& [x, vectors] : expected) {
        const auto got = assignments_for_residue(m, "T1", oracle::to_rational(x));
        std::set<std::vector<oracle::Q>> got_set;
        for (const auto& a : got) {
          got_set.insert(oracle::q_vec(a.levels));
          EXPECT_EQ(residue_of_assignment(m, "T1", a), oracle::to_rational(x));
        }
        EXPECT_EQ(got_set, vectors);
        EXPECT_EQ(got.size(), got_set.size());
        // Lexicographic over positions, higher levels first.
        const auto order = levels_of(got);
        EXPECT_TRUE(std::is_sorted(order.begin(), order.end(), std::greater<>()));
        EXPECT_EQ(count_assignments(m, "T1", oracle::to_rational(x)), BigInt(static_cast<unsigned long>(got.size())));
      }
    }
  }
}

TEST(Mapback, EveryRmpReproducesItsFrontPoint) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = testing_support::random_model(seed, 4, 4);
    for (auto mode : {ScoringMode::criteria, ScoringMode::goals}) {
      SolveConfig cfg;
      cfg.mode = mode;
      const auto r = solve(m, cfg);
      for (const auto& entry : r.front.entries) {
        for (const auto& x : entry.residues) {
          const auto e = enumerate_rmps(m, x, 50);
          // Walk the diagonal of the per-threat lists rather than their full product.
          for (std::size_t k = 0; k < 50; ++k) {
            std::vector<MitigationAssignment> rmp;
            for (std::size_t t = 0; t < m.threats.size(); ++t) {
              rmp.push_back(e.assignments[t][k % e.assignments[t].size()]);
            }
            ASSERT_EQ(assess(m, rmp, mode).objectives, entry.point) << "seed " << seed;
          }
        }
      }
    }
  }
}
