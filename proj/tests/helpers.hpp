#ifndef MSRMP_TESTS_HELPERS_HPP
#define MSRMP_TESTS_HELPERS_HPP

#include "msrmp/harness.hpp"
#include "msrmp/model.hpp"

#include <random>
#include <string>

namespace testing_support {

inline std::string fixture(const std::string& name) { return std::string(MSRMP_FIXTURES_DIR) + "/" + name; }

inline msrmp::RiskModel running_example() { return msrmp::load_model(fixture("running-example.json")); }
inline msrmp::RiskModel three_threat() { return msrmp::load_model(fixture("three-threat.json")); }

inline msrmp::Rational q(const char* text) { return msrmp::Rational::parse(text); }

/// Small random model: 1..max_threats threats with 1..max_q controls each.
inline msrmp::RiskModel random_model(std::uint64_t seed, std::size_t max_threats, std::size_t max_q,
                                     std::size_t stakeholders = 2) {
  std::mt19937_64 rng(seed);
  msrmp::BenchSpec spec;
  spec.seed = seed;
  spec.threat_counts = {1 + static_cast<std::size_t>(rng() % max_threats)};
  spec.controls_per_threat = 1 + static_cast<std::size_t>(rng() % max_q);
  spec.stakeholders = stakeholders;
  spec.criteria_per_stakeholder = {1 + static_cast<std::size_t>(rng() % 4), 1 + static_cast<std::size_t>(rng() % 3)};
  auto model = msrmp::gen_instance(spec, 0);
  // Vary control counts per threat so residue sets differ in size.
  for (auto& t : model.threats) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % max_q);
    t.controls.resize(std::min(n, t.controls.size()));
  }
  return model;
}

}  // namespace testing_support

#endif  // MSRMP_TESTS_HELPERS_HPP
