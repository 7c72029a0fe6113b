#ifndef MSRMP_HARNESS_HPP
#define MSRMP_HARNESS_HPP

#include "msrmp/model.hpp"
#include "msrmp/pareto.hpp"
#include "msrmp/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace msrmp {

struct BenchSpec {
  std::vector<std::size_t> threat_counts{5};
  std::size_t controls_per_threat = 4;
  std::size_t stakeholders = 2;
  /// Criteria count of stakeholder i; the last value repeats for further stakeholders.
  std::vector<std::size_t> criteria_per_stakeholder{4, 2};
  std::size_t goals = 6;
  std::uint64_t seed = 42;
  std::vector<Strategy> strategies{Strategy::upfront};
  /// Chunk sizes swept by the chunked strategies; upfront runs once per instance.
  std::vector<std::uint64_t> chunks{4096};
  ScoringMode mode = ScoringMode::goals;
  std::optional<double> timeout_secs;
  unsigned threads = 1;
};

struct BenchRecord {
  std::size_t threats = 0;
  std::size_t controls_total = 0;
  BigInt raw_count;
  BigInt reduced_count;
  ScoringMode mode = ScoringMode::goals;
  Strategy strategy = Strategy::upfront;
  std::optional<std::uint64_t> d;  // empty for upfront
  double seconds = 0;
  std::optional<double> peak_mem_mb;
  std::size_t front_size = 0;
  bool timed_out = false;

  /// raw / reduced.
  [[nodiscard]] Rational reduction_factor() const { return {raw_count, reduced_count}; }
};

/// Throws std::invalid_argument when a count is zero.
void check_spec(const BenchSpec& spec);

/// Deterministic synthetic model for threat_counts[index]: aversions uniform in
/// 0..il_max, criterion weights random positive integers normalised to sum 1,
/// every threat affecting a random non-empty set of goals.
RiskModel gen_instance(const BenchSpec& spec, std::size_t index);

/// One record per (instance, strategy, d) cell, each also passed to `sink`.
/// Timeouts are recorded in the cell, not thrown.
std::vector<BenchRecord> run_bench(const BenchSpec& spec,
                                   const std::function<void(const BenchRecord&)>& sink = {});

/// Process peak resident set in MiB, or nullopt where unavailable.
std::optional<double> peak_memory_mb();

std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& record);

}  // namespace msrmp

#endif  // MSRMP_HARNESS_HPP
