#ifndef MSRMP_PARETO_HPP
#define MSRMP_PARETO_HPP

#include "msrmp/impact.hpp"
#include "msrmp/model.hpp"
#include "msrmp/rational.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace msrmp {

/// Minimisation: p <= q componentwise with at least one strict component.
/// Throws std::invalid_argument on a dimension mismatch.
bool dominates(const ObjectivePoint& p, const ObjectivePoint& q);

struct FrontEntry {
  ObjectivePoint point;
  /// Every residue vector evaluating to `point`, without duplicates, in
  /// lexicographically descending order (ascending enumeration ordinal).
  std::vector<ResidueVector> residues;

  friend bool operator==(const FrontEntry&, const FrontEntry&) = default;
};

struct ParetoFront {
  /// Sorted by point, lexicographically ascending.
  std::vector<FrontEntry> entries;

  [[nodiscard]] std::size_t size() const { return entries.size(); }
  [[nodiscard]] bool empty() const { return entries.empty(); }

  friend bool operator==(const ParetoFront&, const ParetoFront&) = default;
};

/// Non-dominated subset of `points`; equal points share one entry.
ParetoFront front(std::span<const std::pair<ObjectivePoint, ResidueVector>> points);
ParetoFront front(const ParetoFront& points);

enum class Strategy { upfront, chunk_collect, chunk_carry };

std::string_view to_string(Strategy strategy);
/// Accepts "upfront", "chunk-collect" or "chunk-carry"; throws std::invalid_argument.
Strategy parse_strategy(std::string_view text);

struct LowerBound {
  std::string stakeholder;
  Rational value;

  friend bool operator==(const LowerBound&, const LowerBound&) = default;
};

struct SolveConfig {
  ScoringMode mode = ScoringMode::goals;
  Strategy strategy = Strategy::upfront;
  std::uint64_t chunk = 4096;
  /// Feasible points satisfy oir(s) >= value (or > value when exclusive_bounds).
  std::vector<LowerBound> lower_bounds;
  bool exclusive_bounds = false;
  /// Worker threads for chunk-collect; other strategies run on the calling thread.
  unsigned threads = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class SolveStatus { ok, no_feasible_point, timed_out };

std::string_view to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::ok;
  ParetoFront front;
  std::uint64_t evaluated = 0;
  std::uint64_t feasible = 0;
};

/// Throws std::invalid_argument for chunk == 0, negative bounds or unknown
/// stakeholders, and ModelError when the model is invalid for cfg.mode.
void check_config(const RiskModel& model, const SolveConfig& cfg);

/// Exact front over the reduced residue space.
SolveResult solve(const RiskModel& model, const SolveConfig& cfg);

class OracleCapExceeded : public std::runtime_error {
 public:
  explicit OracleCapExceeded(const BigInt& raw);
};

/// Every RMP (one assignment per threat) behind one oracle front entry.
using Rmp = std::vector<MitigationAssignment>;

struct OracleResult {
  SolveResult result;
  /// Parallel to result.front.entries; filled only when requested.
  std::vector<std::vector<Rmp>> rmps;
};

/// Brute force over every combination of mitigation mappings (all-max excluded
/// per threat). cfg.strategy and cfg.chunk are ignored. Throws OracleCapExceeded
/// when count_raw exceeds `cap`.
OracleResult solve_direct_oracle(const RiskModel& model, const SolveConfig& cfg,
                                 std::uint64_t cap = 1'000'000, bool collect_rmps = false);

}  // namespace msrmp

#endif  // MSRMP_PARETO_HPP
