#ifndef MSRMP_MAPBACK_HPP
#define MSRMP_MAPBACK_HPP

#include "msrmp/impact.hpp"
#include "msrmp/model.hpp"
#include "msrmp/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace msrmp {

/// The residue cannot be produced by any non-excluded assignment of the threat.
class UnachievableResidue : public std::invalid_argument {
 public:
  UnachievableResidue(const std::string& threat, const Rational& residue);

  [[nodiscard]] const std::string& threat() const { return threat_; }

 private:
  std::string threat_;
};

/// Streams every level vector of `threat` with residue exactly `x`, in
/// lexicographic order over control positions with higher levels first. Stops
/// early when `emit` returns false. Returns the number of assignments emitted.
std::uint64_t assignments_for_residue(const RiskModel& model, std::string_view threat, const Rational& x,
                                      const std::function<bool(const MitigationAssignment&)>& emit);

/// Collecting form of the above, keeping at most `limit` assignments.
std::vector<MitigationAssignment> assignments_for_residue(const RiskModel& model, std::string_view threat,
                                                          const Rational& x,
                                                          std::optional<std::uint64_t> limit = {});

/// Number of assignments of one threat with residue `x`, by dynamic programming.
BigInt count_assignments(const RiskModel& model, std::string_view threat, const Rational& x);

/// prod_T count_assignments(T, x_T).
BigInt count_rmps(const RiskModel& model, const ResidueVector& x);

struct RmpEnumeration {
  ResidueVector target;
  /// Per threat, in model order; each list holds at most `limit` assignments.
  std::vector<std::vector<MitigationAssignment>> assignments;
  /// Exact per-threat counts, independent of the limit.
  std::vector<BigInt> counts;
  BigInt total;
  bool truncated = false;
};

/// Throws UnachievableResidue, or std::invalid_argument on a size mismatch.
RmpEnumeration enumerate_rmps(const RiskModel& model, const ResidueVector& x,
                              std::optional<std::uint64_t> limit = {});

}  // namespace msrmp

#endif  // MSRMP_MAPBACK_HPP
