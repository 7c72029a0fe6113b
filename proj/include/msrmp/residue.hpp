#ifndef MSRMP_RESIDUE_HPP
#define MSRMP_RESIDUE_HPP

#include "msrmp/impact.hpp"
#include "msrmp/model.hpp"
#include "msrmp/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace msrmp {

/// Integer view of a mitigation scale: every level multiplied by the common
/// denominator of all levels.
struct ScaledLevels {
  std::int64_t denominator = 1;
  std::vector<std::int64_t> levels;  // ascending, same order as MitigationScale::levels

  [[nodiscard]] std::int64_t max_level() const { return levels.back(); }
};

/// Throws ModelError if the common denominator does not fit in 32 bits.
ScaledLevels scale_levels(const MitigationScale& scale);

/// Distinct achievable residues of one threat, largest first.
struct ResidueSet {
  std::string threat_id;
  std::size_t control_count = 0;
  std::int64_t sum_denominator = 1;
  std::vector<Rational> values;
  /// For values[i]: the level sum achieving it, times sum_denominator.
  std::vector<std::int64_t> scaled_sums;

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] Rational sum(std::size_t i) const {
    return Rational(scaled_sums[i], sum_denominator);
  }
  /// Index of `x` in values, or npos.
  [[nodiscard]] std::size_t find(const Rational& x) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Residues 1 - sigma / n over every achievable level sum sigma, except the sum
/// reached only when every control sits at the maximum level. A threat without
/// controls has the single residue 1.
ResidueSet residue_set(const RiskModel& model, std::string_view threat);
ResidueSet residue_set(const RiskModel& model, std::size_t threat_index);

/// prod_T (k^|C_T| - 1), k = |A|; a threat without controls contributes 1.
BigInt count_raw(const RiskModel& model);
/// prod_T |X_T|.
BigInt count_reduced(const RiskModel& model);

/// 1 - sum(levels) / |C_T|. Throws ModelError when the assignment has the wrong
/// length, uses a level outside the scale, or is the excluded all-max assignment.
Rational residue_of_assignment(const RiskModel& model, std::string_view threat,
                               const MitigationAssignment& assignment);

/// Cartesian product of the per-threat residue sets, addressed by a mixed-radix
/// ordinal: the first threat is the most significant digit, and digit i indexes
/// the descending residue list of threat i. Ordinal 0 is the all-ones vector.
class ResidueSpace {
 public:
  explicit ResidueSpace(const RiskModel& model);

  [[nodiscard]] const std::vector<ResidueSet>& sets() const { return sets_; }
  [[nodiscard]] std::size_t dimension() const { return sets_.size(); }
  [[nodiscard]] const BigInt& reduced_count() const { return reduced_; }

  /// Number of points; throws std::overflow_error past 2^64 - 1.
  [[nodiscard]] std::uint64_t size() const;

  void digits_of(std::uint64_t ordinal, std::span<std::uint32_t> out) const;
  [[nodiscard]] std::uint64_t ordinal_of(std::span<const std::uint32_t> digits) const;
  [[nodiscard]] ResidueVector residues(std::span<const std::uint32_t> digits) const;
  [[nodiscard]] ResidueVector point(std::uint64_t ordinal) const;

 private:
  std::vector<ResidueSet> sets_;
  BigInt reduced_;
};

/// Forward cursor over the ordinals [start, start + length) of a ResidueSpace.
/// Holds one digit vector; no storage proportional to the space.
class PointCursor {
 public:
  /// Throws std::out_of_range unless start + length <= space.size().
  PointCursor(const ResidueSpace& space, std::uint64_t start, std::uint64_t length);

  [[nodiscard]] bool done() const { return remaining_ == 0; }
  [[nodiscard]] std::uint64_t ordinal() const { return ordinal_; }
  [[nodiscard]] std::span<const std::uint32_t> digits() const { return digits_; }
  [[nodiscard]] ResidueVector residues() const { return space_->residues(digits_); }
  void advance();

 private:
  const ResidueSpace* space_;
  std::vector<std::uint32_t> digits_;
  std::uint64_t ordinal_;
  std::uint64_t remaining_;
};

/// Calls visit(residues, ordinal) for every point with ordinal in [start, start + length).
void iter_points(const ResidueSpace& space, std::uint64_t start, std::uint64_t length,
                 const std::function<void(const ResidueVector&, std::uint64_t)>& visit);

}  // namespace msrmp

#endif  // MSRMP_RESIDUE_HPP
