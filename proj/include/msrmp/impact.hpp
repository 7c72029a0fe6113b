#ifndef MSRMP_IMPACT_HPP
#define MSRMP_IMPACT_HPP

#include "msrmp/model.hpp"
#include "msrmp/rational.hpp"

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace msrmp {

/// Residue x_T per threat, in model threat order.
using ResidueVector = std::vector<Rational>;

/// Overall impact residue per stakeholder, in model stakeholder order.
struct ObjectivePoint {
  std::vector<Rational> values;

  [[nodiscard]] std::size_t size() const { return values.size(); }
  const Rational& operator[](std::size_t i) const { return values[i]; }

  friend bool operator==(const ObjectivePoint&, const ObjectivePoint&) = default;
  /// Lexicographic; used for canonical front ordering, not for dominance.
  friend std::strong_ordering operator<=>(const ObjectivePoint& lhs, const ObjectivePoint& rhs) {
    return std::lexicographical_compare_three_way(lhs.values.begin(), lhs.values.end(),
                                                  rhs.values.begin(), rhs.values.end());
  }
};

/// i_s(T) for every stakeholder (rows) and threat (columns).
struct ImpactProfile {
  std::vector<std::vector<Rational>> levels;

  [[nodiscard]] const Rational& at(std::size_t stakeholder, std::size_t threat) const {
    return levels[stakeholder][threat];
  }
};

/// Weighted aversion of stakeholder `s` to threat `t`, normalised by the impact
/// scale maximum: (1/il_max) * sum_p aversion(s, p, t) * weight(s, p).
Rational impact_level(const RiskModel& model, std::string_view stakeholder, std::string_view threat);
ImpactProfile impact_profile(const RiskModel& model);

/// Per-threat and per-goal incidence data derived from the threat/goal matrix.
struct GoalWeights {
  std::vector<int> affected_goals;    // AG_T
  std::vector<Rational> observation;  // OW_T = AG_T / sum AG
  std::vector<Rational> spread;       // g_T = sum over goals of T of 1 / #(T, G)
  std::vector<int> threats_per_goal;  // #(T, G), catalog order
};

/// Throws ModelError when no threat affects any goal.
GoalWeights goal_weights(const RiskModel& model);
Rational observation_weight(const RiskModel& model, std::string_view threat);

/// Normalised threat criticality. Sums to exactly 1. Throws std::domain_error when
/// sum_T OW_T * x_T is zero.
std::vector<Rational> ntc(const RiskModel& model, const ResidueVector& residues);

/// Linear objective sum_T i_s(T) * x_T per stakeholder (no 1/|T| prefactor).
ObjectivePoint objective_criteria(const RiskModel& model, const ResidueVector& residues);

/// Goal-weighted objective evaluated literally: per goal, the NTC-weighted average
/// impact over the threats affecting it, summed over goals with at least one threat.
ObjectivePoint objective_goals(const RiskModel& model, const ResidueVector& residues);

/// Same objective through the ratio form N_s(x) / D(x) with
/// N_s = sum_T OW_T g_T i_s(T) x_T and D = sum_T OW_T x_T.
ObjectivePoint objective_goals_ratio(const RiskModel& model, const ResidueVector& residues);

ObjectivePoint objective(const RiskModel& model, const ResidueVector& residues, ScoringMode mode);

/// Objective with impacts and goal weights computed once, for repeated evaluation.
/// Goals mode uses the ratio form.
class ObjectiveFunction {
 public:
  ObjectiveFunction(const RiskModel& model, ScoringMode mode);

  [[nodiscard]] ObjectivePoint operator()(const ResidueVector& residues) const;
  [[nodiscard]] ScoringMode mode() const { return mode_; }

 private:
  ScoringMode mode_;
  std::size_t threats_;
  // Per stakeholder and threat: the coefficient of x_T in the numerator.
  std::vector<std::vector<Rational>> numerator_;
  // Coefficient of x_T in the denominator (goals mode only).
  std::vector<Rational> denominator_;
};

/// Average NTC-weighted impact on one goal, per stakeholder.
struct GoalAverage {
  std::string goal_id;
  std::vector<Rational> per_stakeholder;
};

struct Assessment {
  ScoringMode mode = ScoringMode::goals;
  ResidueVector residues;
  ImpactProfile impacts;
  std::vector<Rational> ntc;               // goals mode only
  std::vector<GoalAverage> goal_averages;  // goals mode only; goals no threat affects are skipped
  ObjectivePoint objectives;
};

/// Full report for one fixed RMP. Throws ModelError for missing controls or
/// levels outside the scale.
Assessment assess(const RiskModel& model, std::span<const MitigationAssignment> assignment,
                  ScoringMode mode);

}  // namespace msrmp

#endif  // MSRMP_IMPACT_HPP
