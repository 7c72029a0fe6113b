#include "msrmp/impact.hpp"

#include "msrmp/residue.hpp"

#include <optional>
#include <stdexcept>

namespace msrmp {

Rational impact_level(const RiskModel& model, std::string_view stakeholder, std::string_view threat) {
  const Stakeholder& s = model.stakeholders.at(model.stakeholder_index(stakeholder));
  const std::string threat_id(threat);
  Rational total;
  for (const auto& criterion : s.criteria) {
    total += criterion.weight * Rational(model.aversion_level(s.id, criterion.id, threat_id));
  }
  return total / Rational(model.scale.impact_scale_max);
}

ImpactProfile impact_profile(const RiskModel& model) {
  ImpactProfile profile;
  profile.levels.reserve(model.stakeholders.size());
  for (const auto& s : model.stakeholders) {
    auto& row = profile.levels.emplace_back();
    row.reserve(model.threats.size());
    for (const auto& t : model.threats) row.push_back(impact_level(model, s.id, t.id));
  }
  return profile;
}

GoalWeights goal_weights(const RiskModel& model) {
  GoalWeights w;
  w.threats_per_goal.assign(model.goals.size(), 0);
  int total = 0;
  for (const auto& t : model.threats) {
    w.affected_goals.push_back(static_cast<int>(t.goals.size()));
    total += static_cast<int>(t.goals.size());
    for (const auto& g : t.goals) ++w.threats_per_goal[model.goal_index(g)];
  }
  if (total == 0) throw ModelError("threats", "no threat affects any goal");

  for (std::size_t t = 0; t < model.threats.size(); ++t) {
    w.observation.emplace_back(w.affected_goals[t], total);
    Rational spread;
    for (const auto& g : model.threats[t].goals) {
      spread += Rational(1, w.threats_per_goal[model.goal_index(g)]);
    }
    w.spread.push_back(spread);
  }
  return w;
}

Rational observation_weight(const RiskModel& model, std::string_view threat) {
  return goal_weights(model).observation.at(model.threat_index(threat));
}

namespace {

void check_size(const RiskModel& model, const ResidueVector& residues) {
  if (residues.size() != model.threats.size()) {
    throw std::invalid_argument("residue vector has " + std::to_string(residues.size()) +
                                " entries for " + std::to_string(model.threats.size()) + " threats");
  }
}

std::vector<Rational> ntc_with(const GoalWeights& w, const ResidueVector& residues) {
  Rational denominator;
  for (std::size_t t = 0; t < residues.size(); ++t) denominator += w.observation[t] * residues[t];
  if (denominator.is_zero()) throw std::domain_error("threat criticality undefined: every weighted residue is zero");
  std::vector<Rational> out;
  out.reserve(residues.size());
  for (std::size_t t = 0; t < residues.size(); ++t) {
    out.push_back(w.observation[t] * residues[t] / denominator);
  }
  return out;
}

std::vector<GoalAverage> goal_averages(const RiskModel& model, const GoalWeights& w,
                                       const ImpactProfile& impacts, const std::vector<Rational>& crit) {
  std::vector<GoalAverage> out;
  for (std::size_t g = 0; g < model.goals.size(); ++g) {
    if (w.threats_per_goal[g] == 0) continue;
    GoalAverage avg{model.goals[g].id, std::vector<Rational>(model.stakeholders.size())};
    for (std::size_t t = 0; t < model.threats.size(); ++t) {
      bool affects = false;
      for (const auto& id : model.threats[t].goals) affects = affects || id == model.goals[g].id;
      if (!affects) continue;
      for (std::size_t s = 0; s < model.stakeholders.size(); ++s) {
        avg.per_stakeholder[s] += crit[t] * impacts.at(s, t);
      }
    }
    for (auto& v : avg.per_stakeholder) v /= Rational(w.threats_per_goal[g]);
    out.push_back(std::move(avg));
  }
  return out;
}

ObjectivePoint sum_averages(std::size_t stakeholders, const std::vector<GoalAverage>& averages) {
  ObjectivePoint p{std::vector<Rational>(stakeholders)};
  for (const auto& avg : averages) {
    for (std::size_t s = 0; s < stakeholders; ++s) p.values[s] += avg.per_stakeholder[s];
  }
  return p;
}

}  // namespace

std::vector<Rational> ntc(const RiskModel& model, const ResidueVector& residues) {
  check_size(model, residues);
  return ntc_with(goal_weights(model), residues);
}

ObjectivePoint objective_criteria(const RiskModel& model, const ResidueVector& residues) {
  check_size(model, residues);
  const ImpactProfile impacts = impact_profile(model);
  ObjectivePoint p{std::vector<Rational>(model.stakeholders.size())};
  for (std::size_t s = 0; s < model.stakeholders.size(); ++s) {
    for (std::size_t t = 0; t < residues.size(); ++t) p.values[s] += impacts.at(s, t) * residues[t];
  }
  return p;
}

ObjectivePoint objective_goals(const RiskModel& model, const ResidueVector& residues) {
  check_size(model, residues);
  const GoalWeights w = goal_weights(model);
  const ImpactProfile impacts = impact_profile(model);
  return sum_averages(model.stakeholders.size(),
                      goal_averages(model, w, impacts, ntc_with(w, residues)));
}

ObjectivePoint objective_goals_ratio(const RiskModel& model, const ResidueVector& residues) {
  check_size(model, residues);
  const GoalWeights w = goal_weights(model);
  const ImpactProfile impacts = impact_profile(model);
  Rational denominator;
  for (std::size_t t = 0; t < residues.size(); ++t) denominator += w.observation[t] * residues[t];
  if (denominator.is_zero()) throw std::domain_error("threat criticality undefined: every weighted residue is zero");
  ObjectivePoint p{std::vector<Rational>(model.stakeholders.size())};
  for (std::size_t s = 0; s < model.stakeholders.size(); ++s) {
    Rational numerator;
    for (std::size_t t = 0; t < residues.size(); ++t) {
      numerator += w.observation[t] * w.spread[t] * impacts.at(s, t) * residues[t];
    }
    p.values[s] = numerator / denominator;
  }
  return p;
}

ObjectivePoint objective(const RiskModel& model, const ResidueVector& residues, ScoringMode mode) {
  return mode == ScoringMode::criteria ? objective_criteria(model, residues)
                                       : objective_goals_ratio(model, residues);
}

ObjectiveFunction::ObjectiveFunction(const RiskModel& model, ScoringMode mode)
    : mode_(mode), threats_(model.threats.size()) {
  const ImpactProfile impacts = impact_profile(model);
  std::optional<GoalWeights> w;
  if (mode == ScoringMode::goals) w = goal_weights(model);
  for (std::size_t s = 0; s < model.stakeholders.size(); ++s) {
    auto& row = numerator_.emplace_back();
    for (std::size_t t = 0; t < threats_; ++t) {
      row.push_back(w ? w->observation[t] * w->spread[t] * impacts.at(s, t) : impacts.at(s, t));
    }
  }
  if (w) denominator_ = w->observation;
}

ObjectivePoint ObjectiveFunction::operator()(const ResidueVector& residues) const {
  if (residues.size() != threats_) {
    throw std::invalid_argument("residue vector has " + std::to_string(residues.size()) + " entries for " +
                                std::to_string(threats_) + " threats");
  }
  ObjectivePoint p;
  for (const auto& row : numerator_) {
    Rational v;
    for (std::size_t t = 0; t < threats_; ++t) v += row[t] * residues[t];
    p.values.push_back(std::move(v));
  }
  if (mode_ == ScoringMode::goals) {
    Rational d;
    for (std::size_t t = 0; t < threats_; ++t) d += denominator_[t] * residues[t];
    if (d.is_zero()) throw std::domain_error("threat criticality undefined: every weighted residue is zero");
    for (auto& v : p.values) v /= d;
  }
  return p;
}

Assessment assess(const RiskModel& model, std::span<const MitigationAssignment> assignment,
                  ScoringMode mode) {
  Assessment a;
  a.mode = mode;
  a.residues.assign(model.threats.size(), Rational(1));
  std::vector<bool> seen(model.threats.size(), false);
  for (const auto& entry : assignment) {
    std::size_t t = 0;
    try {
      t = model.threat_index(entry.threat_id);
    } catch (const std::out_of_range&) {
      throw ModelError("assignment." + entry.threat_id, "unknown threat");
    }
    if (seen[t]) throw ModelError("assignment." + entry.threat_id, "threat assigned twice");
    seen[t] = true;
    a.residues[t] = residue_of_assignment(model, entry.threat_id, entry);
  }
  std::vector<Diagnostic> missing;
  for (std::size_t t = 0; t < model.threats.size(); ++t) {
    if (!seen[t] && !model.threats[t].controls.empty()) {
      missing.push_back({"assignment." + model.threats[t].id, "no mitigation levels given"});
    }
  }
  if (!missing.empty()) throw ModelError(std::move(missing));

  a.impacts = impact_profile(model);
  if (mode == ScoringMode::goals) {
    const GoalWeights w = goal_weights(model);
    a.ntc = ntc_with(w, a.residues);
    a.goal_averages = goal_averages(model, w, a.impacts, a.ntc);
    a.objectives = sum_averages(model.stakeholders.size(), a.goal_averages);
  } else {
    a.objectives = objective_criteria(model, a.residues);
  }
  return a;
}

}  // namespace msrmp
