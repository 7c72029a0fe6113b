#ifndef MSRMP_MODEL_HPP
#define MSRMP_MODEL_HPP

#include "msrmp/rational.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace msrmp {

struct ProtectionCriterion {
  std::string id;
  std::string name;
  Rational weight;

  friend bool operator==(const ProtectionCriterion&, const ProtectionCriterion&) = default;
};

struct Stakeholder {
  std::string id;
  std::string name;
  std::vector<ProtectionCriterion> criteria;

  friend bool operator==(const Stakeholder&, const Stakeholder&) = default;
};

struct Control {
  std::string id;
  std::string name;

  friend bool operator==(const Control&, const Control&) = default;
};

/// A threat with its candidate controls. The same semantic control may be listed
/// under several threats; each occurrence is an independent decision variable.
struct Threat {
  std::string id;
  std::string name;
  std::vector<Control> controls;
  std::vector<std::string> goals;

  friend bool operator==(const Threat&, const Threat&) = default;
};

struct Goal {
  std::string id;
  std::string name;

  friend bool operator==(const Goal&, const Goal&) = default;
};

/// The six data-protection goals used when a document does not list its own.
std::vector<Goal> default_goal_catalog();

/// Mitigation levels A (strictly increasing, 0 included) and the impact scale maximum.
struct MitigationScale {
  std::vector<Rational> levels{Rational(0), Rational(1, 2), Rational(1)};
  int impact_scale_max = 4;

  [[nodiscard]] const Rational& max_level() const { return levels.back(); }
  [[nodiscard]] bool contains(const Rational& level) const;

  friend bool operator==(const MitigationScale&, const MitigationScale&) = default;
};

/// stakeholder id -> criterion id -> threat id -> aversion level in [0, impact_scale_max].
using AversionTable = std::map<std::string, std::map<std::string, std::map<std::string, int>>>;

/// threat id -> control id -> mitigation level, as written in an input document.
using AssignmentTable = std::map<std::string, std::map<std::string, Rational>>;

/// Mitigation levels for the controls of one threat, in the threat's control order.
struct MitigationAssignment {
  std::string threat_id;
  std::vector<Rational> levels;

  friend bool operator==(const MitigationAssignment&, const MitigationAssignment&) = default;
};

enum class ScoringMode { criteria, goals };

std::string_view to_string(ScoringMode mode);
/// Accepts "criteria" or "goals"; throws std::invalid_argument otherwise.
ScoringMode parse_scoring_mode(std::string_view text);

/// A complete risk-model instance. Threat and stakeholder order are those of the
/// source document and define the layout of every residue and objective vector.
struct RiskModel {
  std::vector<Stakeholder> stakeholders;
  std::vector<Goal> goals = default_goal_catalog();
  std::vector<Threat> threats;
  AversionTable aversion;
  MitigationScale scale;
  std::optional<AssignmentTable> assignment;

  /// Throws std::out_of_range for unknown ids.
  [[nodiscard]] std::size_t stakeholder_index(std::string_view id) const;
  [[nodiscard]] std::size_t threat_index(std::string_view id) const;
  [[nodiscard]] std::size_t goal_index(std::string_view id) const;

  /// Throws std::out_of_range when the triple has no entry.
  [[nodiscard]] int aversion_level(const std::string& stakeholder, const std::string& criterion,
                                   const std::string& threat) const;

  [[nodiscard]] std::size_t control_count() const;

  friend bool operator==(const RiskModel&, const RiskModel&) = default;
};

/// One validation finding, addressed by a JSON-path-like string such as
/// "stakeholders[0].criteria[2].weight".
struct Diagnostic {
  std::string path;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics);

/// Raised when a model violates its invariants. Carries every diagnostic found.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(std::vector<Diagnostic> diagnostics);
  ModelError(std::string path, std::string message);

  [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Raised for malformed documents: JSON syntax errors (with byte offset) and
/// values of the wrong shape.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& message, std::optional<std::size_t> offset = {});

  [[nodiscard]] const std::string& path() const { return path_; }
  [[nodiscard]] std::optional<std::size_t> offset() const { return offset_; }

 private:
  std::string path_;
  std::optional<std::size_t> offset_;
};

/// Builds a model from a document without checking cross-references or value ranges.
RiskModel parse_model_unchecked(std::string_view document);

/// Parses and validates (criteria-mode invariants). Throws ParseError or ModelError.
RiskModel parse_model(std::string_view document);

RiskModel load_model(const std::filesystem::path& path);

/// Empty iff every model invariant holds. Goals mode additionally requires every
/// threat to affect at least one goal.
std::vector<Diagnostic> validate_model(const RiskModel& model,
                                       ScoringMode mode = ScoringMode::criteria);

/// Terminating decimal when one exists ("0.725"), else the fraction ("5/6").
std::string render_exact(const Rational& r);

/// Canonical document form: fixed key order, exact decimal strings.
std::string render_model(const RiskModel& model);

/// The fixed assignment of the model in threat order. Throws ModelError when the
/// model has none or it does not cover every control.
std::vector<MitigationAssignment> fixed_assignment(const RiskModel& model);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace msrmp

#endif  // MSRMP_MODEL_HPP
