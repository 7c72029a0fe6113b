#ifndef MSRMP_REPORT_HPP
#define MSRMP_REPORT_HPP

#include "msrmp/impact.hpp"
#include "msrmp/mapback.hpp"
#include "msrmp/model.hpp"
#include "msrmp/pareto.hpp"

#include <optional>
#include <string>
#include <vector>

namespace msrmp {

// Output documents. Keys appear in a fixed order and numbers are strings: an
// exact fraction plus a half-even decimal at `precision` places, so identical
// inputs give identical bytes.

struct RenderOptions {
  int precision = 4;
  /// Wall-clock seconds to report; left out of the document when empty.
  std::optional<double> seconds;
};

std::string count_document(const RiskModel& model);

std::string assessment_document(const RiskModel& model, const Assessment& assessment,
                                const RenderOptions& options = {});

/// `rmps`, when given, holds one enumeration per residue vector of every entry,
/// in entry order.
std::string front_document(const RiskModel& model, const SolveConfig& cfg, const SolveResult& result,
                           const RenderOptions& options = {},
                           const std::vector<std::vector<RmpEnumeration>>* rmps = nullptr);

std::string rmp_document(const RiskModel& model, const RmpEnumeration& rmps, const RenderOptions& options = {});

/// One row per feasible point of the residue space, in enumeration order:
/// ordinal, one decimal column per stakeholder, and a pareto flag (1 when the
/// residue vector belongs to a front entry). Header only when nothing is feasible.
std::string plot_csv(const RiskModel& model, const SolveConfig& cfg, const ParetoFront& front,
                     int precision = 4);

/// Scatter of the feasible points with the front highlighted. Throws
/// std::invalid_argument unless the model has exactly two stakeholders.
std::string plot_svg(const RiskModel& model, const SolveConfig& cfg, const ParetoFront& front);

/// Parses a comma-separated residue list ("1,1/20,0.125") against the model's threats.
ResidueVector parse_residues(const RiskModel& model, const std::string& text);

}  // namespace msrmp

#endif  // MSRMP_REPORT_HPP
