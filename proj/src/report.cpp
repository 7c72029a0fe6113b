#include "msrmp/report.hpp"

#include "msrmp/residue.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace msrmp {

namespace {

using json = nlohmann::ordered_json;

json number(const Rational& r, int precision) {
  return json{{"exact", r.to_string()}, {"decimal", r.to_decimal(precision)}};
}

json keyed_number(const char* key, const std::string& id, const Rational& r, int precision) {
  return json{{key, id}, {"exact", r.to_string()}, {"decimal", r.to_decimal(precision)}};
}

json per_stakeholder(const RiskModel& model, const std::vector<Rational>& values, int precision) {
  json out = json::array();
  for (std::size_t s = 0; s < values.size(); ++s) {
    out.push_back(keyed_number("stakeholder", model.stakeholders[s].id, values[s], precision));
  }
  return out;
}

json per_threat(const RiskModel& model, const std::vector<Rational>& values, int precision) {
  json out = json::array();
  for (std::size_t t = 0; t < values.size(); ++t) {
    out.push_back(keyed_number("threat", model.threats[t].id, values[t], precision));
  }
  return out;
}

json residue_object(const RiskModel& model, const ResidueVector& x) {
  json out = json::object();
  for (std::size_t t = 0; t < x.size(); ++t) out[model.threats[t].id] = render_exact(x[t]);
  return out;
}

json rmp_json(const RiskModel& model, const RmpEnumeration& rmps, int precision) {
  json doc;
  doc["target"] = residue_object(model, rmps.target);
  doc["total"] = to_string(rmps.total);
  doc["truncated"] = rmps.truncated;
  json threats = json::array();
  for (std::size_t t = 0; t < rmps.assignments.size(); ++t) {
    const Threat& threat = model.threats[t];
    json entry;
    entry["id"] = threat.id;
    entry["residue"] = number(rmps.target[t], precision);
    entry["count"] = to_string(rmps.counts[t]);
    json list = json::array();
    for (const auto& a : rmps.assignments[t]) {
      json levels = json::object();
      for (std::size_t c = 0; c < a.levels.size(); ++c) levels[threat.controls[c].id] = render_exact(a.levels[c]);
      list.push_back(std::move(levels));
    }
    entry["assignments"] = std::move(list);
    threats.push_back(std::move(entry));
  }
  doc["threats"] = std::move(threats);
  return doc;
}

std::string finish(const json& doc) { return doc.dump(2) + "\n"; }

std::vector<std::optional<Rational>> bounds_of(const RiskModel& model, const SolveConfig& cfg) {
  std::vector<std::optional<Rational>> bounds(model.stakeholders.size());
  for (const auto& lb : cfg.lower_bounds) bounds[model.stakeholder_index(lb.stakeholder)] = lb.value;
  return bounds;
}

bool within(const ObjectivePoint& p, const std::vector<std::optional<Rational>>& bounds, bool exclusive) {
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (bounds[s] && (exclusive ? !(p[s] > *bounds[s]) : !(p[s] >= *bounds[s]))) return false;
  }
  return true;
}

std::set<std::uint64_t> front_ordinals(const ResidueSpace& space, const ParetoFront& front) {
  std::set<std::uint64_t> out;
  std::vector<std::uint32_t> digits(space.dimension());
  for (const auto& e : front.entries) {
    for (const auto& x : e.residues) {
      for (std::size_t t = 0; t < x.size(); ++t) {
        const std::size_t j = space.sets()[t].find(x[t]);
        if (j == ResidueSet::npos) throw std::invalid_argument("front residue outside the residue space");
        digits[t] = static_cast<std::uint32_t>(j);
      }
      out.insert(space.ordinal_of(digits));
    }
  }
  return out;
}

// Calls visit(ordinal, point) for every feasible point.
template <class Visit>
void for_each_feasible(const RiskModel& model, const SolveConfig& cfg, Visit&& visit) {
  check_config(model, cfg);
  const ResidueSpace space(model);
  const ObjectiveFunction f(model, cfg.mode);
  const auto bounds = bounds_of(model, cfg);
  for (PointCursor cursor(space, 0, space.size()); !cursor.done(); cursor.advance()) {
    const ObjectivePoint p = f(cursor.residues());
    if (within(p, bounds, cfg.exclusive_bounds)) visit(cursor.ordinal(), p);
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string count_document(const RiskModel& model) {
  json doc;
  json threats = json::array();
  const ResidueSpace space(model);
  for (std::size_t t = 0; t < model.threats.size(); ++t) {
    RiskModel single;
    single.scale = model.scale;
    single.threats = {model.threats[t]};
    threats.push_back(json{{"id", model.threats[t].id},
                           {"controls", model.threats[t].controls.size()},
                           {"residues", space.sets()[t].size()},
                           {"raw", to_string(count_raw(single))}});
  }
  const BigInt raw = count_raw(model);
  doc["threats"] = std::move(threats);
  doc["raw_count"] = to_string(raw);
  doc["reduced_count"] = to_string(space.reduced_count());
  const Rational factor(raw, space.reduced_count());
  doc["reduction_factor"] = number(factor, 4);
  return finish(doc);
}

std::string assessment_document(const RiskModel& model, const Assessment& a, const RenderOptions& options) {
  const int p = options.precision;
  json doc;
  doc["mode"] = std::string(to_string(a.mode));
  doc["residues"] = per_threat(model, a.residues, p);
  json impacts = json::array();
  for (std::size_t s = 0; s < model.stakeholders.size(); ++s) {
    impacts.push_back(json{{"stakeholder", model.stakeholders[s].id},
                           {"threats", per_threat(model, a.impacts.levels[s], p)}});
  }
  doc["impacts"] = std::move(impacts);
  if (a.mode == ScoringMode::goals) {
    doc["ntc"] = per_threat(model, a.ntc, p);
    json goals = json::array();
    for (const auto& g : a.goal_averages) {
      goals.push_back(json{{"goal", g.goal_id}, {"values", per_stakeholder(model, g.per_stakeholder, p)}});
    }
    doc["goal_averages"] = std::move(goals);
  }
  doc["objectives"] = per_stakeholder(model, a.objectives.values, p);
  if (options.seconds) doc["seconds"] = *options.seconds;
  return finish(doc);
}

std::string front_document(const RiskModel& model, const SolveConfig& cfg, const SolveResult& result,
                           const RenderOptions& options, const std::vector<std::vector<RmpEnumeration>>* rmps) {
  const int p = options.precision;
  json doc;
  // Only settings that determine the result; strategy, chunk size and threads
  // are left out so those runs produce identical documents.
  json config;
  config["mode"] = std::string(to_string(cfg.mode));
  json bounds = json::array();
  for (const auto& lb : cfg.lower_bounds) {
    bounds.push_back(json{{"stakeholder", lb.stakeholder}, {"value", render_exact(lb.value)}});
  }
  config["lower_bounds"] = std::move(bounds);
  config["exclusive_bounds"] = cfg.exclusive_bounds;
  doc["config"] = std::move(config);
  doc["status"] = std::string(to_string(result.status));
  doc["counts"] = json{{"reduced", to_string(count_reduced(model))},
                       {"evaluated", std::to_string(result.evaluated)},
                       {"feasible", std::to_string(result.feasible)}};
  json entries = json::array();
  for (std::size_t i = 0; i < result.front.entries.size(); ++i) {
    const FrontEntry& e = result.front.entries[i];
    json entry;
    entry["objectives"] = per_stakeholder(model, e.point.values, p);
    json residues = json::array();
    for (const auto& x : e.residues) residues.push_back(residue_object(model, x));
    entry["residues"] = std::move(residues);
    if (rmps != nullptr) {
      BigInt total = 0;
      json list = json::array();
      for (const auto& r : rmps->at(i)) {
        total += r.total;
        list.push_back(rmp_json(model, r, p));
      }
      entry["rmp_count"] = to_string(total);
      entry["rmps"] = std::move(list);
    }
    entries.push_back(std::move(entry));
  }
  doc["front"] = std::move(entries);
  if (options.seconds) doc["seconds"] = *options.seconds;
  return finish(doc);
}

std::string rmp_document(const RiskModel& model, const RmpEnumeration& rmps, const RenderOptions& options) {
  return finish(rmp_json(model, rmps, options.precision));
}

std::string plot_csv(const RiskModel& model, const SolveConfig& cfg, const ParetoFront& front, int precision) {
  const ResidueSpace space(model);
  const auto pareto = front_ordinals(space, front);
  std::string out = "ordinal";
  for (const auto& s : model.stakeholders) out += "," + s.id;
  out += ",pareto\n";
  for_each_feasible(model, cfg, [&](std::uint64_t ordinal, const ObjectivePoint& p) {
    out += std::to_string(ordinal);
    for (const auto& v : p.values) out += "," + v.to_decimal(precision);
    out += pareto.contains(ordinal) ? ",1\n" : ",0\n";
  });
  return out;
}

std::string plot_svg(const RiskModel& model, const SolveConfig& cfg, const ParetoFront& front) {
  if (model.stakeholders.size() != 2) {
    throw std::invalid_argument("scatter export needs exactly 2 stakeholders, model has " +
                                std::to_string(model.stakeholders.size()));
  }
  const ResidueSpace space(model);
  const auto pareto = front_ordinals(space, front);
  std::vector<std::pair<double, double>> cloud;
  std::vector<std::pair<double, double>> best;
  for_each_feasible(model, cfg, [&](std::uint64_t ordinal, const ObjectivePoint& p) {
    (pareto.contains(ordinal) ? best : cloud).emplace_back(p[0].to_double(), p[1].to_double());
  });

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!cloud.empty() || !best.empty()) {
    x0 = y0 = 1e300;
    x1 = y1 = -1e300;
    for (const auto* pts : {&cloud, &best}) {
      for (const auto& [x, y] : *pts) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
  }
  const double w = 640, h = 480, m = 50;
  auto sx = [&](double x) { return m + (x - x0) / (x1 - x0) * (w - 2 * m); };
  auto sy = [&](double y) { return h - m - (y - y0) / (y1 - y0) * (h - 2 * m); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  svg << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg << "<line x1=\"50\" y1=\"430\" x2=\"590\" y2=\"430\" stroke=\"black\"/>\n";
  svg << "<line x1=\"50\" y1=\"50\" x2=\"50\" y2=\"430\" stroke=\"black\"/>\n";
  svg << "<text x=\"320\" y=\"465\" text-anchor=\"middle\" font-size=\"12\">oir(" << model.stakeholders[0].id
      << ")</text>\n";
  svg << "<text x=\"15\" y=\"240\" font-size=\"12\" transform=\"rotate(-90 15 240)\" text-anchor=\"middle\">oir("
      << model.stakeholders[1].id << ")</text>\n";
  svg << "<text x=\"50\" y=\"445\" font-size=\"10\">" << fmt(x0) << "</text>\n";
  svg << "<text x=\"590\" y=\"445\" font-size=\"10\" text-anchor=\"end\">" << fmt(x1) << "</text>\n";
  svg << "<text x=\"45\" y=\"430\" font-size=\"10\" text-anchor=\"end\">" << fmt(y0) << "</text>\n";
  svg << "<text x=\"45\" y=\"55\" font-size=\"10\" text-anchor=\"end\">" << fmt(y1) << "</text>\n";
  for (const auto& [x, y] : cloud) {
    svg << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y)) << "\" r=\"1.5\" fill=\"#9aa5b1\"/>\n";
  }
  for (const auto& [x, y] : best) {
    svg << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y)) << "\" r=\"4\" fill=\"#2e8b57\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

ResidueVector parse_residues(const RiskModel& model, const std::string& text) {
  ResidueVector out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string item = text.substr(start, comma - start);
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    out.push_back(Rational::parse(item));
    start = comma + 1;
  }
  if (out.size() != model.threats.size()) {
    throw std::invalid_argument("expected " + std::to_string(model.threats.size()) + " residues, got " +
                                std::to_string(out.size()));
  }
  return out;
}

}  // namespace msrmp
