#include "msrmp/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace msrmp {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<Goal> default_goal_catalog() {
  return {
      {"G1", "Confidentiality"},
      {"G2", "Integrity"},
      {"G3", "Availability"},
      {"G4", "Unlinkability & Data minimization"},
      {"G5", "Transparency"},
      {"G6", "Intervenability"},
  };
}

bool MitigationScale::contains(const Rational& level) const {
  return std::binary_search(levels.begin(), levels.end(), level);
}

std::string_view to_string(ScoringMode mode) {
  return mode == ScoringMode::criteria ? "criteria" : "goals";
}

ScoringMode parse_scoring_mode(std::string_view text) {
  if (text == "criteria") return ScoringMode::criteria;
  if (text == "goals") return ScoringMode::goals;
  throw std::invalid_argument("unknown scoring mode: " + std::string(text));
}

namespace {

template <typename Items>
std::size_t index_of(const Items& items, std::string_view id, const char* what) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) return i;
  }
  throw std::out_of_range(std::string("unknown ") + what + " id: " + std::string(id));
}

}  // namespace

std::string render_exact(const Rational& r) {
  if (auto decimal = r.exact_decimal()) return *decimal;
  return r.to_string();
}

std::size_t RiskModel::stakeholder_index(std::string_view id) const {
  return index_of(stakeholders, id, "stakeholder");
}

std::size_t RiskModel::threat_index(std::string_view id) const {
  return index_of(threats, id, "threat");
}

std::size_t RiskModel::goal_index(std::string_view id) const { return index_of(goals, id, "goal"); }

int RiskModel::aversion_level(const std::string& stakeholder, const std::string& criterion,
                              const std::string& threat) const {
  return aversion.at(stakeholder).at(criterion).at(threat);
}

std::size_t RiskModel::control_count() const {
  std::size_t total = 0;
  for (const auto& t : threats) total += t.controls.size();
  return total;
}

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::ostringstream os;
  for (std::size_t i = 0; i < diagnostics.size(); ++i) {
    if (i != 0) os << '\n';
    os << diagnostics[i].path << ": " << diagnostics[i].message;
  }
  return os.str();
}

ModelError::ModelError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error("invalid risk model:\n" + format_diagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

ModelError::ModelError(std::string path, std::string message)
    : ModelError(std::vector<Diagnostic>{{std::move(path), std::move(message)}}) {}

ParseError::ParseError(std::string path, const std::string& message, std::optional<std::size_t> offset)
    : std::runtime_error((path.empty() ? std::string() : path + ": ") + message),
      path_(std::move(path)),
      offset_(offset) {}

// ---------------------------------------------------------------------------
// Parsing

namespace {

const json& require(const json& object, const char* key, const std::string& path) {
  auto it = object.find(key);
  if (it == object.end()) throw ParseError(path, std::string("missing required key \"") + key + "\"");
  return *it;
}

std::string string_at(const json& value, const std::string& path) {
  if (!value.is_string()) throw ParseError(path, "expected a string");
  return value.get<std::string>();
}

Rational rational_at(const json& value, const std::string& path) {
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_number_float()) {
    throw ParseError(path, "decimal values must be written as strings (e.g. \"0.4\") to stay exact");
  }
  if (!value.is_string()) throw ParseError(path, "expected an exact decimal string");
  try {
    return Rational::parse(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, e.what());
  }
}

int integer_at(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ParseError(path, "expected an integer");
  const auto v = value.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ParseError(path, "integer out of range");
  }
  return static_cast<int>(v);
}

const json& array_at(const json& value, const std::string& path) {
  if (!value.is_array()) throw ParseError(path, "expected an array");
  return value;
}

const json& object_at(const json& value, const std::string& path) {
  if (!value.is_object()) throw ParseError(path, "expected an object");
  return value;
}

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

std::string optional_name(const json& object, const std::string& path) {
  auto it = object.find("name");
  return it == object.end() ? std::string() : string_at(*it, path + ".name");
}

}  // namespace

RiskModel parse_model_unchecked(std::string_view document) {
  json root;
  try {
    root = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("syntax error: ") + e.what(), e.byte);
  }
  object_at(root, "$");

  RiskModel model;
  if (auto it = root.find("impact_scale_max"); it != root.end()) {
    model.scale.impact_scale_max = integer_at(*it, "impact_scale_max");
  }
  if (auto it = root.find("mitigation_levels"); it != root.end()) {
    model.scale.levels.clear();
    const auto& levels = array_at(*it, "mitigation_levels");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      model.scale.levels.push_back(rational_at(levels[i], indexed("mitigation_levels", i)));
    }
  }

  const auto& stakeholders = array_at(require(root, "stakeholders", "$"), "stakeholders");
  for (std::size_t i = 0; i < stakeholders.size(); ++i) {
    const std::string path = indexed("stakeholders", i);
    const auto& s = object_at(stakeholders[i], path);
    Stakeholder stakeholder{string_at(require(s, "id", path), path + ".id"), optional_name(s, path), {}};
    const auto& criteria = array_at(require(s, "criteria", path), path + ".criteria");
    for (std::size_t j = 0; j < criteria.size(); ++j) {
      const std::string cpath = indexed(path + ".criteria", j);
      const auto& c = object_at(criteria[j], cpath);
      stakeholder.criteria.push_back({string_at(require(c, "id", cpath), cpath + ".id"),
                                      optional_name(c, cpath),
                                      rational_at(require(c, "weight", cpath), cpath + ".weight")});
    }
    model.stakeholders.push_back(std::move(stakeholder));
  }

  if (auto it = root.find("goals"); it != root.end()) {
    model.goals.clear();
    const auto& goals = array_at(*it, "goals");
    for (std::size_t i = 0; i < goals.size(); ++i) {
      const std::string path = indexed("goals", i);
      const auto& g = object_at(goals[i], path);
      model.goals.push_back({string_at(require(g, "id", path), path + ".id"), optional_name(g, path)});
    }
  }

  const auto& threats = array_at(require(root, "threats", "$"), "threats");
  for (std::size_t i = 0; i < threats.size(); ++i) {
    const std::string path = indexed("threats", i);
    const auto& t = object_at(threats[i], path);
    Threat threat{string_at(require(t, "id", path), path + ".id"), optional_name(t, path), {}, {}};
    if (auto git = t.find("goals"); git != t.end()) {
      const auto& goals = array_at(*git, path + ".goals");
      for (std::size_t j = 0; j < goals.size(); ++j) {
        threat.goals.push_back(string_at(goals[j], indexed(path + ".goals", j)));
      }
    }
    const auto& controls = array_at(require(t, "controls", path), path + ".controls");
    for (std::size_t j = 0; j < controls.size(); ++j) {
      const std::string cpath = indexed(path + ".controls", j);
      const auto& c = object_at(controls[j], cpath);
      threat.controls.push_back({string_at(require(c, "id", cpath), cpath + ".id"), optional_name(c, cpath)});
    }
    model.threats.push_back(std::move(threat));
  }

  const auto& aversion = object_at(require(root, "aversion", "$"), "aversion");
  for (const auto& [sid, per_criterion] : aversion.items()) {
    const std::string spath = "aversion." + sid;
    for (const auto& [pid, per_threat] : object_at(per_criterion, spath).items()) {
      const std::string ppath = spath + "." + pid;
      for (const auto& [tid, level] : object_at(per_threat, ppath).items()) {
        model.aversion[sid][pid][tid] = integer_at(level, ppath + "." + tid);
      }
    }
  }

  if (auto it = root.find("assignment"); it != root.end() && !it->is_null()) {
    AssignmentTable table;
    for (const auto& [tid, per_control] : object_at(*it, "assignment").items()) {
      const std::string tpath = "assignment." + tid;
      auto& row = table[tid];
      for (const auto& [cid, level] : object_at(per_control, tpath).items()) {
        row.emplace(cid, rational_at(level, tpath + "." + cid));
      }
    }
    model.assignment = std::move(table);
  }
  return model;
}

RiskModel parse_model(std::string_view document) {
  RiskModel model = parse_model_unchecked(document);
  if (auto diagnostics = validate_model(model); !diagnostics.empty()) {
    throw ModelError(std::move(diagnostics));
  }
  return model;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RiskModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

// ---------------------------------------------------------------------------
// Validation

namespace {

class DiagnosticSink {
 public:
  void error(std::string path, std::string message) {
    out_.push_back({std::move(path), std::move(message)});
  }
  std::vector<Diagnostic> take() { return std::move(out_); }

 private:
  std::vector<Diagnostic> out_;
};

template <typename Items>
void check_unique_ids(const Items& items, const std::string& base, DiagnosticSink& sink) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id.empty()) sink.error(indexed(base, i) + ".id", "id must not be empty");
    if (!seen.insert(items[i].id).second) {
      sink.error(indexed(base, i) + ".id", "duplicate id \"" + items[i].id + "\"");
    }
  }
}

void validate_scale(const MitigationScale& scale, DiagnosticSink& sink) {
  if (scale.impact_scale_max < 1) sink.error("impact_scale_max", "must be at least 1");
  const auto& levels = scale.levels;
  if (levels.empty()) {
    sink.error("mitigation_levels", "must not be empty");
    return;
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < Rational(0) || levels[i] > Rational(1)) {
      sink.error(indexed("mitigation_levels", i), "level " + levels[i].to_string() + " outside [0, 1]");
    }
    if (i > 0 && !(levels[i - 1] < levels[i])) {
      sink.error(indexed("mitigation_levels", i), "levels must be strictly increasing");
    }
  }
  if (std::find(levels.begin(), levels.end(), Rational(0)) == levels.end()) {
    sink.error("mitigation_levels", "must contain 0");
  }
  if (!(*std::max_element(levels.begin(), levels.end()) > Rational(0))) {
    sink.error("mitigation_levels", "largest level must be positive");
  }
}

void validate_stakeholders(const RiskModel& model, DiagnosticSink& sink) {
  if (model.stakeholders.empty()) sink.error("stakeholders", "at least one stakeholder is required");
  check_unique_ids(model.stakeholders, "stakeholders", sink);
  for (std::size_t i = 0; i < model.stakeholders.size(); ++i) {
    const auto& s = model.stakeholders[i];
    const std::string path = indexed("stakeholders", i);
    check_unique_ids(s.criteria, path + ".criteria", sink);
    Rational total;
    for (std::size_t j = 0; j < s.criteria.size(); ++j) {
      const auto& w = s.criteria[j].weight;
      if (w < Rational(0) || w > Rational(1)) {
        sink.error(indexed(path + ".criteria", j) + ".weight", "weight " + w.to_string() + " outside [0, 1]");
      }
      total += w;
    }
    if (total != Rational(1)) {
      sink.error(path + ".criteria", "criterion weights sum to " + render_exact(total) + ", expected exactly 1");
    }
  }
}

void validate_threats(const RiskModel& model, ScoringMode mode, DiagnosticSink& sink) {
  if (model.threats.empty()) sink.error("threats", "at least one threat is required");
  check_unique_ids(model.goals, "goals", sink);
  check_unique_ids(model.threats, "threats", sink);
  std::set<std::string> goal_ids;
  for (const auto& g : model.goals) goal_ids.insert(g.id);

  for (std::size_t i = 0; i < model.threats.size(); ++i) {
    const auto& t = model.threats[i];
    const std::string path = indexed("threats", i);
    check_unique_ids(t.controls, path + ".controls", sink);
    std::set<std::string> seen;
    for (std::size_t j = 0; j < t.goals.size(); ++j) {
      const std::string gpath = indexed(path + ".goals", j);
      if (!goal_ids.contains(t.goals[j])) sink.error(gpath, "unknown goal \"" + t.goals[j] + "\"");
      if (!seen.insert(t.goals[j]).second) sink.error(gpath, "goal \"" + t.goals[j] + "\" listed twice");
    }
    if (mode == ScoringMode::goals && t.goals.empty()) {
      sink.error(path + ".goals", "goal-weighted scoring needs every threat to affect at least one goal");
    }
  }
}

void validate_aversion(const RiskModel& model, DiagnosticSink& sink) {
  for (const auto& [sid, per_criterion] : model.aversion) {
    const auto s = std::find_if(model.stakeholders.begin(), model.stakeholders.end(),
                                [&](const Stakeholder& x) { return x.id == sid; });
    if (s == model.stakeholders.end()) {
      sink.error("aversion." + sid, "unknown stakeholder \"" + sid + "\"");
      continue;
    }
    for (const auto& [pid, per_threat] : per_criterion) {
      const bool known = std::any_of(s->criteria.begin(), s->criteria.end(),
                                     [&](const ProtectionCriterion& c) { return c.id == pid; });
      if (!known) {
        sink.error("aversion." + sid + "." + pid, "unknown criterion \"" + pid + "\" for stakeholder \"" + sid + "\"");
        continue;
      }
      for (const auto& [tid, level] : per_threat) {
        const std::string path = "aversion." + sid + "." + pid + "." + tid;
        const bool threat_known = std::any_of(model.threats.begin(), model.threats.end(),
                                              [&](const Threat& t) { return t.id == tid; });
        if (!threat_known) sink.error(path, "unknown threat \"" + tid + "\"");
        if (level < 0 || level > model.scale.impact_scale_max) {
          sink.error(path, "aversion " + std::to_string(level) + " outside [0, " +
                               std::to_string(model.scale.impact_scale_max) + "]");
        }
      }
    }
  }
  for (const auto& s : model.stakeholders) {
    for (const auto& c : s.criteria) {
      for (const auto& t : model.threats) {
        bool present = false;
        if (auto a = model.aversion.find(s.id); a != model.aversion.end()) {
          if (auto b = a->second.find(c.id); b != a->second.end()) present = b->second.contains(t.id);
        }
        if (!present) sink.error("aversion." + s.id + "." + c.id + "." + t.id, "missing aversion entry");
      }
    }
  }
}

void validate_assignment(const RiskModel& model, DiagnosticSink& sink) {
  if (!model.assignment) return;
  for (const auto& [tid, per_control] : *model.assignment) {
    const auto t = std::find_if(model.threats.begin(), model.threats.end(),
                                [&](const Threat& x) { return x.id == tid; });
    if (t == model.threats.end()) {
      sink.error("assignment." + tid, "unknown threat \"" + tid + "\"");
      continue;
    }
    for (const auto& [cid, level] : per_control) {
      const std::string path = "assignment." + tid + "." + cid;
      const bool known = std::any_of(t->controls.begin(), t->controls.end(),
                                     [&](const Control& c) { return c.id == cid; });
      if (!known) sink.error(path, "unknown control \"" + cid + "\" for threat \"" + tid + "\"");
      if (!model.scale.contains(level)) {
        sink.error(path, "level " + level.to_string() + " is not a mitigation level");
      }
    }
  }
  for (const auto& t : model.threats) {
    auto row = model.assignment->find(t.id);
    bool all_max = !t.controls.empty();
    for (const auto& c : t.controls) {
      const Rational* level = nullptr;
      if (row != model.assignment->end()) {
        if (auto it = row->second.find(c.id); it != row->second.end()) level = &it->second;
      }
      if (level == nullptr) {
        sink.error("assignment." + t.id + "." + c.id, "missing mitigation level");
        all_max = false;
      } else if (*level != model.scale.max_level()) {
        all_max = false;
      }
    }
    if (all_max) {
      sink.error("assignment." + t.id, "every control at the maximum level is excluded from the model");
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate_model(const RiskModel& model, ScoringMode mode) {
  DiagnosticSink sink;
  validate_scale(model.scale, sink);
  validate_stakeholders(model, sink);
  validate_threats(model, mode, sink);
  validate_aversion(model, sink);
  validate_assignment(model, sink);
  return sink.take();
}

std::vector<MitigationAssignment> fixed_assignment(const RiskModel& model) {
  if (!model.assignment) throw ModelError("assignment", "the model has no fixed assignment");
  std::vector<Diagnostic> problems;
  std::vector<MitigationAssignment> out;
  for (const auto& t : model.threats) {
    MitigationAssignment a{t.id, {}};
    auto row = model.assignment->find(t.id);
    for (const auto& c : t.controls) {
      if (row == model.assignment->end() || !row->second.contains(c.id)) {
        problems.push_back({"assignment." + t.id + "." + c.id, "missing mitigation level"});
        continue;
      }
      a.levels.push_back(row->second.at(c.id));
    }
    out.push_back(std::move(a));
  }
  if (!problems.empty()) throw ModelError(std::move(problems));
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_model(const RiskModel& model) {
  ordered_json root;
  root["impact_scale_max"] = model.scale.impact_scale_max;
  root["mitigation_levels"] = ordered_json::array();
  for (const auto& l : model.scale.levels) root["mitigation_levels"].push_back(render_exact(l));

  root["stakeholders"] = ordered_json::array();
  for (const auto& s : model.stakeholders) {
    ordered_json js;
    js["id"] = s.id;
    js["name"] = s.name;
    js["criteria"] = ordered_json::array();
    for (const auto& c : s.criteria) {
      js["criteria"].push_back(ordered_json{{"id", c.id}, {"name", c.name}, {"weight", render_exact(c.weight)}});
    }
    root["stakeholders"].push_back(std::move(js));
  }

  root["goals"] = ordered_json::array();
  for (const auto& g : model.goals) root["goals"].push_back(ordered_json{{"id", g.id}, {"name", g.name}});

  root["threats"] = ordered_json::array();
  for (const auto& t : model.threats) {
    ordered_json jt;
    jt["id"] = t.id;
    jt["name"] = t.name;
    jt["goals"] = t.goals;
    jt["controls"] = ordered_json::array();
    for (const auto& c : t.controls) jt["controls"].push_back(ordered_json{{"id", c.id}, {"name", c.name}});
    root["threats"].push_back(std::move(jt));
  }

  // Known entries in model order first, then anything unreferenced (invalid models only).
  ordered_json aversion = ordered_json::object();
  for (const auto& s : model.stakeholders) {
    auto a = model.aversion.find(s.id);
    if (a == model.aversion.end()) continue;
    ordered_json js = ordered_json::object();
    for (const auto& c : s.criteria) {
      auto b = a->second.find(c.id);
      if (b == a->second.end()) continue;
      ordered_json jc = ordered_json::object();
      for (const auto& t : model.threats) {
        if (auto v = b->second.find(t.id); v != b->second.end()) jc[t.id] = v->second;
      }
      for (const auto& [tid, v] : b->second) {
        if (!jc.contains(tid)) jc[tid] = v;
      }
      js[c.id] = std::move(jc);
    }
    for (const auto& [cid, per_threat] : a->second) {
      if (!js.contains(cid)) js[cid] = per_threat;
    }
    aversion[s.id] = std::move(js);
  }
  for (const auto& [sid, per_criterion] : model.aversion) {
    if (!aversion.contains(sid)) aversion[sid] = per_criterion;
  }
  root["aversion"] = std::move(aversion);

  if (model.assignment) {
    ordered_json assignment = ordered_json::object();
    for (const auto& t : model.threats) {
      auto row = model.assignment->find(t.id);
      if (row == model.assignment->end()) continue;
      ordered_json jt = ordered_json::object();
      for (const auto& c : t.controls) {
        if (auto v = row->second.find(c.id); v != row->second.end()) jt[c.id] = render_exact(v->second);
      }
      for (const auto& [cid, v] : row->second) {
        if (!jt.contains(cid)) jt[cid] = render_exact(v);
      }
      assignment[t.id] = std::move(jt);
    }
    for (const auto& [tid, row] : *model.assignment) {
      if (assignment.contains(tid)) continue;
      ordered_json jt = ordered_json::object();
      for (const auto& [cid, v] : row) jt[cid] = render_exact(v);
      assignment[tid] = std::move(jt);
    }
    root["assignment"] = std::move(assignment);
  }
  return root.dump(2) + "\n";
}

}  // namespace msrmp
