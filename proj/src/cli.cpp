#include "msrmp/cli.hpp"

#include "msrmp/harness.hpp"
#include "msrmp/mapback.hpp"
#include "msrmp/model.hpp"
#include "msrmp/pareto.hpp"
#include "msrmp/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <optional>

namespace msrmp {

namespace {

// Bad flag values discovered after CLI11 has accepted the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model_path;
  std::string mode = "goals";
  std::string strategy = "upfront";
  std::uint64_t chunk = 4096;
  std::vector<std::string> min_bounds;
  bool exclusive_bounds = false;
  bool with_rmps = false;
  std::optional<std::uint64_t> limit;
  int precision = 4;
  std::string out_path;
  std::string svg_path;
  std::string residues;
  unsigned threads = 1;
  bool timing = false;
  // bench
  std::vector<std::size_t> threat_counts{5, 6, 7};
  std::size_t controls = 4;
  std::size_t stakeholders = 2;
  std::vector<std::string> strategies{"upfront", "chunk-collect", "chunk-carry"};
  std::vector<std::uint64_t> chunks{4096};
  std::uint64_t seed = 42;
  std::optional<double> timeout_secs;
};

ScoringMode mode_of(const Options& o) {
  try {
    return parse_scoring_mode(o.mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

SolveConfig config_of(const Options& o) {
  SolveConfig cfg;
  cfg.mode = mode_of(o);
  try {
    cfg.strategy = parse_strategy(o.strategy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.chunk = o.chunk;
  cfg.exclusive_bounds = o.exclusive_bounds;
  cfg.threads = o.threads;
  for (const auto& text : o.min_bounds) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--min-bound expects S=V, got \"" + text + "\"");
    try {
      cfg.lower_bounds.push_back({text.substr(0, eq), Rational::parse(text.substr(eq + 1))});
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--min-bound: ") + e.what());
    }
  }
  return cfg;
}

// Parses and validates for `mode`, reporting every diagnostic at once.
RiskModel load(const std::string& path, ScoringMode mode) {
  RiskModel model = parse_model_unchecked(read_file(path));
  auto diagnostics = validate_model(model, mode);
  if (!diagnostics.empty()) throw ModelError(std::move(diagnostics));
  return model;
}

void emit(const Options& o, const std::string& document, std::ostream& out) {
  if (o.out_path.empty()) {
    out << document;
    return;
  }
  std::ofstream file(o.out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + o.out_path);
  file << document;
}

RenderOptions render_options(const Options& o, double seconds) {
  RenderOptions r;
  r.precision = o.precision;
  if (o.timing) r.seconds = seconds;
  return r;
}

double since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void cmd_validate(const Options& o, std::ostream& out) {
  const RiskModel model = load(o.model_path, mode_of(o));
  out << "{\n  \"valid\": true,\n  \"stakeholders\": " << model.stakeholders.size()
      << ",\n  \"threats\": " << model.threats.size() << ",\n  \"controls\": " << model.control_count() << "\n}\n";
}

void cmd_assess(const Options& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const ScoringMode mode = mode_of(o);
  const RiskModel model = load(o.model_path, mode);
  const Assessment a = assess(model, fixed_assignment(model), mode);
  emit(o, assessment_document(model, a, render_options(o, since(start))), out);
}

void cmd_count(const Options& o, std::ostream& out) {
  emit(o, count_document(load(o.model_path, ScoringMode::criteria)), out);
}

void cmd_solve(const Options& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const SolveConfig cfg = config_of(o);
  const RiskModel model = load(o.model_path, cfg.mode);
  try {
    check_config(model, cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const SolveResult result = solve(model, cfg);
  std::vector<std::vector<RmpEnumeration>> rmps;
  if (o.with_rmps) {
    for (const auto& e : result.front.entries) {
      auto& list = rmps.emplace_back();
      for (const auto& x : e.residues) list.push_back(enumerate_rmps(model, x, o.limit));
    }
  }
  emit(o, front_document(model, cfg, result, render_options(o, since(start)), o.with_rmps ? &rmps : nullptr), out);
}

void cmd_map_back(const Options& o, std::ostream& out) {
  const RiskModel model = load(o.model_path, ScoringMode::criteria);
  ResidueVector x;
  try {
    x = parse_residues(model, o.residues);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--residues: ") + e.what());
  }
  emit(o, rmp_document(model, enumerate_rmps(model, x, o.limit), render_options(o, 0)), out);
}

void cmd_bench(const Options& o, std::ostream& out) {
  BenchSpec spec;
  spec.threat_counts = o.threat_counts;
  spec.controls_per_threat = o.controls;
  spec.stakeholders = o.stakeholders;
  spec.seed = o.seed;
  spec.mode = mode_of(o);
  spec.chunks = o.chunks;
  spec.timeout_secs = o.timeout_secs;
  spec.threads = o.threads;
  spec.strategies.clear();
  try {
    for (const auto& s : o.strategies) spec.strategies.push_back(parse_strategy(s));
    check_spec(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::ofstream file;
  if (!o.out_path.empty()) {
    file.open(o.out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + o.out_path);
  }
  std::ostream& sink = o.out_path.empty() ? out : file;
  sink << bench_csv_header() << std::flush;
  run_bench(spec, [&](const BenchRecord& r) { sink << bench_csv_row(r) << std::flush; });
}

void cmd_plot(const Options& o, std::ostream& out) {
  const SolveConfig cfg = config_of(o);
  const RiskModel model = load(o.model_path, cfg.mode);
  try {
    check_config(model, cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!o.svg_path.empty() && model.stakeholders.size() != 2) {
    throw UsageError("--svg needs exactly 2 stakeholders");
  }
  const SolveResult result = solve(model, cfg);
  emit(o, plot_csv(model, cfg, result.front, o.precision), out);
  if (!o.svg_path.empty()) {
    std::ofstream svg(o.svg_path, std::ios::binary);
    if (!svg) throw std::runtime_error("cannot write " + o.svg_path);
    svg << plot_svg(model, cfg, result.front);
  }
}

void report_model_error(const ModelError& e, std::ostream& err) {
  for (const auto& d : e.diagnostics()) err << "error: " << (d.path.empty() ? "$" : d.path) << ": " << d.message << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Pareto-optimal risk management policies for multi-stakeholder risk models", "msrmp"};
  app.require_subcommand(1);
  Options o;
  std::function<void(const Options&, std::ostream&)> action;

  auto model_arg = [&](CLI::App* sub) { sub->add_option("model", o.model_path, "Risk-model document")->required(); };
  auto mode_opt = [&](CLI::App* sub) {
    sub->add_option("--mode", o.mode, "Scoring mode")->check(CLI::IsMember({"criteria", "goals"}))->capture_default_str();
  };
  auto out_opt = [&](CLI::App* sub) { sub->add_option("--out", o.out_path, "Write the document to this path"); };
  auto precision_opt = [&](CLI::App* sub) {
    sub->add_option("--precision", o.precision, "Decimal places in rendered numbers")
        ->check(CLI::Range(0, 30))
        ->capture_default_str();
  };
  auto search_opts = [&](CLI::App* sub) {
    mode_opt(sub);
    sub->add_option("--strategy", o.strategy, "Search strategy")
        ->check(CLI::IsMember({"upfront", "chunk-collect", "chunk-carry"}))
        ->capture_default_str();
    sub->add_option("--chunk", o.chunk, "Chunk size d")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--min-bound", o.min_bounds, "Risk-appetite lower bound S=V (repeatable)");
    sub->add_flag("--exclusive-bounds", o.exclusive_bounds, "Require oir(s) > V instead of >=");
    sub->add_option("--threads", o.threads, "Worker threads for chunk-collect")
        ->check(CLI::Range(1U, 1024U))
        ->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "Check a risk-model document");
  model_arg(validate);
  mode_opt(validate);
  validate->callback([&] { action = cmd_validate; });

  auto* assess_cmd = app.add_subcommand("assess", "Score the document's fixed assignment");
  model_arg(assess_cmd);
  mode_opt(assess_cmd);
  precision_opt(assess_cmd);
  out_opt(assess_cmd);
  assess_cmd->add_flag("--timing", o.timing, "Report wall-clock seconds");
  assess_cmd->callback([&] { action = cmd_assess; });

  auto* count = app.add_subcommand("count", "Raw and reduced search-space sizes");
  model_arg(count);
  out_opt(count);
  count->callback([&] { action = cmd_count; });

  auto* solve_cmd = app.add_subcommand("solve", "Compute the exact Pareto front");
  model_arg(solve_cmd);
  search_opts(solve_cmd);
  solve_cmd->add_flag("--with-rmps", o.with_rmps, "Map every optimum back to its RMPs");
  solve_cmd->add_option("--limit", o.limit, "Keep at most N assignments per threat")->check(CLI::NonNegativeNumber);
  precision_opt(solve_cmd);
  out_opt(solve_cmd);
  solve_cmd->add_flag("--timing", o.timing, "Report wall-clock seconds");
  solve_cmd->callback([&] { action = cmd_solve; });

  auto* map_back = app.add_subcommand("map-back", "Enumerate the RMPs behind a residue vector");
  model_arg(map_back);
  map_back->add_option("--residues", o.residues, "Comma-separated residues in threat order")->required();
  map_back->add_option("--limit", o.limit, "Keep at most N assignments per threat")->check(CLI::NonNegativeNumber);
  precision_opt(map_back);
  out_opt(map_back);
  map_back->callback([&] { action = cmd_map_back; });

  auto* bench = app.add_subcommand("bench", "Benchmark synthetic instances, one CSV row per cell");
  bench->add_option("--threats", o.threat_counts, "Threat counts")->delimiter(',')->capture_default_str();
  bench->add_option("--controls", o.controls, "Controls per threat")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--stakeholders", o.stakeholders, "Stakeholder count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--strategies", o.strategies, "Strategies to run")->delimiter(',')->capture_default_str();
  bench->add_option("--chunks", o.chunks, "Chunk sizes for chunked strategies")->delimiter(',')->capture_default_str();
  mode_opt(bench);
  bench->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  bench->add_option("--timeout-secs", o.timeout_secs, "Per-cell timeout")->check(CLI::PositiveNumber);
  bench->add_option("--threads", o.threads, "Worker threads for chunk-collect")->check(CLI::Range(1U, 1024U));
  out_opt(bench);
  bench->callback([&] { action = cmd_bench; });

  auto* plot = app.add_subcommand("plot", "Export every feasible point as CSV, optionally an SVG scatter");
  model_arg(plot);
  search_opts(plot);
  precision_opt(plot);
  out_opt(plot);
  plot->add_option("--svg", o.svg_path, "Also write a scatter plot (2 stakeholders only)");
  plot->callback([&] { action = cmd_plot; });

  std::vector<const char*> argv{"msrmp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage_error;
  }

  try {
    action(o, out);
    return exit_ok;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage_error;
  } catch (const ModelError& e) {
    report_model_error(e, err);
    return exit_model_error;
  } catch (const ParseError& e) {
    err << "error: " << (e.path().empty() ? "$" : e.path()) << ": " << e.what();
    if (e.offset()) err << " (byte " << *e.offset() << ")";
    err << "\n";
    return exit_model_error;
  } catch (const UnachievableResidue& e) {
    err << "error: " << e.what() << "\n";
    return exit_model_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_model_error;
  }
}

}  // namespace msrmp
