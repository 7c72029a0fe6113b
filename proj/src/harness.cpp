#include "msrmp/harness.hpp"

#include "msrmp/residue.hpp"

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

namespace msrmp {

namespace {

// Unbiased draw in [0, n) by rejection; std::uniform_int_distribution is not
// specified bit-for-bit across standard libraries.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  while (true) {
    const std::uint64_t v = rng();
    if (v < limit) return v % n;
  }
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

std::string fmt_mb(double mb) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", mb);
  return buf;
}

}  // namespace

void check_spec(const BenchSpec& spec) {
  auto positive = [](std::size_t v, const char* what) {
    if (v == 0) throw std::invalid_argument(std::string(what) + " must be at least 1");
  };
  if (spec.threat_counts.empty()) throw std::invalid_argument("no threat counts given");
  for (auto t : spec.threat_counts) positive(t, "threat count");
  positive(spec.controls_per_threat, "controls per threat");
  positive(spec.stakeholders, "stakeholder count");
  if (spec.criteria_per_stakeholder.empty()) throw std::invalid_argument("no criteria counts given");
  for (auto c : spec.criteria_per_stakeholder) positive(c, "criteria count");
  positive(spec.goals, "goal count");
  if (spec.strategies.empty()) throw std::invalid_argument("no strategies given");
  if (spec.chunks.empty()) throw std::invalid_argument("no chunk sizes given");
  for (auto d : spec.chunks) positive(d, "chunk size");
  if (spec.timeout_secs && *spec.timeout_secs <= 0) throw std::invalid_argument("timeout must be positive");
}

RiskModel gen_instance(const BenchSpec& spec, std::size_t index) {
  check_spec(spec);
  const std::size_t threats = spec.threat_counts.at(index);
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(threats)};
  std::mt19937_64 rng(seq);

  RiskModel model;
  model.goals.clear();
  for (std::size_t g = 0; g < spec.goals; ++g) {
    const std::string id = "G" + std::to_string(g + 1);
    model.goals.push_back({id, id});
  }
  for (std::size_t t = 0; t < threats; ++t) {
    Threat threat{"T" + std::to_string(t + 1), "", {}, {}};
    for (std::size_t c = 0; c < spec.controls_per_threat; ++c) {
      threat.controls.push_back({threat.id + "c" + std::to_string(c + 1), ""});
    }
    for (const auto& g : model.goals) {
      if (draw(rng, 2) == 1) threat.goals.push_back(g.id);
    }
    if (threat.goals.empty()) threat.goals.push_back(model.goals[draw(rng, spec.goals)].id);
    model.threats.push_back(std::move(threat));
  }
  const int il_max = model.scale.impact_scale_max;
  for (std::size_t s = 0; s < spec.stakeholders; ++s) {
    Stakeholder holder{"S" + std::to_string(s + 1), "", {}};
    const std::size_t criteria =
        spec.criteria_per_stakeholder[std::min(s, spec.criteria_per_stakeholder.size() - 1)];
    std::vector<std::int64_t> raw;
    std::int64_t total = 0;
    for (std::size_t p = 0; p < criteria; ++p) {
      raw.push_back(static_cast<std::int64_t>(draw(rng, 9)) + 1);
      total += raw.back();
    }
    for (std::size_t p = 0; p < criteria; ++p) {
      const std::string pid = "P" + std::to_string(p + 1);
      holder.criteria.push_back({pid, "", Rational(raw[p], total)});
      for (const auto& threat : model.threats) {
        model.aversion[holder.id][pid][threat.id] =
            static_cast<int>(draw(rng, static_cast<std::uint64_t>(il_max) + 1));
      }
    }
    model.stakeholders.push_back(std::move(holder));
  }
  return model;
}

std::optional<double> peak_memory_mb() {
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return std::nullopt;
  return static_cast<double>(usage.ru_maxrss) / 1024.0;  // kilobytes on Linux
}

std::vector<BenchRecord> run_bench(const BenchSpec& spec, const std::function<void(const BenchRecord&)>& sink) {
  check_spec(spec);
  std::vector<BenchRecord> records;
  for (std::size_t i = 0; i < spec.threat_counts.size(); ++i) {
    const RiskModel model = gen_instance(spec, i);
    const BigInt raw = count_raw(model);
    const BigInt reduced = count_reduced(model);

    auto run_cell = [&](Strategy strategy, std::optional<std::uint64_t> d) {
      SolveConfig cfg;
      cfg.mode = spec.mode;
      cfg.strategy = strategy;
      cfg.chunk = d.value_or(4096);
      cfg.threads = spec.threads;
      const auto start = std::chrono::steady_clock::now();
      if (spec.timeout_secs) {
        cfg.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                   std::chrono::duration<double>(*spec.timeout_secs));
      }
      const SolveResult result = solve(model, cfg);
      BenchRecord rec;
      rec.threats = model.threats.size();
      rec.controls_total = model.control_count();
      rec.raw_count = raw;
      rec.reduced_count = reduced;
      rec.mode = spec.mode;
      rec.strategy = strategy;
      rec.d = d;
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rec.peak_mem_mb = peak_memory_mb();
      rec.front_size = result.front.size();
      rec.timed_out = result.status == SolveStatus::timed_out;
      if (sink) sink(rec);
      records.push_back(std::move(rec));
    };

    for (Strategy strategy : spec.strategies) {
      if (strategy == Strategy::upfront) {
        run_cell(strategy, std::nullopt);
        continue;
      }
      for (std::uint64_t d : spec.chunks) run_cell(strategy, d);
    }
  }
  return records;
}

std::string bench_csv_header() {
  return "threats,controls_total,raw_count,reduced_count,reduction_factor,mode,strategy,d,seconds,"
         "peak_mem_mb,front_size,timed_out\n";
}

std::string bench_csv_row(const BenchRecord& r) {
  std::string row;
  row += std::to_string(r.threats) + ",";
  row += std::to_string(r.controls_total) + ",";
  row += to_string(r.raw_count) + ",";
  row += to_string(r.reduced_count) + ",";
  row += r.reduction_factor().to_string() + ",";
  row += std::string(to_string(r.mode)) + ",";
  row += std::string(to_string(r.strategy)) + ",";
  row += (r.d ? std::to_string(*r.d) : std::string()) + ",";
  row += fmt_seconds(r.seconds) + ",";
  row += (r.peak_mem_mb ? fmt_mb(*r.peak_mem_mb) : std::string()) + ",";
  row += std::to_string(r.front_size) + ",";
  row += r.timed_out ? "true" : "false";
  row += "\n";
  return row;
}

}  // namespace msrmp
