#include "msrmp/pareto.hpp"

#include "msrmp/residue.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace msrmp {

namespace {

enum class Relation { equal, left_dominates, right_dominates, incomparable };

// cmp(s) < 0 means the left point is better in component s.
template <class Cmp>
Relation relate(std::size_t dims, Cmp cmp) {
  bool le = true;
  bool ge = true;
  for (std::size_t s = 0; s < dims; ++s) {
    const int c = cmp(s);
    if (c < 0) ge = false;
    if (c > 0) le = false;
    if (!le && !ge) return Relation::incomparable;
  }
  if (le && ge) return Relation::equal;
  return le ? Relation::left_dominates : Relation::right_dominates;
}

Relation relate_points(const ObjectivePoint& p, const ObjectivePoint& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("objective points of dimension " + std::to_string(p.size()) + " and " +
                                std::to_string(q.size()));
  }
  return relate(p.size(), [&](std::size_t s) {
    const auto c = p[s] <=> q[s];
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  });
}

// Simple-cull archive. Equal points merge their payload lists; the archive
// order is irrelevant because callers sort on output.
template <class Point, class Payload, class Rel>
class Archive {
 public:
  struct Item {
    Point point;
    std::vector<Payload> payloads;
  };

  void add(const Point& point, const Payload& payload) {
    if (Item* same = cull(point)) {
      same->payloads.push_back(payload);
    } else if (!rejected_) {
      items_.push_back({point, {payload}});
    }
  }

  void add(Item&& item) {
    if (Item* same = cull(item.point)) {
      same->payloads.insert(same->payloads.end(), item.payloads.begin(), item.payloads.end());
    } else if (!rejected_) {
      items_.push_back(std::move(item));
    }
  }

  /// Items known to be mutually non-dominated.
  void seed(std::vector<Item>&& items) {
    for (auto& item : items) items_.push_back(std::move(item));
  }

  std::vector<Item>& items() { return items_; }
  std::vector<Item> take() { return std::move(items_); }

 private:
  // Returns the equal item, or nullptr. Sets rejected_ when `point` is dominated;
  // otherwise drops every item `point` dominates.
  Item* cull(const Point& point) {
    rejected_ = false;
    for (std::size_t i = 0; i < items_.size();) {
      switch (Rel{}(items_[i].point, point)) {
        case Relation::equal:
          return &items_[i];
        case Relation::left_dominates:
          rejected_ = true;
          return nullptr;
        case Relation::right_dominates:
          if (i + 1 != items_.size()) items_[i] = std::move(items_.back());
          items_.pop_back();
          break;
        case Relation::incomparable:
          ++i;
          break;
      }
    }
    return nullptr;
  }

  std::vector<Item> items_;
  bool rejected_ = false;
};

struct RationalRel {
  Relation operator()(const ObjectivePoint& a, const ObjectivePoint& b) const { return relate_points(a, b); }
};

bool vector_greater(const ResidueVector& a, const ResidueVector& b) {
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

void sort_front(ParetoFront& f) {
  std::sort(f.entries.begin(), f.entries.end(),
            [](const FrontEntry& a, const FrontEntry& b) { return a.point < b.point; });
}

template <class Items>
ParetoFront front_from_items(Items&& items) {
  ParetoFront f;
  for (auto& item : items) {
    FrontEntry e{std::move(item.point), std::move(item.payloads)};
    std::sort(e.residues.begin(), e.residues.end(), vector_greater);
    e.residues.erase(std::unique(e.residues.begin(), e.residues.end()), e.residues.end());
    f.entries.push_back(std::move(e));
  }
  sort_front(f);
  return f;
}

// --- scaled integer evaluation ---------------------------------------------
//
// Every objective is N_s / D with N_s and D sums of per-(threat, residue)
// terms. Scaling all terms by one common denominator makes them integers, so a
// point is a numerator vector over a shared positive denominator and comparisons
// are cross-multiplications.

template <class Int>
struct ScaledPoint {
  std::vector<Int> num;
  Int den{};
};

__extension__ using Wide = __int128;

inline Wide mul(std::int64_t a, std::int64_t b) { return static_cast<Wide>(a) * b; }
inline BigInt mul(const BigInt& a, const BigInt& b) { return BigInt(a * b); }

template <class Int>
struct ScaledRel {
  Relation operator()(const ScaledPoint<Int>& a, const ScaledPoint<Int>& b) const {
    return relate(a.num.size(), [&](std::size_t s) {
      const auto l = mul(a.num[s], b.den);
      const auto r = mul(b.num[s], a.den);
      return l < r ? -1 : (l > r ? 1 : 0);
    });
  }
};

struct Terms {
  std::size_t stakeholders = 0;
  std::vector<std::vector<std::vector<Rational>>> a;  // [t][j][s]
  std::vector<std::vector<Rational>> b;               // [t][j]
  Rational den_constant;
  std::vector<std::optional<Rational>> bounds;        // per stakeholder
};

Terms build_terms(const RiskModel& model, const ResidueSpace& space, const SolveConfig& cfg) {
  Terms terms;
  terms.stakeholders = model.stakeholders.size();
  const ImpactProfile impacts = impact_profile(model);
  std::optional<GoalWeights> w;
  if (cfg.mode == ScoringMode::goals) w = goal_weights(model);
  terms.den_constant = w ? Rational(0) : Rational(1);

  for (std::size_t t = 0; t < space.dimension(); ++t) {
    const ResidueSet& set = space.sets()[t];
    auto& at = terms.a.emplace_back();
    auto& bt = terms.b.emplace_back();
    for (const Rational& x : set.values) {
      auto& row = at.emplace_back();
      for (std::size_t s = 0; s < terms.stakeholders; ++s) {
        row.push_back(w ? w->observation[t] * w->spread[t] * impacts.at(s, t) * x : impacts.at(s, t) * x);
      }
      bt.push_back(w ? w->observation[t] * x : Rational(0));
    }
  }

  terms.bounds.resize(terms.stakeholders);
  for (const auto& lb : cfg.lower_bounds) terms.bounds[model.stakeholder_index(lb.stakeholder)] = lb.value;
  return terms;
}

template <class Int>
Int to_int(const BigInt& v);
template <>
std::int64_t to_int<std::int64_t>(const BigInt& v) { return v.get_si(); }
template <>
BigInt to_int<BigInt>(const BigInt& v) { return v; }

template <class Int>
Rational to_rational(const Int& num, const Int& den);
template <>
Rational to_rational<std::int64_t>(const std::int64_t& num, const std::int64_t& den) { return {num, den}; }
template <>
Rational to_rational<BigInt>(const BigInt& num, const BigInt& den) { return {num, den}; }

template <class Int>
struct Evaluator {
  std::size_t stakeholders = 0;
  std::vector<std::vector<Int>> a;  // [t][j * S + s]
  std::vector<std::vector<Int>> b;  // [t][j]
  Int den_constant{};
  std::vector<std::optional<std::pair<Int, Int>>> bounds;
  bool exclusive = false;

  Evaluator(const Terms& terms, const BigInt& scale, bool exclusive_bounds)
      : stakeholders(terms.stakeholders), exclusive(exclusive_bounds) {
    const Rational l(scale);
    auto scaled = [&](const Rational& r) { return to_int<Int>((r * l).numerator()); };
    for (std::size_t t = 0; t < terms.a.size(); ++t) {
      auto& at = a.emplace_back();
      auto& bt = b.emplace_back();
      for (std::size_t j = 0; j < terms.a[t].size(); ++j) {
        for (const auto& v : terms.a[t][j]) at.push_back(scaled(v));
        bt.push_back(scaled(terms.b[t][j]));
      }
    }
    den_constant = scaled(terms.den_constant);
    for (const auto& lb : terms.bounds) {
      if (lb) {
        bounds.emplace_back(std::pair<Int, Int>{to_int<Int>(lb->numerator()), to_int<Int>(lb->denominator())});
      } else {
        bounds.emplace_back();
      }
    }
  }

  void eval(std::span<const std::uint32_t> digits, ScaledPoint<Int>& out) const {
    out.num.resize(stakeholders);
    for (auto& n : out.num) n = 0;
    out.den = den_constant;
    for (std::size_t t = 0; t < digits.size(); ++t) {
      const Int* row = a[t].data() + static_cast<std::size_t>(digits[t]) * stakeholders;
      for (std::size_t s = 0; s < stakeholders; ++s) out.num[s] += row[s];
      out.den += b[t][digits[t]];
    }
  }

  [[nodiscard]] bool feasible(const ScaledPoint<Int>& p) const {
    for (std::size_t s = 0; s < stakeholders; ++s) {
      if (!bounds[s]) continue;
      const auto lhs = mul(p.num[s], bounds[s]->second);
      const auto rhs = mul(bounds[s]->first, p.den);
      if (exclusive ? !(lhs > rhs) : !(lhs >= rhs)) return false;
    }
    return true;
  }

  [[nodiscard]] ObjectivePoint to_point(const ScaledPoint<Int>& p) const {
    ObjectivePoint out;
    for (const auto& n : p.num) out.values.push_back(to_rational<Int>(n, p.den));
    return out;
  }
};

BigInt scale_of(const Terms& terms) {
  BigInt l = 1;
  auto fold = [&](const Rational& r) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.raw().get_den_mpz_t());
  };
  for (const auto& at : terms.a) {
    for (const auto& row : at) {
      for (const auto& v : row) fold(v);
    }
  }
  for (const auto& bt : terms.b) {
    for (const auto& v : bt) fold(v);
  }
  fold(terms.den_constant);
  return l;
}

// True when every scaled sum and bound fits in 62 bits, so that products of two
// of them fit in a signed 128-bit integer.
bool fits_int64(const Terms& terms, const BigInt& scale) {
  const BigInt limit = BigInt(1) << 62;
  const Rational l(scale);
  BigInt den_max = (terms.den_constant * l).numerator();
  std::vector<BigInt> num_max(terms.stakeholders, 0);
  for (std::size_t t = 0; t < terms.a.size(); ++t) {
    std::vector<BigInt> row_max(terms.stakeholders, 0);
    BigInt b_max = 0;
    for (std::size_t j = 0; j < terms.a[t].size(); ++j) {
      for (std::size_t s = 0; s < terms.stakeholders; ++s) {
        row_max[s] = std::max(row_max[s], BigInt((terms.a[t][j][s] * l).numerator()));
      }
      b_max = std::max(b_max, BigInt((terms.b[t][j] * l).numerator()));
    }
    for (std::size_t s = 0; s < terms.stakeholders; ++s) num_max[s] += row_max[s];
    den_max += b_max;
  }
  if (den_max >= limit) return false;
  for (const auto& n : num_max) {
    if (n >= limit) return false;
  }
  for (const auto& lb : terms.bounds) {
    if (lb && (abs(lb->numerator()) >= limit || lb->denominator() >= limit)) return false;
  }
  return true;
}

using Clock = std::chrono::steady_clock;

template <class Int>
class Search {
 public:
  using Arc = Archive<ScaledPoint<Int>, std::uint64_t, ScaledRel<Int>>;
  using Item = typename Arc::Item;

  Search(const ResidueSpace& space, const Evaluator<Int>& ev, const SolveConfig& cfg)
      : space_(space), ev_(ev), cfg_(cfg) {}

  SolveResult run() {
    std::vector<Item> items;
    switch (cfg_.strategy) {
      case Strategy::upfront:
        items = upfront();
        break;
      case Strategy::chunk_collect:
        items = chunk_collect();
        break;
      case Strategy::chunk_carry:
        items = chunk_carry();
        break;
    }
    SolveResult result;
    result.evaluated = evaluated_.load();
    result.feasible = feasible_.load();
    if (timed_out_.load()) {
      result.status = SolveStatus::timed_out;
      return result;
    }
    for (auto& item : items) {
      std::sort(item.payloads.begin(), item.payloads.end());
      FrontEntry e{ev_.to_point(item.point), {}};
      for (std::uint64_t ordinal : item.payloads) e.residues.push_back(space_.point(ordinal));
      result.front.entries.push_back(std::move(e));
    }
    sort_front(result.front);
    if (result.front.empty()) result.status = SolveStatus::no_feasible_point;
    return result;
  }

 private:
  bool expired() {
    if (timed_out_.load(std::memory_order_relaxed)) return true;
    if (cfg_.deadline && Clock::now() >= *cfg_.deadline) timed_out_.store(true);
    return timed_out_.load(std::memory_order_relaxed);
  }

  // Calls sink(point, ordinal) for each feasible point of the window.
  template <class Sink>
  bool scan(std::uint64_t start, std::uint64_t length, Sink&& sink) {
    ScaledPoint<Int> p;
    std::uint64_t seen = 0;
    std::uint64_t kept = 0;
    bool ok = true;
    for (PointCursor cursor(space_, start, length); !cursor.done(); cursor.advance()) {
      if ((seen & 1023U) == 0 && expired()) {
        ok = false;
        break;
      }
      ++seen;
      ev_.eval(cursor.digits(), p);
      if (!ev_.feasible(p)) continue;
      ++kept;
      sink(p, cursor.ordinal());
    }
    evaluated_ += seen;
    feasible_ += kept;
    return ok;
  }

  std::vector<Item> upfront() {
    // Materialise the feasible set, then filter it in one pass.
    std::vector<ScaledPoint<Int>> points;
    std::vector<std::uint64_t> ordinals;
    if (!scan(0, space_.size(), [&](const ScaledPoint<Int>& p, std::uint64_t ordinal) {
          points.push_back(p);
          ordinals.push_back(ordinal);
        })) {
      return {};
    }
    Arc arc;
    for (std::size_t i = 0; i < points.size(); ++i) arc.add(points[i], ordinals[i]);
    return arc.take();
  }

  std::vector<Item> chunk_collect() {
    const std::uint64_t total = space_.size();
    const std::uint64_t chunks = total == 0 ? 0 : (total - 1) / cfg_.chunk + 1;
    std::vector<std::vector<Item>> local(static_cast<std::size_t>(chunks));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t start = c * cfg_.chunk;
        Arc arc;
        if (!scan(start, std::min(cfg_.chunk, total - start),
                  [&](const ScaledPoint<Int>& p, std::uint64_t ordinal) { arc.add(p, ordinal); })) {
          return;
        }
        local[static_cast<std::size_t>(c)] = arc.take();
      }
    };
    const unsigned threads = std::max(1U, cfg_.threads);
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    if (timed_out_.load()) return {};

    Arc merged;
    for (auto& chunk : local) {
      for (auto& item : chunk) merged.add(std::move(item));
    }
    return merged.take();
  }

  std::vector<Item> chunk_carry() {
    const std::uint64_t total = space_.size();
    std::vector<Item> carry;
    for (std::uint64_t start = 0; start < total; start += cfg_.chunk) {
      Arc arc;
      arc.seed(std::move(carry));
      if (!scan(start, std::min(cfg_.chunk, total - start),
                [&](const ScaledPoint<Int>& p, std::uint64_t ordinal) { arc.add(p, ordinal); })) {
        return {};
      }
      carry = arc.take();
    }
    return carry;
  }

  const ResidueSpace& space_;
  const Evaluator<Int>& ev_;
  const SolveConfig& cfg_;
  std::atomic<std::uint64_t> evaluated_{0};
  std::atomic<std::uint64_t> feasible_{0};
  std::atomic<bool> timed_out_{false};
};

template <class Int>
SolveResult run_search(const ResidueSpace& space, const Terms& terms, const BigInt& scale,
                       const SolveConfig& cfg) {
  const Evaluator<Int> ev(terms, scale, cfg.exclusive_bounds);
  return Search<Int>(space, ev, cfg).run();
}

bool feasible_rational(const ObjectivePoint& p, const std::vector<std::optional<Rational>>& bounds,
                       bool exclusive) {
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (!bounds[s]) continue;
    if (exclusive ? !(p[s] > *bounds[s]) : !(p[s] >= *bounds[s])) return false;
  }
  return true;
}

// Every assignment of one threat except all-max, lexicographic with higher levels first.
std::vector<MitigationAssignment> all_assignments(const RiskModel& model, std::size_t t) {
  const Threat& threat = model.threats[t];
  const auto& levels = model.scale.levels;
  const std::size_t n = threat.controls.size();
  std::vector<MitigationAssignment> out;
  std::vector<std::size_t> digit(n, 0);  // index into levels, descending
  const std::size_t k = levels.size();
  while (true) {
    MitigationAssignment a{threat.id, {}};
    bool all_max = n > 0;
    for (std::size_t i = 0; i < n; ++i) {
      a.levels.push_back(levels[k - 1 - digit[i]]);
      all_max = all_max && digit[i] == 0;
    }
    if (!all_max) out.push_back(std::move(a));
    std::size_t i = n;
    while (i > 0 && ++digit[i - 1] == k) digit[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

}  // namespace

bool dominates(const ObjectivePoint& p, const ObjectivePoint& q) {
  return relate_points(p, q) == Relation::left_dominates;
}

ParetoFront front(std::span<const std::pair<ObjectivePoint, ResidueVector>> points) {
  Archive<ObjectivePoint, ResidueVector, RationalRel> arc;
  for (const auto& [point, residues] : points) arc.add(point, residues);
  return front_from_items(arc.take());
}

ParetoFront front(const ParetoFront& points) {
  Archive<ObjectivePoint, ResidueVector, RationalRel> arc;
  for (const auto& e : points.entries) arc.add({e.point, e.residues});
  return front_from_items(arc.take());
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::upfront:
      return "upfront";
    case Strategy::chunk_collect:
      return "chunk-collect";
    case Strategy::chunk_carry:
      return "chunk-carry";
  }
  return "upfront";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "upfront") return Strategy::upfront;
  if (text == "chunk-collect") return Strategy::chunk_collect;
  if (text == "chunk-carry") return Strategy::chunk_carry;
  throw std::invalid_argument("unknown strategy \"" + std::string(text) + "\"");
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::ok:
      return "ok";
    case SolveStatus::no_feasible_point:
      return "no_feasible_point";
    case SolveStatus::timed_out:
      return "timed_out";
  }
  return "ok";
}

void check_config(const RiskModel& model, const SolveConfig& cfg) {
  if (cfg.chunk == 0) throw std::invalid_argument("chunk size must be at least 1");
  std::vector<bool> bounded(model.stakeholders.size(), false);
  for (const auto& lb : cfg.lower_bounds) {
    std::size_t s = 0;
    try {
      s = model.stakeholder_index(lb.stakeholder);
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("bound for unknown stakeholder \"" + lb.stakeholder + "\"");
    }
    if (bounded[s]) throw std::invalid_argument("stakeholder \"" + lb.stakeholder + "\" bounded twice");
    bounded[s] = true;
    if (lb.value.sign() < 0) throw std::invalid_argument("negative bound for \"" + lb.stakeholder + "\"");
  }
  auto diagnostics = validate_model(model, cfg.mode);
  if (!diagnostics.empty()) throw ModelError(std::move(diagnostics));
}

SolveResult solve(const RiskModel& model, const SolveConfig& cfg) {
  check_config(model, cfg);
  const ResidueSpace space(model);
  const Terms terms = build_terms(model, space, cfg);
  const BigInt scale = scale_of(terms);
  if (fits_int64(terms, scale)) return run_search<std::int64_t>(space, terms, scale, cfg);
  return run_search<BigInt>(space, terms, scale, cfg);
}

OracleCapExceeded::OracleCapExceeded(const BigInt& raw)
    : std::runtime_error("brute force over " + to_string(raw) + " mitigation-mapping combinations exceeds the cap") {}

OracleResult solve_direct_oracle(const RiskModel& model, const SolveConfig& cfg, std::uint64_t cap,
                                 bool collect_rmps) {
  check_config(model, cfg);
  const BigInt raw = count_raw(model);
  if (raw > BigInt(std::to_string(cap))) throw OracleCapExceeded(raw);

  const std::size_t threats = model.threats.size();
  std::vector<std::vector<MitigationAssignment>> options;
  std::vector<std::vector<Rational>> option_residue;
  for (std::size_t t = 0; t < threats; ++t) {
    options.push_back(all_assignments(model, t));
    auto& res = option_residue.emplace_back();
    for (const auto& a : options.back()) res.push_back(residue_of_assignment(model, a.threat_id, a));
  }
  std::vector<std::optional<Rational>> bounds(model.stakeholders.size());
  for (const auto& lb : cfg.lower_bounds) bounds[model.stakeholder_index(lb.stakeholder)] = lb.value;

  std::map<ResidueVector, ObjectivePoint> memo;
  Archive<ObjectivePoint, std::vector<std::uint32_t>, RationalRel> arc;
  OracleResult out;
  std::vector<std::uint32_t> digit(threats, 0);
  ResidueVector x(threats);
  while (true) {
    for (std::size_t t = 0; t < threats; ++t) x[t] = option_residue[t][digit[t]];
    auto it = memo.find(x);
    if (it == memo.end()) {
      ObjectivePoint p = cfg.mode == ScoringMode::goals ? objective_goals(model, x) : objective_criteria(model, x);
      it = memo.emplace(x, std::move(p)).first;
    }
    ++out.result.evaluated;
    if (feasible_rational(it->second, bounds, cfg.exclusive_bounds)) {
      ++out.result.feasible;
      arc.add(it->second, digit);
    }
    std::size_t t = threats;
    while (t > 0 && ++digit[t - 1] == options[t - 1].size()) digit[--t] = 0;
    if (t == 0) break;
  }

  auto items = arc.take();
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.point < b.point; });
  for (auto& item : items) {
    std::sort(item.payloads.begin(), item.payloads.end());
    FrontEntry e{item.point, {}};
    std::vector<Rmp> rmps;
    for (const auto& d : item.payloads) {
      ResidueVector r(threats);
      Rmp rmp;
      for (std::size_t t = 0; t < threats; ++t) {
        r[t] = option_residue[t][d[t]];
        if (collect_rmps) rmp.push_back(options[t][d[t]]);
      }
      e.residues.push_back(std::move(r));
      if (collect_rmps) rmps.push_back(std::move(rmp));
    }
    std::sort(e.residues.begin(), e.residues.end(), vector_greater);
    e.residues.erase(std::unique(e.residues.begin(), e.residues.end()), e.residues.end());
    out.result.front.entries.push_back(std::move(e));
    if (collect_rmps) out.rmps.push_back(std::move(rmps));
  }
  if (out.result.front.empty()) out.result.status = SolveStatus::no_feasible_point;
  return out;
}

}  // namespace msrmp
