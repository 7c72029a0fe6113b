#include "msrmp/mapback.hpp"

#include "msrmp/residue.hpp"

namespace msrmp {

UnachievableResidue::UnachievableResidue(const std::string& threat, const Rational& residue)
    : std::invalid_argument("residue " + residue.to_string() + " is not achievable for threat " + threat),
      threat_(threat) {}

namespace {

// Integer subset-sum instance: n positions, levels scaled by the scale's common
// denominator, target sum n * (1 - x) in the same units.
struct Instance {
  std::string threat_id;
  std::size_t positions = 0;
  std::vector<std::int64_t> levels;  // descending
  std::vector<Rational> exact;       // descending, parallel to levels
  std::int64_t max_level = 0;
  std::int64_t target = 0;
};

Instance make_instance(const RiskModel& model, std::string_view threat, const Rational& x) {
  const Threat& t = model.threats.at(model.threat_index(threat));
  const ScaledLevels scaled = scale_levels(model.scale);
  Instance inst;
  inst.threat_id = t.id;
  inst.positions = t.controls.size();
  inst.levels.assign(scaled.levels.rbegin(), scaled.levels.rend());
  inst.exact.assign(model.scale.levels.rbegin(), model.scale.levels.rend());
  inst.max_level = scaled.max_level();

  const Rational target = Rational(static_cast<std::int64_t>(inst.positions)) * (Rational(1) - x) *
                          Rational(scaled.denominator);
  const std::int64_t top = static_cast<std::int64_t>(inst.positions) * inst.max_level;
  // The all-max sum is excluded; for zero controls only x = 1 is valid.
  const bool in_range = target.is_integer() && target.sign() >= 0 &&
                        (inst.positions == 0 ? target.is_zero() : target < Rational(top));
  if (!in_range) throw UnachievableResidue(t.id, x);
  inst.target = target.numerator().get_si();
  return inst;
}

// ways[i][r]: level vectors for positions i..n-1 summing to r.
std::vector<std::vector<BigInt>> count_table(const Instance& inst) {
  const auto width = static_cast<std::size_t>(inst.target) + 1;
  std::vector<std::vector<BigInt>> ways(inst.positions + 1, std::vector<BigInt>(width, 0));
  ways[inst.positions][0] = 1;
  for (std::size_t i = inst.positions; i-- > 0;) {
    for (std::size_t r = 0; r < width; ++r) {
      for (std::int64_t level : inst.levels) {
        if (level <= static_cast<std::int64_t>(r)) ways[i][r] += ways[i + 1][r - static_cast<std::size_t>(level)];
      }
    }
  }
  return ways;
}

class Emitter {
 public:
  Emitter(const Instance& inst, const std::function<bool(const MitigationAssignment&)>& emit)
      : inst_(inst), emit_(emit) {
    current_.threat_id = inst.threat_id;
    current_.levels.reserve(inst.positions);
  }

  std::uint64_t run() {
    recurse(0, inst_.target);
    return emitted_;
  }

 private:
  bool recurse(std::size_t position, std::int64_t remaining) {
    if (position == inst_.positions) {
      if (remaining != 0) return true;
      ++emitted_;
      return emit_(current_);
    }
    const auto left = static_cast<std::int64_t>(inst_.positions - position - 1);
    for (std::size_t l = 0; l < inst_.levels.size(); ++l) {
      const std::int64_t rest = remaining - inst_.levels[l];
      if (rest < 0 || rest > left * inst_.max_level) continue;
      current_.levels.push_back(inst_.exact[l]);
      const bool more = recurse(position + 1, rest);
      current_.levels.pop_back();
      if (!more) return false;
    }
    return true;
  }

  const Instance& inst_;
  const std::function<bool(const MitigationAssignment&)>& emit_;
  MitigationAssignment current_;
  std::uint64_t emitted_ = 0;
};

}  // namespace

std::uint64_t assignments_for_residue(const RiskModel& model, std::string_view threat, const Rational& x,
                                      const std::function<bool(const MitigationAssignment&)>& emit) {
  const Instance inst = make_instance(model, threat, x);
  const std::uint64_t emitted = Emitter(inst, emit).run();
  if (emitted == 0) throw UnachievableResidue(inst.threat_id, x);
  return emitted;
}

std::vector<MitigationAssignment> assignments_for_residue(const RiskModel& model, std::string_view threat,
                                                          const Rational& x, std::optional<std::uint64_t> limit) {
  std::vector<MitigationAssignment> out;
  if (limit && *limit == 0) {
    if (count_assignments(model, threat, x) == 0) throw UnachievableResidue(std::string(threat), x);
    return out;
  }
  assignments_for_residue(model, threat, x, [&](const MitigationAssignment& a) {
    out.push_back(a);
    return !limit || out.size() < *limit;
  });
  return out;
}

BigInt count_assignments(const RiskModel& model, std::string_view threat, const Rational& x) {
  const Instance inst = make_instance(model, threat, x);
  return count_table(inst)[0][static_cast<std::size_t>(inst.target)];
}

BigInt count_rmps(const RiskModel& model, const ResidueVector& x) {
  if (x.size() != model.threats.size()) throw std::invalid_argument("residue vector does not match the threats");
  BigInt total = 1;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const BigInt c = count_assignments(model, model.threats[t].id, x[t]);
    if (c == 0) throw UnachievableResidue(model.threats[t].id, x[t]);
    total *= c;
  }
  return total;
}

RmpEnumeration enumerate_rmps(const RiskModel& model, const ResidueVector& x, std::optional<std::uint64_t> limit) {
  if (x.size() != model.threats.size()) throw std::invalid_argument("residue vector does not match the threats");
  RmpEnumeration out;
  out.target = x;
  out.total = 1;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const std::string& id = model.threats[t].id;
    BigInt count = count_assignments(model, id, x[t]);
    if (count == 0) throw UnachievableResidue(id, x[t]);
    out.assignments.push_back(assignments_for_residue(model, id, x[t], limit));
    out.truncated = out.truncated || BigInt(static_cast<unsigned long>(out.assignments.back().size())) < count;
    out.total *= count;
    out.counts.push_back(std::move(count));
  }
  return out;
}

}  // namespace msrmp
