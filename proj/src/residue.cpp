#include "msrmp/residue.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace msrmp {

ScaledLevels scale_levels(const MitigationScale& scale) {
  const BigInt den = common_denominator(scale.levels);
  if (den > std::numeric_limits<std::int32_t>::max()) {
    throw ModelError("mitigation_levels", "common denominator of the levels is too large");
  }
  ScaledLevels out;
  out.denominator = den.get_si();
  for (const auto& level : scale.levels) {
    const Rational scaled = level * Rational(den);
    out.levels.push_back(scaled.numerator().get_si());
  }
  return out;
}

std::size_t ResidueSet::find(const Rational& x) const {
  // values are strictly decreasing
  auto it = std::lower_bound(values.begin(), values.end(), x, std::greater<>());
  if (it == values.end() || *it != x) return npos;
  return static_cast<std::size_t>(it - values.begin());
}

ResidueSet residue_set(const RiskModel& model, std::string_view threat) {
  return residue_set(model, model.threat_index(threat));
}

ResidueSet residue_set(const RiskModel& model, std::size_t threat_index) {
  const Threat& threat = model.threats.at(threat_index);
  const ScaledLevels scaled = scale_levels(model.scale);
  const std::size_t n = threat.controls.size();

  ResidueSet set;
  set.threat_id = threat.id;
  set.control_count = n;
  set.sum_denominator = scaled.denominator;
  if (n == 0) {
    set.values.emplace_back(1);
    set.scaled_sums.push_back(0);
    return set;
  }

  const std::int64_t max_sum = static_cast<std::int64_t>(n) * scaled.max_level();
  std::vector<char> reachable(static_cast<std::size_t>(max_sum) + 1, 0);
  reachable[0] = 1;
  std::int64_t frontier = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<char> next(reachable.size(), 0);
    for (std::int64_t s = 0; s <= frontier; ++s) {
      if (reachable[static_cast<std::size_t>(s)] == 0) continue;
      for (std::int64_t level : scaled.levels) next[static_cast<std::size_t>(s + level)] = 1;
    }
    frontier += scaled.max_level();
    reachable.swap(next);
  }

  // The maximum sum needs every control at the (unique) top level: excluded.
  const Rational denom = Rational(static_cast<std::int64_t>(n)) * Rational(scaled.denominator);
  for (std::int64_t s = 0; s < max_sum; ++s) {
    if (reachable[static_cast<std::size_t>(s)] == 0) continue;
    set.values.push_back(Rational(1) - Rational(s) / denom);
    set.scaled_sums.push_back(s);
  }
  return set;
}

BigInt count_raw(const RiskModel& model) {
  BigInt total = 1;
  const unsigned long k = model.scale.levels.size();
  for (const auto& threat : model.threats) {
    if (threat.controls.empty()) continue;
    BigInt combos;
    mpz_ui_pow_ui(combos.get_mpz_t(), k, threat.controls.size());
    total *= combos - 1;
  }
  return total;
}

BigInt count_reduced(const RiskModel& model) {
  BigInt total = 1;
  for (std::size_t t = 0; t < model.threats.size(); ++t) {
    total *= static_cast<unsigned long>(residue_set(model, t).size());
  }
  return total;
}

Rational residue_of_assignment(const RiskModel& model, std::string_view threat,
                               const MitigationAssignment& assignment) {
  const Threat& t = model.threats.at(model.threat_index(threat));
  const std::string path = "assignment." + t.id;
  if (assignment.levels.size() != t.controls.size()) {
    throw ModelError(path, "expected " + std::to_string(t.controls.size()) + " levels, got " +
                               std::to_string(assignment.levels.size()));
  }
  if (t.controls.empty()) return Rational(1);

  Rational sum;
  bool all_max = true;
  for (std::size_t i = 0; i < assignment.levels.size(); ++i) {
    const Rational& level = assignment.levels[i];
    if (!model.scale.contains(level)) {
      throw ModelError(path + "." + t.controls[i].id, "level " + level.to_string() + " is not a mitigation level");
    }
    all_max = all_max && level == model.scale.max_level();
    sum += level;
  }
  if (all_max) throw ModelError(path, "every control at the maximum level is excluded from the model");
  return Rational(1) - sum / Rational(static_cast<std::int64_t>(t.controls.size()));
}

// ---------------------------------------------------------------------------

ResidueSpace::ResidueSpace(const RiskModel& model) : reduced_(1) {
  sets_.reserve(model.threats.size());
  for (std::size_t t = 0; t < model.threats.size(); ++t) {
    sets_.push_back(residue_set(model, t));
    reduced_ *= static_cast<unsigned long>(sets_.back().size());
  }
}

std::uint64_t ResidueSpace::size() const {
  if (mpz_sizeinbase(reduced_.get_mpz_t(), 2) > 64) {
    throw std::overflow_error("residue space has more than 2^64 - 1 points");
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, reduced_.get_mpz_t());
  return out;
}

void ResidueSpace::digits_of(std::uint64_t ordinal, std::span<std::uint32_t> out) const {
  if (out.size() != sets_.size()) throw std::invalid_argument("digit buffer has the wrong size");
  for (std::size_t i = sets_.size(); i-- > 0;) {
    const std::uint64_t radix = sets_[i].size();
    out[i] = static_cast<std::uint32_t>(ordinal % radix);
    ordinal /= radix;
  }
  if (ordinal != 0) throw std::out_of_range("ordinal outside the residue space");
}

std::uint64_t ResidueSpace::ordinal_of(std::span<const std::uint32_t> digits) const {
  if (digits.size() != sets_.size()) throw std::invalid_argument("digit vector has the wrong size");
  std::uint64_t ordinal = 0;
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (digits[i] >= sets_[i].size()) throw std::out_of_range("digit outside its residue set");
    ordinal = ordinal * sets_[i].size() + digits[i];
  }
  return ordinal;
}

ResidueVector ResidueSpace::residues(std::span<const std::uint32_t> digits) const {
  if (digits.size() != sets_.size()) throw std::invalid_argument("digit vector has the wrong size");
  ResidueVector out;
  out.reserve(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) out.push_back(sets_[i].values.at(digits[i]));
  return out;
}

ResidueVector ResidueSpace::point(std::uint64_t ordinal) const {
  std::vector<std::uint32_t> digits(sets_.size());
  digits_of(ordinal, digits);
  return residues(digits);
}

PointCursor::PointCursor(const ResidueSpace& space, std::uint64_t start, std::uint64_t length)
    : space_(&space), digits_(space.dimension()), ordinal_(start), remaining_(length) {
  const std::uint64_t total = space.size();
  if (start > total || length > total - start) {
    throw std::out_of_range("point range [" + std::to_string(start) + ", +" + std::to_string(length) +
                            ") exceeds the residue space of " + std::to_string(total) + " points");
  }
  if (length > 0) space.digits_of(start, digits_);
}

void PointCursor::advance() {
  if (remaining_ == 0) return;
  --remaining_;
  ++ordinal_;
  if (remaining_ == 0) return;
  const auto& sets = space_->sets();
  for (std::size_t i = digits_.size(); i-- > 0;) {
    if (++digits_[i] < sets[i].size()) return;
    digits_[i] = 0;
  }
}

void iter_points(const ResidueSpace& space, std::uint64_t start, std::uint64_t length,
                 const std::function<void(const ResidueVector&, std::uint64_t)>& visit) {
  for (PointCursor cursor(space, start, length); !cursor.done(); cursor.advance()) {
    visit(cursor.residues(), cursor.ordinal());
  }
}

}  // namespace msrmp
