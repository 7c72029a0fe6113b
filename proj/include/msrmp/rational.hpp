#ifndef MSRMP_RATIONAL_HPP
#define MSRMP_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace msrmp {

/// Arbitrary-precision integer used for search-space and RMP counts.
using BigInt = mpz_class;

/// Renders a BigInt in base 10.
std::string to_string(const BigInt& value);

/// Exact rational number, always kept in lowest terms with a positive denominator.
///
/// Every objective value, residue and weight in the solver is a Rational, so
/// dominance and equality tests never depend on floating-point rounding.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t integer);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t numerator, std::int64_t denominator);
  explicit Rational(const BigInt& integer);
  Rational(const BigInt& numerator, const BigInt& denominator);

  /// Parses "3", "-0.725", ".5" or "5/6" exactly. Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  [[nodiscard]] BigInt numerator() const { return BigInt(value_.get_num()); }
  [[nodiscard]] BigInt denominator() const { return BigInt(value_.get_den()); }
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
  [[nodiscard]] double to_double() const { return value_.get_d(); }

  /// "5/6", "-3" or "0".
  [[nodiscard]] std::string to_string() const;

  /// Decimal rendering rounded half-to-even at `places` fractional digits.
  [[nodiscard]] std::string to_decimal(int places) const;

  /// The terminating decimal expansion if one exists ("0.725"), else nullopt ("5/6").
  [[nodiscard]] std::optional<std::string> exact_decimal() const;

  /// Largest integer not greater than this value.
  [[nodiscard]] BigInt floor() const;

  [[nodiscard]] Rational abs() const;
  [[nodiscard]] std::size_t hash() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  /// Throws std::domain_error on division by zero.
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  Rational operator-() const;

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return cmp(lhs.value_, rhs.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    const int c = cmp(lhs.value_, rhs.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

  [[nodiscard]] const mpq_class& raw() const { return value_; }

 private:
  mpq_class value_{0};
};

/// Least common multiple of the denominators of `values` (1 for an empty range).
template <typename Range>
BigInt common_denominator(const Range& values) {
  BigInt lcm_value = 1;
  for (const Rational& v : values) {
    mpz_lcm(lcm_value.get_mpz_t(), lcm_value.get_mpz_t(), v.raw().get_den_mpz_t());
  }
  return lcm_value;
}

}  // namespace msrmp

template <>
struct std::hash<msrmp::Rational> {
  std::size_t operator()(const msrmp::Rational& r) const noexcept { return r.hash(); }
};

#endif  // MSRMP_RATIONAL_HPP
