#include "msrmp/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace msrmp {

std::string to_string(const BigInt& value) { return value.get_str(10); }

Rational::Rational(std::int64_t integer) {
  // mpq_class has no int64 constructor on every platform; go through mpz.
  mpz_class z;
  mpz_set_si(z.get_mpz_t(), static_cast<long>(integer));
  value_ = mpq_class(z);
}

Rational::Rational(std::int64_t numerator, std::int64_t denominator)
    : Rational(BigInt(static_cast<long>(numerator)), BigInt(static_cast<long>(denominator))) {}

Rational::Rational(const BigInt& integer) : value_(integer) {}

Rational::Rational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt digits_to_int(std::string_view s) { return BigInt(std::string(s), 10); }

}  // namespace

Rational Rational::parse(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("not an exact number: \"" + original + "\"");
  };
  if (text.empty()) return fail();

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Rational result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    const BigInt d = digits_to_int(den);
    if (d == 0) return fail();
    result = Rational(digits_to_int(num), d);
  } else {
    const auto dot = text.find('.');
    const auto int_part = text.substr(0, dot);
    const auto frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) return fail();
    if (!int_part.empty() && !all_digits(int_part)) return fail();
    if (dot != std::string_view::npos && !frac_part.empty() && !all_digits(frac_part)) return fail();
    if (dot != std::string_view::npos && frac_part.empty()) return fail();

    BigInt scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    BigInt numerator = int_part.empty() ? BigInt(0) : digits_to_int(int_part);
    numerator *= scale;
    if (!frac_part.empty()) numerator += digits_to_int(frac_part);
    result = Rational(numerator, scale);
  }
  return negative ? -result : result;
}

std::string Rational::to_string() const { return value_.get_str(10); }

BigInt Rational::floor() const {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return q;
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

std::string Rational::to_decimal(int places) const {
  if (places < 0) throw std::invalid_argument("negative decimal precision");
  BigInt scale = 1;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));

  const Rational magnitude = abs() * Rational(scale);
  BigInt scaled = magnitude.floor();
  const Rational remainder = magnitude - Rational(scaled);
  const Rational half(1, 2);
  if (remainder > half || (remainder == half && mpz_odd_p(scaled.get_mpz_t()) != 0)) {
    scaled += 1;
  }

  std::string digits = scaled.get_str(10);
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  if (sign() < 0 && scaled != 0) digits.insert(0, "-");
  return digits;
}

std::optional<std::string> Rational::exact_decimal() const {
  BigInt den = denominator();
  std::size_t twos = 0;
  std::size_t fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2) != 0) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5) != 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return std::nullopt;
  return to_decimal(static_cast<int>(std::max(twos, fives)));
}

std::size_t Rational::hash() const {
  // Low limbs only; collisions are resolved by operator==.
  const std::size_t h1 = mpz_get_ui(value_.get_num_mpz_t()) ^ static_cast<std::size_t>(sign() < 0);
  const std::size_t h2 = mpz_get_ui(value_.get_den_mpz_t());
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational Rational::operator-() const {
  Rational r;
  r.value_ = -value_;
  return r;
}

}  // namespace msrmp
