#pragma once

#include <cstdint>
#include <string>

namespace reval {

// Exact rational with int64 numerator/denominator, always normalized
// (gcd 1, denominator > 0). Criterion weights and weighted totals are
// rationals so "twice the weight" and fractional tuning never round.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  Rational(std::int64_t numerator, std::int64_t denominator = 1);

  static Rational from_string(const std::string& text);  // "3", "3/2", "1.5"

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;  // "3" or "3/2"

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator*(std::int64_t k) const { return *this * Rational(k); }

  bool operator==(const Rational& o) const = default;
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace reval
