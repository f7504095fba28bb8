#include "reval/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "reval/error.hpp"

namespace reval {

namespace {

using i128 = __int128;

std::int64_t checked_narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::Overflow, "rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void normalize(i128& num, i128& den) {
  if (den == 0) throw Error(ErrorCode::Overflow, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational make_normalized(i128 num, i128 den) {
  normalize(num, den);
  return Rational(checked_narrow(num), checked_narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  i128 n = numerator;
  i128 d = denominator;
  normalize(n, d);
  num_ = checked_narrow(n);
  den_ = checked_narrow(d);
}

Rational Rational::from_string(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational");

  auto parse_int = [](const std::string& t) -> std::int64_t {
    if (t.empty()) throw Error(ErrorCode::ParseError, "empty integer in rational");
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(t, &pos);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad rational literal '" + t + "'");
    }
    if (pos != t.size())
      throw Error(ErrorCode::ParseError, "bad rational literal '" + t + "'");
    return v;
  };

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (frac.empty()) return Rational(parse_int(whole));
    if (frac.size() > 18)
      throw Error(ErrorCode::ParseError, "decimal too precise for rational: " + s);
    bool negative = !whole.empty() && whole[0] == '-';
    std::int64_t w = whole.empty() || whole == "-" || whole == "+" ? 0 : parse_int(whole);
    std::int64_t f = parse_int(frac);
    if (f < 0) throw Error(ErrorCode::ParseError, "bad rational literal '" + s + "'");
    i128 den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    i128 num = i128(w < 0 ? -w : w) * den + f;
    if (negative || w < 0) num = -num;
    return make_normalized(num, den);
  }
  return Rational(parse_int(s));
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator+(const Rational& o) const {
  return make_normalized(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return make_normalized(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return make_normalized(i128(num_) * o.num_, i128(den_) * o.den_);
}

bool Rational::operator<(const Rational& o) const {
  return i128(num_) * o.den_ < i128(o.num_) * den_;
}

}  // namespace reval
