#include "cop/money.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cop {
namespace {

BigInt pow10(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

}  // namespace

Money Money::parse(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (char ch : text) {
    if (ch == ',' || ch == ' ') continue;  // thousands separators
    s.push_back(ch);
  }
  if (s.empty()) throw std::invalid_argument("Money: empty literal");

  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') {
    negative = (s[i] == '-');
    ++i;
  }
  BigInt digits = 0;
  long frac_places = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (seen_dot) throw std::invalid_argument("Money: bad literal '" + s + "'");
      seen_dot = true;
      continue;
    }
    digits = digits * 10 + (s[i] - '0');
    if (seen_dot) ++frac_places;
    seen_digit = true;
  }
  if (!seen_digit) throw std::invalid_argument("Money: bad literal '" + s + "'");

  long exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool exp_neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      exp_neg = (s[i] == '-');
      ++i;
    }
    if (i == s.size()) throw std::invalid_argument("Money: bad exponent in '" + s + "'");
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        throw std::invalid_argument("Money: bad exponent in '" + s + "'");
      exponent = exponent * 10 + (s[i] - '0');
      if (exponent > 1000) throw std::invalid_argument("Money: exponent out of range");
    }
    if (exp_neg) exponent = -exponent;
  }
  if (i != s.size()) throw std::invalid_argument("Money: bad literal '" + s + "'");

  long net = exponent - frac_places;
  Rational v(digits);
  if (net > 0)
    v *= Rational(pow10(static_cast<unsigned>(net)));
  else if (net < 0)
    v /= Rational(pow10(static_cast<unsigned>(-net)));
  if (negative) v = -v;
  return Money(std::move(v));
}

std::string Money::to_string(int max_digits) const {
  if (value_ == 0) return "0";
  BigInt num = boost::multiprecision::numerator(value_);
  BigInt den = boost::multiprecision::denominator(value_);
  bool neg = num < 0;
  if (neg) num = -num;

  // Terminating decimal iff den = 2^a * 5^b.
  BigInt d = den;
  unsigned twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  std::string out;
  if (d == 1) {
    unsigned places = std::max(twos, fives);
    BigInt scaled = num * pow10(places) / den;
    std::string digits = scaled.str();
    if (places == 0) {
      out = digits;
    } else {
      if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
      digits.insert(digits.size() - places, ".");
      // trim trailing zeros in the fraction
      while (digits.back() == '0') digits.pop_back();
      if (digits.back() == '.') digits.pop_back();
      out = digits;
    }
  } else {
    // Non-terminating: round to max_digits significant digits.
    std::ostringstream oss;
    oss.precision(max_digits);
    oss << static_cast<double>(value_ < 0 ? -value_ : value_);
    out = oss.str();
  }
  return neg ? "-" + out : out;
}

ExtMoney ExtMoney::mean(const std::vector<ExtMoney>& values) {
  if (values.empty()) throw std::domain_error("ExtMoney: mean of empty set");
  Money sum(0);
  for (const auto& v : values) {
    if (v.is_infinite()) return infinity();
    sum += v.finite();
  }
  return ExtMoney(sum / Rational(static_cast<long>(values.size())));
}

}  // namespace cop
