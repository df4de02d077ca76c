#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cop {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact decimal money. All pricing and aggregation happens on rationals;
/// conversion to double is a display/statistics boundary only.
class Money {
 public:
  Money() = default;
  explicit Money(Rational v) : value_(std::move(v)) {}
  explicit Money(long v) : value_(v) {}

  /// Parses a decimal literal ("58.33", "4.8e-5", "-1", "1,250").
  /// Commas are accepted as thousands separators. Throws std::invalid_argument
  /// on anything else.
  static Money parse(std::string_view text);

  const Rational& value() const { return value_; }
  double to_double() const { return static_cast<double>(value_); }

  bool is_negative() const { return value_ < 0; }
  bool is_zero() const { return value_ == 0; }

  /// Exact decimal string when the denominator divides a power of ten,
  /// otherwise rounded to `max_digits` significant digits.
  std::string to_string(int max_digits = 15) const;

  Money operator+(const Money& o) const { return Money(value_ + o.value_); }
  Money operator-(const Money& o) const { return Money(value_ - o.value_); }
  Money operator*(const Rational& r) const { return Money(value_ * r); }
  Money operator/(const Rational& r) const {
    if (r == 0) throw std::domain_error("Money: division by zero");
    return Money(value_ / r);
  }
  Money& operator+=(const Money& o) {
    value_ += o.value_;
    return *this;
  }

  friend bool operator==(const Money&, const Money&) = default;
  friend auto operator<=>(const Money& a, const Money& b) {
    return a.value_ < b.value_   ? std::strong_ordering::less
           : a.value_ > b.value_ ? std::strong_ordering::greater
                                 : std::strong_ordering::equal;
  }

 private:
  Rational value_{0};
};

/// A value on the extended non-negative money line. INFINITY is the
/// cost-of-pass of an infeasible cell (success probability zero).
class ExtMoney {
 public:
  ExtMoney() = default;
  ExtMoney(Money m) : finite_(std::move(m)), infinite_(false) {}  // NOLINT
  static ExtMoney infinity() {
    ExtMoney e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  const Money& finite() const {
    if (infinite_) throw std::domain_error("ExtMoney: value is infinite");
    return finite_;
  }
  double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity()
                     : finite_.to_double();
  }
  std::string to_string(int max_digits = 15) const {
    return infinite_ ? "inf" : finite_.to_string(max_digits);
  }

  ExtMoney operator+(const ExtMoney& o) const {
    if (infinite_ || o.infinite_) return infinity();
    return ExtMoney(finite_ + o.finite_);
  }
  ExtMoney operator*(const Rational& r) const {
    if (infinite_) return infinity();
    return ExtMoney(finite_ * r);
  }
  ExtMoney operator/(const Rational& r) const {
    if (infinite_) return infinity();
    return ExtMoney(finite_ / r);
  }

  friend bool operator==(const ExtMoney& a, const ExtMoney& b) {
    if (a.infinite_ != b.infinite_) return false;
    return a.infinite_ || a.finite_ == b.finite_;
  }
  friend bool operator<(const ExtMoney& a, const ExtMoney& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.finite_ < b.finite_;
  }
  friend bool operator<=(const ExtMoney& a, const ExtMoney& b) {
    return a < b || a == b;
  }

  /// a - b under the gain conventions: INF - finite = INF, INF - INF = 0.
  static ExtMoney gain_diff(const ExtMoney& a, const ExtMoney& b) {
    if (a.infinite_ && b.infinite_) return ExtMoney(Money(0));
    if (a.infinite_) return infinity();
    if (b.infinite_)
      throw std::domain_error("ExtMoney: finite minus infinite gain");
    return ExtMoney(a.finite_ - b.finite_);
  }

  /// a / b under the essentialness conventions: finite/INF = 0, INF/INF = 1,
  /// 0/0 = 1 (so 1 - ratio is 0 for degenerate equal frontiers).
  static Rational ratio(const ExtMoney& a, const ExtMoney& b) {
    if (a.infinite_ && b.infinite_) return 1;
    if (b.infinite_) return 0;
    if (a.infinite_)
      throw std::domain_error("ExtMoney: infinite over finite ratio");
    if (b.finite_.is_zero()) {
      if (a.finite_.is_zero()) return 1;
      throw std::domain_error("ExtMoney: division by zero ratio");
    }
    return a.finite_.value() / b.finite_.value();
  }

  /// Mean of a nonempty vector; INFINITY-absorbing.
  static ExtMoney mean(const std::vector<ExtMoney>& values);

 private:
  Money finite_{};
  bool infinite_ = false;
};

}  // namespace cop
