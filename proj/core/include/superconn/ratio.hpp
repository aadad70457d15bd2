#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace superconn {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
class Ratio {
public:
  Ratio() = default;
  Ratio(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Ratio(long numerator, long denominator);
  explicit Ratio(mpq_class value);

  /// Parses "n" or "n/d" with an optional leading sign.
  static Ratio parse(std::string_view text);

  const mpq_class& value() const noexcept { return value_; }
  bool is_zero() const noexcept { return sgn(value_) == 0; }
  int sign() const noexcept { return sgn(value_); }
  bool is_integer() const { return value_.get_den() == 1; }
  Ratio abs() const { return Ratio(mpq_class(::abs(value_))); }

  Ratio operator-() const { return Ratio(mpq_class(-value_)); }
  Ratio& operator+=(const Ratio& o) { value_ += o.value_; return *this; }
  Ratio& operator-=(const Ratio& o) { value_ -= o.value_; return *this; }
  Ratio& operator*=(const Ratio& o) { value_ *= o.value_; return *this; }
  Ratio& operator/=(const Ratio& o);

  friend Ratio operator+(Ratio a, const Ratio& b) { return a += b; }
  friend Ratio operator-(Ratio a, const Ratio& b) { return a -= b; }
  friend Ratio operator*(Ratio a, const Ratio& b) { return a *= b; }
  friend Ratio operator/(Ratio a, const Ratio& b) { return a /= b; }

  friend bool operator==(const Ratio& a, const Ratio& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// "n" for integers, "n/d" otherwise.
  std::string str() const;

private:
  mpq_class value_;
};

}  // namespace superconn
