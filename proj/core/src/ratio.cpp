#include "superconn/ratio.hpp"

#include "superconn/errors.hpp"

#include <cctype>

namespace superconn {

Ratio::Ratio(long numerator, long denominator) {
  if (denominator == 0) throw Error("zero denominator");
  value_ = mpq_class(mpz_class(numerator), mpz_class(denominator));
  value_.canonicalize();
}

Ratio::Ratio(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Ratio& Ratio::operator/=(const Ratio& o) {
  if (o.is_zero()) throw Error("division by zero");
  value_ /= o.value_;
  return *this;
}

Ratio Ratio::parse(std::string_view text) {
  std::string digits;
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) digits += text[i++];
  const std::size_t start = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
  if (i == start) throw Error("malformed rational literal '" + std::string(text) + "'");
  if (i < text.size()) {
    if (text[i] != '/') throw Error("malformed rational literal '" + std::string(text) + "'");
    digits += text[i++];
    const std::size_t den_start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
    if (i == den_start || i != text.size())
      throw Error("malformed rational literal '" + std::string(text) + "'");
  }
  mpq_class v;
  if (v.set_str(digits, 10) != 0) throw Error("malformed rational literal '" + std::string(text) + "'");
  if (v.get_den() == 0) throw Error("zero denominator");
  return Ratio(std::move(v));
}

std::string Ratio::str() const { return value_.get_str(); }

}  // namespace superconn
