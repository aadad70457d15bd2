#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "superconn/ratio.hpp"

namespace superconn {

/// Packed exponent vector: byte i holds the exponent of coordinate x_{i+1},
/// byte 7 holds the exponent of the homotopy parameter t.
using Exponents = std::uint64_t;

/// Exact polynomial over the rationals in the chart coordinates x_1..x_m and
/// the homotopy parameter t. Terms are kept sorted by packed exponent with no
/// zero coefficients, so equality is structural.
class Poly {
public:
  static constexpr int kMaxChartDim = 7;
  static constexpr int kParamSlot = 7;
  static constexpr int kMaxExponent = 255;

  using Term = std::pair<Exponents, Ratio>;

  explicit Poly(int chart_dim = 1);

  static Poly constant(int chart_dim, const Ratio& c);
  /// The coordinate x_{index+1} (index is 0-based).
  static Poly coordinate(int chart_dim, int index);
  static Poly param(int chart_dim);
  static Poly monomial(int chart_dim, Exponents exps, const Ratio& c);
  /// Builds a polynomial from arbitrary terms (duplicates merged, zeros dropped).
  static Poly from_terms(int chart_dim, std::vector<Term> terms);

  static int exponent(Exponents e, int slot) { return static_cast<int>((e >> (8 * slot)) & 0xFF); }
  static int total_degree(Exponents e);

  int chart_dim() const noexcept { return dim_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  bool has_param() const noexcept;
  /// Largest total degree over the terms (t included); -1 for zero.
  int degree() const noexcept;
  const std::vector<Term>& terms() const noexcept { return terms_; }
  Ratio coefficient(Exponents e) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly& operator*=(const Ratio& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Ratio& c) { return a *= c; }
  friend Poly operator*(const Ratio& c, Poly a) { return a *= c; }

  Poly pow(unsigned n) const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }

  /// Canonical text in graded-lex order, e.g. "3/2*x^2*y - 1". `names` holds
  /// the coordinate names; the parameter prints as "t".
  std::string str(std::span<const std::string> names) const;
  /// Same, with default names x1..xm.
  std::string str() const;

private:
  void check_same_chart(const Poly& o) const;

  int dim_;
  std::vector<Term> terms_;
};

/// Partial derivative along the coordinate x_{index+1} (index 0-based).
Poly partial(const Poly& p, int index);

/// Definite integral over t in [0, 1]; the result is free of t.
Poly integrate_unit(const Poly& p);

/// Default coordinate names x1..xm.
std::vector<std::string> default_coordinate_names(int chart_dim);

}  // namespace superconn
