#pragma once

#include <cstdint>
#include <random>

#include "superconn/bundles.hpp"
#include "superconn/cartan.hpp"
#include "superconn/exterior.hpp"

namespace superconn {

/// Seeded generator of small random polynomials and forms. Deterministic
/// for a given seed on every platform (only the raw engine output is used).
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  int uniform(int lo, int hi);
  bool coin(int percent_true);
  /// Nonzero rational with numerator in [-3, 3] and denominator in {1, 2, 3}.
  Ratio small_ratio();
  Poly poly(int chart_dim, int max_degree, int max_terms = 3);
  /// Random form homogeneous of `degree` (may come out zero when degree > m).
  Form form(int chart_dim, int degree, int max_poly_degree, int max_terms = 2);
  /// Random sum of homogeneous pieces of degrees 0..m.
  Form mixed_form(int chart_dim, int max_poly_degree);
  /// Random superform with up to three monomials of superform degree <= max_degree.
  SuperForm superform(int chart_dim, int max_degree, int max_poly_degree, int theta_cap);

private:
  std::mt19937_64 engine_;
};

}  // namespace superconn
