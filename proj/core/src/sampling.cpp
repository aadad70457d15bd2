#include "superconn/sampling.hpp"

namespace superconn {

int Sampler::uniform(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

bool Sampler::coin(int percent_true) { return uniform(0, 99) < percent_true; }

Ratio Sampler::small_ratio() {
  int n = uniform(-3, 2);
  if (n >= 0) ++n;
  return Ratio(n, uniform(1, 3));
}

Poly Sampler::poly(int chart_dim, int max_degree, int max_terms) {
  std::vector<Poly::Term> terms;
  const int count = uniform(1, max_terms);
  for (int t = 0; t < count; ++t) {
    const int degree = uniform(0, max_degree);
    Exponents e = 0;
    for (int d = 0; d < degree; ++d) e += Exponents{1} << (8 * uniform(0, chart_dim - 1));
    terms.emplace_back(e, small_ratio());
  }
  return Poly::from_terms(chart_dim, std::move(terms));
}

Form Sampler::form(int chart_dim, int degree, int max_poly_degree, int max_terms) {
  Form f(chart_dim);
  if (degree < 0 || degree > chart_dim) return f;
  const int count = uniform(1, max_terms);
  for (int t = 0; t < count; ++t) {
    // Random subset of size `degree`.
    IndexMask mask = 0;
    while (mask_degree(mask) < degree) mask |= IndexMask{1} << uniform(0, chart_dim - 1);
    f.add_term(mask, poly(chart_dim, max_poly_degree, 2));
  }
  return f;
}

Form Sampler::mixed_form(int chart_dim, int max_poly_degree) {
  Form f(chart_dim);
  for (int d = 0; d <= chart_dim; ++d)
    if (coin(60)) f += form(chart_dim, d, max_poly_degree, 1);
  return f;
}

SuperForm Sampler::superform(int chart_dim, int max_degree, int max_poly_degree, int theta_cap) {
  SuperForm S(chart_dim, theta_cap);
  const int count = uniform(1, 3);
  for (int t = 0; t < count; ++t) {
    SMono mono;
    const int degree = uniform(0, max_degree);
    for (int g = 0; g < degree; ++g) {
      const int k = uniform(0, chart_dim - 1);
      if (coin(50) && mono.theta_degree() < theta_cap)
        mono.theta += Exponents{1} << (8 * k);
      else
        mono.xi |= IndexMask{1} << k;
    }
    S.add_term(mono, mixed_form(chart_dim, max_poly_degree));
  }
  return S;
}

}  // namespace superconn
