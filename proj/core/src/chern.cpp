#include "superconn/chern.hpp"

#include "superconn/errors.hpp"

namespace superconn {

namespace {

bool tensors_vanish(const GradedConnection& C) {
  for (int k = 0; k < C.chart_dim(); ++k)
    if (!C.K0[k].is_zero() || !C.K1[k].is_zero()) return false;
  return true;
}

}  // namespace

SuperForm chern_superform(const GradedConnection& C, int k, int theta_cap) {
  if (k < 1) throw PreconditionError("chern_superform: k must be positive");
  return supertrace(end_power(curvature_2sform(C, theta_cap), k));
}

bool is_closed(const SuperForm& s) { return sform_d(s).is_zero(); }

ChernReport chern_report(const GradedConnection& C, int k, int theta_cap) {
  ChernReport r;
  r.k = k;
  r.superform = chern_superform(C, k, theta_cap);
  r.closedness_witness = sform_d(r.superform);
  r.kappa_projection = kappa(r.superform);
  if (tensors_vanish(C)) r.classical_comparison = classical_chern(Superconnection::from_connection(C.omega), k);
  return r;
}

SuperForm integrate_unit(const SuperForm& s) {
  SuperForm r(s.chart_dim(), s.theta_cap());
  for (const auto& [mono, coeff] : s.terms()) {
    Form c(s.chart_dim());
    for (const auto& [mask, p] : coeff.terms()) c.add_term(mask, integrate_unit(p));
    r.add_term(mono, c);
  }
  return r;
}

SuperForm transgression(const GradedConnection& C0, const GradedConnection& C1, int k, int theta_cap) {
  if (k < 1) throw PreconditionError("transgression: k must be positive");
  if (C0.rank() != C1.rank() || C0.chart_dim() != C1.chart_dim())
    throw DimensionError("transgression: connections live on different bundles");
  if (C0.gamma != C1.gamma || C0.omega != C1.omega)
    throw PreconditionError("transgression: connections must share the Christoffel symbols and connection matrix");
  const int m = C0.chart_dim();
  const EndSuperForm theta0 = connection_superform(C0, theta_cap);
  const EndSuperForm P = connection_superform(C1, theta_cap) - theta0;
  EndSuperForm integrand = P;
  if (k > 1) {
    const EndSuperForm Rt = detail::curvature_raw(theta0 + Poly::param(m) * P);
    EndSuperForm power = Rt;
    for (int i = 2; i < k; ++i) power = detail::compose_raw(power, Rt);
    integrand = detail::compose_raw(power, P);
  }
  SuperForm eta = integrate_unit(Ratio(k) * supertrace(integrand));
  eta.check_cap();
  return eta;
}

ChernMatch chern_match(const GradedConnection& C, int k, int theta_cap) {
  if (!tensors_vanish(C)) throw PreconditionError("chern_match: needs K0 = K1 = 0");
  return {kappa(chern_superform(C, k, theta_cap)), classical_chern(Superconnection::from_connection(C.omega), k)};
}

EndForm dual_connection(const EndForm& omega) {
  EndForm r(omega.rank(), omega.chart_dim());
  for (int i = 0; i < omega.size(); ++i)
    for (int j = 0; j < omega.size(); ++j) r(i, j) = -omega(j, i);
  return r;
}

Form supertangent_chern(const EndForm& tangent, const EndForm& fiber_dual, int k) {
  const int m = tangent.chart_dim();
  if (fiber_dual.chart_dim() != m) throw DimensionError("supertangent_chern: blocks on different charts");
  const int a = tangent.size(), b = fiber_dual.size();
  EndForm omega(SuperRank(a, b), m);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) omega(i, j) = tangent(i, j);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) omega(a + i, a + j) = fiber_dual(i, j);
  return classical_chern(Superconnection::from_connection(omega), k);
}

Form supercotangent_chern(const EndForm& tangent, const EndForm& fiber_dual, int k) {
  return supertangent_chern(dual_connection(tangent), dual_connection(fiber_dual), k);
}

Form supertangent_chern(int chart_dim, int k) {
  // A flat chart carries the zero Levi-Civita connection on TM.
  const EndForm flat(SuperRank(chart_dim, 0), chart_dim);
  return supertangent_chern(flat, flat, k);
}

}  // namespace superconn
