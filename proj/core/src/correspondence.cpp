#include "superconn/correspondence.hpp"

#include "superconn/errors.hpp"
#include "superconn/sampling.hpp"

namespace superconn {

namespace {

void check_tensor_list(const std::vector<EndForm>& K, const char* what) {
  if (K.empty()) throw DimensionError(std::string(what) + ": needs one value per coordinate field");
  const int m = K.front().chart_dim();
  if (static_cast<int>(K.size()) != m) throw DimensionError(std::string(what) + ": needs one value per coordinate field");
  for (const EndForm& W : K)
    if (W.rank() != K.front().rank() || W.chart_dim() != m)
      throw DimensionError(std::string(what) + ": values live on different bundles");
}

std::vector<EndForm> difference(const std::vector<EndForm>& a, const std::vector<EndForm>& b) {
  std::vector<EndForm> r;
  r.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r.push_back(a[k] - b.at(k));
  return r;
}

void check_same_base(const GradedConnection& C1, const GradedConnection& C2) {
  if (C1.rank() != C2.rank() || C1.chart_dim() != C2.chart_dim())
    throw DimensionError("graded connections live on different bundles");
  if (C1.gamma != C2.gamma || C1.omega != C2.omega)
    throw PreconditionError("comparison needs the same Christoffel symbols and connection matrix");
}

}  // namespace

EndForm antisym_K0(const std::vector<EndForm>& K0) {
  check_tensor_list(K0, "antisym_K0");
  const int m = K0.front().chart_dim();
  EndForm r(K0.front().rank(), m);
  for (int k = 0; k < m; ++k)
    if (!K0[k].is_zero()) r += left_multiply(Form::dx(m, {k}), K0[k]);
  return r;
}

EndForm tilde_K1(const std::vector<EndForm>& K1, const Christoffel& G) {
  check_tensor_list(K1, "tilde_K1");
  const int m = K1.front().chart_dim();
  if (G.chart_dim() != m) throw DimensionError("tilde_K1: Christoffel chart mismatch");
  EndForm r(K1.front().rank(), m);
  for (int rr = 0; rr < m; ++rr) {
    if (K1[rr].is_zero()) continue;
    Form coeff(m);
    for (int k = 0; k < m; ++k)
      for (int q = 0; q < m; ++q)
        if (k != q && !G(rr, k, q).is_zero()) coeff += G(rr, k, q) * Form::dx(m, {k, q});
    if (!coeff.is_zero()) r += left_multiply(coeff, K1[rr]);
  }
  return r;
}

Superconnection induce(const GradedConnection& C) {
  C.validate();
  return Superconnection(C.omega, antisym_K0(C.K0) + tilde_K1(C.K1, C.gamma));
}

ESection induce_apply_via_superforms(const GradedConnection& C, const ESection& s) {
  const ESuperForm ds = covariant_sform_d(C, ESuperForm::from_section(s));
  return sform_pair(d_as_derivation(C.gamma), ds);
}

void check_n_tensor(const EndForm& N) {
  for (int i = 0; i < N.size(); ++i)
    for (int j = 0; j < N.size(); ++j) {
      const Form& e = N(i, j);
      if (e.is_zero()) continue;
      if (e.degrees() != std::vector<int>{0})
        throw DegreeError("N entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") must be a function");
      if (N.rank().end_parity(i, j) != 1)
        throw ParityError("N entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") must lie in End^1");
    }
}

SuperconnectionDecomposition decompose_superconnection(const Superconnection& D) {
  const SuperRank rank = D.rank();
  const int m = D.chart_dim();
  EndForm N = D.P.form_degree_part(0);
  std::vector<EndForm> K0(static_cast<std::size_t>(m), EndForm(rank, m));
  for (int j : D.P.form_degrees()) {
    if (j == 0) continue;
    const EndForm Pj = D.P.form_degree_part(j);
    for (int k = 0; k < m; ++k) K0[k] += Ratio(1, j) * interior_basis(k, Pj);
  }
  std::vector<EndForm> K1(static_cast<std::size_t>(m), EndForm(rank, m));
  return {GradedConnection(Christoffel(m), D.omega, std::move(K0), std::move(K1)), std::move(N)};
}

Superconnection induce_with(const GradedConnection& C, const EndForm& N) {
  check_n_tensor(N);
  Superconnection D = induce(C);
  return Superconnection(D.omega, D.P + N);
}

bool same_induced(const GradedConnection& C1, const GradedConnection& C2) {
  check_same_base(C1, C2);
  return (antisym_K0(difference(C1.K0, C2.K0)) + tilde_K1(difference(C1.K1, C2.K1), C1.gamma)).is_zero();
}

SameInducedConditions same_induced_conditions(const GradedConnection& C1, const GradedConnection& C2) {
  check_same_base(C1, C2);
  return {antisym_K0(difference(C1.K0, C2.K0)).is_zero(), tilde_K1(difference(C1.K1, C2.K1), C1.gamma).is_zero()};
}

CurvatureRelation curvature_relation(const GradedConnection& C, const EndForm& N) {
  const Superconnection D = induce_with(C, N);
  const SuperRank rank = C.rank();
  const int m = C.chart_dim();
  const DerivationSpec d = d_as_derivation(C.gamma);

  EndForm rhs = Ratio(1, 2) * graded_curvature(C, d, d);
  if (!N.is_zero()) {
    // Both ∇∇_d and N are odd, so their graded commutator is the anticommutator.
    auto op = [&](const ESection& s) { return nn_apply(C, d, end_apply(N, s)) + end_apply(N, nn_apply(C, d, s)); };
    EndForm DN(rank, m);
    for (int l = 0; l < rank.size(); ++l) {
      const ESection col = op(ESection::basis(rank, m, l));
      for (int i = 0; i < rank.size(); ++i) DN(i, l) = col[i];
    }
    Sampler rng(0xbead);
    for (int l = 0; l < rank.size(); ++l) {
      const ESection s = left_multiply(rng.form(m, rng.uniform(0, m), 2), ESection::basis(rank, m, l));
      if (op(s) != end_apply(DN, s))
        throw ConsistencyError("[nabla_d, N] is not linear over forms; sign conventions are inconsistent");
    }
    rhs += DN;
    rhs += end_compose(N, N);
  }
  return {sc_curvature(D), std::move(rhs)};
}

}  // namespace superconn
