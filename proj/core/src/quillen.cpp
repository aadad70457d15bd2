#include "superconn/quillen.hpp"

#include "superconn/errors.hpp"
#include "superconn/sampling.hpp"

namespace superconn {

Superconnection::Superconnection(EndForm omega_, EndForm P_) : omega(std::move(omega_)), P(std::move(P_)) {
  if (omega.rank() != P.rank() || omega.chart_dim() != P.chart_dim())
    throw DimensionError("superconnection: omega and P live on different bundles");
  check_connection_matrix(omega);
  if (!P.has_total_parity(1)) throw ParityError("superconnection: P must have odd total degree");
}

Superconnection Superconnection::from_connection(EndForm omega) {
  EndForm P(omega.rank(), omega.chart_dim());
  return Superconnection(std::move(omega), std::move(P));
}

namespace {

void check_block(const EndForm& T, int row_parity, int col_parity, int degree, const char* name) {
  const SuperRank r = T.rank();
  for (int i = 0; i < T.size(); ++i)
    for (int j = 0; j < T.size(); ++j) {
      const Form& f = T(i, j);
      if (f.is_zero()) continue;
      if (r.slot_parity(i) != row_parity || r.slot_parity(j) != col_parity)
        throw ParityError(std::string(name) + " has entries outside its block");
      auto d = f.degrees();
      if (d.size() != 1 || d.front() != degree)
        throw DegreeError(std::string(name) + " entries must be " + std::to_string(degree) + "-forms");
    }
}

}  // namespace

Superconnection DegreeOneData::superconnection() const {
  check_block(T1, 0, 0, 1, "T1");
  check_block(T2, 1, 1, 1, "T2");
  check_block(T3, 0, 1, 0, "T3");
  check_block(T4, 1, 0, 0, "T4");
  return Superconnection(omega, T1 + T2 + T3 + T4);
}

ESection sc_apply(const Superconnection& D, const ESection& s) {
  if (s.rank() != D.rank() || s.chart_dim() != D.chart_dim()) throw DimensionError("sc_apply: bundle mismatch");
  return ext_d(s) + end_apply(D.connection_form(), s);
}

EndForm sc_curvature(const Superconnection& D) {
  const EndForm w = D.connection_form();
  return ext_d(w) + end_compose(w, w);
}

EndForm sc_curvature_extracted(const Superconnection& D) {
  const SuperRank rank = D.rank();
  const int m = D.chart_dim();
  auto square = [&D](const ESection& s) { return sc_apply(D, sc_apply(D, s)); };
  EndForm R(rank, m);
  std::vector<ESection> columns;
  for (int l = 0; l < rank.size(); ++l) {
    columns.push_back(square(ESection::basis(rank, m, l)));
    for (int i = 0; i < rank.size(); ++i) R(i, l) = columns.back()[i];
  }
  // D² is even, so it must commute with every form multiplier.
  Sampler rng(0x5eed);
  for (int l = 0; l < rank.size(); ++l) {
    std::vector<Form> multipliers;
    for (int k = 0; k < m; ++k) multipliers.push_back(Form::function(Poly::coordinate(m, k)));
    for (int probe = 0; probe < 2; ++probe) multipliers.push_back(rng.form(m, rng.uniform(0, m), 2));
    for (const Form& a : multipliers) {
      const ESection s = left_multiply(a, ESection::basis(rank, m, l));
      if (square(s) != left_multiply(a, columns[l]))
        throw ConsistencyError("D^2 is not linear over forms; sign conventions are inconsistent");
    }
  }
  return R;
}

EndForm end_power(const EndForm& W, int k) {
  if (k < 1) throw PreconditionError("end_power: exponent must be positive");
  EndForm r = W;
  for (int i = 1; i < k; ++i) r = end_compose(r, W);
  return r;
}

Form classical_chern(const Superconnection& D, int k) { return supertrace(end_power(sc_curvature(D), k)); }

}  // namespace superconn
