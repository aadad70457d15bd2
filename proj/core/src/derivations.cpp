#include "superconn/derivations.hpp"

#include "superconn/errors.hpp"
#include "superconn/sampling.hpp"

namespace superconn {

namespace {

void check_degree(const Form& f, int degree, const char* what) {
  auto d = f.degrees();
  if (d.size() > 1 || (d.size() == 1 && d.front() != degree))
    throw DegreeError(std::string(what) + " must be homogeneous of degree " + std::to_string(degree));
}

Form dx1(int m, int index) { return Form::basis(m, IndexMask{1} << index, Poly::constant(m, Ratio(1))); }

// Σ_q Γ^j_{pq} dx^q.
Form connection_one_form(const Christoffel& G, int j, int p) {
  const int m = G.chart_dim();
  Form r(m);
  for (int q = 0; q < m; ++q) r.add_term(IndexMask{1} << q, G(j, p, q));
  return r;
}

}  // namespace

DerivationSpec::DerivationSpec(int chart_dim, int degree)
    : degree_(degree),
      A_(static_cast<std::size_t>(chart_dim), Form(chart_dim)),
      B_(static_cast<std::size_t>(chart_dim), Form(chart_dim)) {}

DerivationSpec::DerivationSpec(int degree, std::vector<Form> A, std::vector<Form> B)
    : degree_(degree), A_(std::move(A)), B_(std::move(B)) {
  const int m = static_cast<int>(A_.size());
  if (static_cast<int>(B_.size()) != m || m < 1) throw DimensionError("derivation needs m coefficients of each kind");
  for (int k = 0; k < m; ++k) {
    if (A_[k].chart_dim() != m || B_[k].chart_dim() != m) throw DimensionError("derivation coefficient chart mismatch");
    check_degree(A_[k], degree_, "derivation coefficient A");
    check_degree(B_[k], degree_ + 1, "derivation coefficient B");
  }
}

DerivationSpec DerivationSpec::coordinate_partial(int chart_dim, int index) {
  DerivationSpec d(chart_dim, 0);
  d.A_.at(static_cast<std::size_t>(index)) = Form::constant(chart_dim, Ratio(1));
  return d;
}

DerivationSpec DerivationSpec::insertion(int chart_dim, int index) {
  DerivationSpec d(chart_dim, -1);
  d.B_.at(static_cast<std::size_t>(index)) = Form::constant(chart_dim, Ratio(1));
  return d;
}

bool DerivationSpec::is_zero() const {
  for (std::size_t k = 0; k < A_.size(); ++k)
    if (!A_[k].is_zero() || !B_[k].is_zero()) return false;
  return true;
}

void DerivationSpec::check_compatible(const DerivationSpec& o) const {
  if (chart_dim() != o.chart_dim()) throw DimensionError("derivations on different charts");
  if (degree_ != o.degree_ && !is_zero() && !o.is_zero())
    throw DegreeError("cannot add derivations of different degrees");
}

DerivationSpec DerivationSpec::operator-() const {
  DerivationSpec r = *this;
  for (auto& f : r.A_) f = -f;
  for (auto& f : r.B_) f = -f;
  return r;
}

DerivationSpec& DerivationSpec::operator+=(const DerivationSpec& o) {
  check_compatible(o);
  if (is_zero()) degree_ = o.degree_;
  for (std::size_t k = 0; k < A_.size(); ++k) {
    A_[k] += o.A_[k];
    B_[k] += o.B_[k];
  }
  return *this;
}

DerivationSpec& DerivationSpec::operator-=(const DerivationSpec& o) { return *this += -o; }

DerivationSpec& DerivationSpec::operator*=(const Ratio& c) {
  for (auto& f : A_) f *= c;
  for (auto& f : B_) f *= c;
  return *this;
}

DerivationSpec left_multiply(const Form& alpha, const DerivationSpec& d) {
  auto deg = alpha.homogeneous_degree();
  if (!deg && !alpha.is_zero()) throw DegreeError("left_multiply: multiplier must be homogeneous");
  const int m = d.chart_dim();
  std::vector<Form> A, B;
  for (int k = 0; k < m; ++k) {
    A.push_back(wedge(alpha, d.A(k)));
    B.push_back(wedge(alpha, d.B(k)));
  }
  return DerivationSpec(d.degree() + deg.value_or(0), std::move(A), std::move(B));
}

void GeneratorAction::validate() const {
  if (on_coordinates.size() != on_differentials.size() || on_coordinates.empty())
    throw DimensionError("generator action needs m values of each kind");
  for (const Form& f : on_coordinates) check_degree(f, degree, "value on a coordinate");
  for (const Form& f : on_differentials) check_degree(f, degree + 1, "value on a differential");
}

Form apply_derivation(const DerivationSpec& d, const Form& a) {
  const int m = d.chart_dim();
  if (a.chart_dim() != m) throw DimensionError("apply_derivation: chart mismatch");
  Form r(m);
  for (int k = 0; k < m; ++k) {
    if (!d.A(k).is_zero()) r += wedge(d.A(k), partial(a, k));
    if (!d.B(k).is_zero()) r += wedge(d.B(k), interior_basis(k, a));
  }
  return r;
}

GeneratorAction generator_action(const DerivationSpec& d) {
  const int m = d.chart_dim();
  GeneratorAction act;
  act.degree = d.degree();
  for (int j = 0; j < m; ++j) {
    act.on_coordinates.push_back(apply_derivation(d, Form::function(Poly::coordinate(m, j))));
    act.on_differentials.push_back(apply_derivation(d, dx1(m, j)));
  }
  return act;
}

DerivationSpec from_generator_action(const GeneratorAction& act) {
  act.validate();
  return DerivationSpec(act.degree, act.on_coordinates, act.on_differentials);
}

Christoffel torsion(const Christoffel& G) {
  const int m = G.chart_dim();
  Christoffel T(m);
  for (int r = 0; r < m; ++r)
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) T(r, p, q) = G(r, p, q) - G(r, q, p);
  return T;
}

DerivationSpec compose_derivation(const VectorForm& K, const VectorForm& L, const Christoffel& G) {
  const int m = K.chart_dim();
  if (L.chart_dim() != m || G.chart_dim() != m) throw DimensionError("compose_derivation: chart mismatch");
  if (L.degree() != K.degree() + 1) throw DegreeError("compose_derivation: deg L must be deg K + 1");
  // ∇_{∂p} = ∂_p − Σ_j (Σ_q Γ^j_{pq} dx^q) ∧ i_{∂j}.
  std::vector<Form> A = K.components();
  std::vector<Form> B = L.components();
  for (int j = 0; j < m; ++j)
    for (int p = 0; p < m; ++p)
      if (!K[p].is_zero()) B[j] -= wedge(K[p], connection_one_form(G, j, p));
  return DerivationSpec(K.degree(), std::move(A), std::move(B));
}

DerivationDecomposition decompose_derivation(const GeneratorAction& act, const Christoffel& G) {
  act.validate();
  const int m = static_cast<int>(act.on_coordinates.size());
  if (G.chart_dim() != m) throw DimensionError("decompose_derivation: chart mismatch");
  VectorForm K(act.degree, act.on_coordinates);
  std::vector<Form> L = act.on_differentials;
  for (int j = 0; j < m; ++j) L[j] -= nabla_K(G, K, dx1(m, j));
  return {std::move(K), VectorForm(act.degree + 1, std::move(L))};
}

DerivationSpec lie_derivative(const VectorField& X, const Christoffel& G) {
  const int m = X.chart_dim();
  if (G.chart_dim() != m) throw DimensionError("lie_derivative: chart mismatch");
  std::vector<Form> K;
  for (const Poly& c : X.components) K.push_back(Form::function(c));
  const Christoffel T = torsion(G);
  // L(∂q) = ∇_{∂q} X + T(X, ∂q).
  std::vector<Form> L(static_cast<std::size_t>(m), Form(m));
  for (int r = 0; r < m; ++r) {
    for (int q = 0; q < m; ++q) {
      Poly c = partial(X.components[r], q);
      for (int p = 0; p < m; ++p)
        c += X.components[p] * G(r, q, p) + X.components[p] * T(r, p, q);
      L[r].add_term(IndexMask{1} << q, c);
    }
  }
  return compose_derivation(VectorForm(0, std::move(K)), VectorForm(1, std::move(L)), G);
}

DerivationSpec der_bracket(const DerivationSpec& d1, const DerivationSpec& d2) {
  const int m = d1.chart_dim();
  if (d2.chart_dim() != m) throw DimensionError("der_bracket: chart mismatch");
  const bool swap_odd = (d1.parity() & d2.parity()) != 0;
  GeneratorAction act;
  act.degree = d1.degree() + d2.degree();
  auto bracket_on = [&](const Form& g) {
    Form r = apply_derivation(d1, apply_derivation(d2, g));
    const Form back = apply_derivation(d2, apply_derivation(d1, g));
    return swap_odd ? r + back : r - back;
  };
  for (int j = 0; j < m; ++j) {
    act.on_coordinates.push_back(bracket_on(Form::function(Poly::coordinate(m, j))));
    act.on_differentials.push_back(bracket_on(dx1(m, j)));
  }
  return from_generator_action(act);
}

DerivationSpec d_as_derivation(const Christoffel& G) {
  const int m = G.chart_dim();
  // L_{∂k} = ∇_{∂k} + i_{L_k} with L_k(∂q) = Γ^r_{kq} ∂r; wedge with dx^k and sum.
  std::vector<Form> K;
  std::vector<Form> L(static_cast<std::size_t>(m), Form(m));
  for (int k = 0; k < m; ++k) K.push_back(dx1(m, k));
  for (int r = 0; r < m; ++r)
    for (int k = 0; k < m; ++k) L[r] += wedge(dx1(m, k), connection_one_form(G, r, k));
  DerivationSpec d = compose_derivation(VectorForm(1, std::move(K)), VectorForm(2, std::move(L)), G);
  for (int k = 0; k < m; ++k)
    if (d.A(k) != dx1(m, k) || !d.B(k).is_zero())
      throw ConsistencyError("d_as_derivation: connection terms failed to cancel");
  return d;
}

namespace {

template <class V>
struct Op {
  int parity;
  std::function<V(const V&)> apply;
};

template <class V, class Mul, class Make>
bool order_check(const Op<V>& op, int k, int trials, int chart_dim, Sampler& rng, Mul mul, Make make) {
  for (int trial = 0; trial < trials; ++trial) {
    Op<V> nested = op;
    for (int level = 0; level <= k; ++level) {
      const int degree = rng.uniform(0, chart_dim);
      Form a = rng.form(chart_dim, degree, 2);
      if (a.is_zero()) a = Form::function(Poly::coordinate(chart_dim, rng.uniform(0, chart_dim - 1)));
      const int pa = degree & 1;
      const bool odd = (pa & nested.parity) != 0;
      auto inner = nested.apply;
      nested.apply = [inner, a, odd, mul](const V& v) {
        V r = inner(mul(a, v));
        V back = mul(a, inner(v));
        if (odd)
          r += back;
        else
          r -= back;
        return r;
      };
      nested.parity ^= pa;
    }
    for (int probe = 0; probe < 3; ++probe)
      if (!nested.apply(make(rng)).is_zero()) return false;
  }
  return true;
}

}  // namespace

bool operator_order_check(const FormOperator& op, int chart_dim, int k, int trials, std::uint64_t seed) {
  if (k < 0) throw PreconditionError("operator order must be non-negative");
  Sampler rng(seed);
  return order_check<Form>(
      Op<Form>{op.parity, op.apply}, k, trials, chart_dim, rng,
      [](const Form& a, const Form& v) { return wedge(a, v); },
      [chart_dim](Sampler& s) { return s.mixed_form(chart_dim, 2); });
}

bool operator_order_check(const SectionOperator& op, SuperRank rank, int chart_dim, int k, int trials,
                          std::uint64_t seed) {
  if (k < 0) throw PreconditionError("operator order must be non-negative");
  Sampler rng(seed);
  return order_check<ESection>(
      Op<ESection>{op.parity, op.apply}, k, trials, chart_dim, rng,
      [](const Form& a, const ESection& v) { return left_multiply(a, v); },
      [rank, chart_dim](Sampler& s) {
        ESection v(rank, chart_dim);
        for (int i = 0; i < rank.size(); ++i) v[i] = s.mixed_form(chart_dim, 2);
        return v;
      });
}

}  // namespace superconn
