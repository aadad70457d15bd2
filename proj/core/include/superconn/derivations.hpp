#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "superconn/bundles.hpp"
#include "superconn/exterior.hpp"

namespace superconn {

/// A derivation of Ω(M) of degree n in the flat basis:
///   δ(a) = Σ_k A_k ∧ ∂_k a + Σ_k B_k ∧ i_{∂k} a,
/// where ∂_k acts coefficientwise. A_k has degree n, B_k degree n + 1.
class DerivationSpec {
public:
  /// The zero derivation of the given degree.
  DerivationSpec(int chart_dim, int degree);
  /// Throws DegreeError unless A_k, B_k are homogeneous of degrees n, n + 1.
  DerivationSpec(int degree, std::vector<Form> A, std::vector<Form> B);

  /// ∇⁰ along the coordinate field ∂_{index+1}.
  static DerivationSpec coordinate_partial(int chart_dim, int index);
  /// i_{∂_{index+1}}.
  static DerivationSpec insertion(int chart_dim, int index);

  int degree() const noexcept { return degree_; }
  int parity() const noexcept { return degree_ & 1; }
  int chart_dim() const noexcept { return static_cast<int>(A_.size()); }
  const std::vector<Form>& A() const noexcept { return A_; }
  const std::vector<Form>& B() const noexcept { return B_; }
  const Form& A(int k) const { return A_.at(static_cast<std::size_t>(k)); }
  const Form& B(int k) const { return B_.at(static_cast<std::size_t>(k)); }
  bool is_zero() const;

  DerivationSpec operator-() const;
  DerivationSpec& operator+=(const DerivationSpec& o);
  DerivationSpec& operator-=(const DerivationSpec& o);
  DerivationSpec& operator*=(const Ratio& c);
  friend DerivationSpec operator+(DerivationSpec a, const DerivationSpec& b) { return a += b; }
  friend DerivationSpec operator-(DerivationSpec a, const DerivationSpec& b) { return a -= b; }
  friend DerivationSpec operator*(const Ratio& c, DerivationSpec a) { return a *= c; }
  friend bool operator==(const DerivationSpec&, const DerivationSpec&) = default;

private:
  void check_compatible(const DerivationSpec& o) const;

  int degree_;
  std::vector<Form> A_;
  std::vector<Form> B_;
};

/// α·δ for a homogeneous form α: degree deg α + n.
DerivationSpec left_multiply(const Form& alpha, const DerivationSpec& d);

/// Values of a derivation on the generators x^j and dx^j.
struct GeneratorAction {
  int degree = 0;
  std::vector<Form> on_coordinates;
  std::vector<Form> on_differentials;

  /// Throws DegreeError on inconsistent degrees.
  void validate() const;
  friend bool operator==(const GeneratorAction&, const GeneratorAction&) = default;
};

Form apply_derivation(const DerivationSpec& d, const Form& a);

/// Evaluates the derivation on the generators.
GeneratorAction generator_action(const DerivationSpec& d);
/// The unique flat spec with the given values on generators.
DerivationSpec from_generator_action(const GeneratorAction& act);

/// T^r_{pq} = Γ^r_{pq} − Γ^r_{qp}, stored with the same index layout.
Christoffel torsion(const Christoffel& G);

/// δ = ∇_K + i_L relative to the connection G.
struct DerivationDecomposition {
  VectorForm K;
  VectorForm L;
};

/// Flat normal form of ∇_K + i_L.
DerivationSpec compose_derivation(const VectorForm& K, const VectorForm& L, const Christoffel& G);

/// Splits a derivation, given on generators, as ∇_K + i_L:
///   K^j = δ(x^j),  L^j = δ(dx^j) − ∇_K dx^j.
DerivationDecomposition decompose_derivation(const GeneratorAction& act, const Christoffel& G);

/// L_X built as ∇_X + i_{∇X + T(X,·)}; the Γ terms cancel in the flat form.
DerivationSpec lie_derivative(const VectorField& X, const Christoffel& G);

/// d1∘d2 − (−1)^{n1 n2} d2∘d1, evaluated on generators.
DerivationSpec der_bracket(const DerivationSpec& d1, const DerivationSpec& d2);

/// d = Σ dx^k ∧ L_{∂k} assembled through G. Every Γ term cancels, leaving
/// A_k = dx^k and B = 0; throws ConsistencyError if they do not.
DerivationSpec d_as_derivation(const Christoffel& G);

/// A linear operator on forms of fixed parity.
struct FormOperator {
  int parity = 0;
  std::function<Form(const Form&)> apply;
};

/// A linear operator on E-valued forms of fixed total parity.
struct SectionOperator {
  int parity = 0;
  std::function<ESection(const ESection&)> apply;
};

/// Probabilistic check that op is a differential operator of order <= k:
/// every nested commutator [[..[op, a0], ..], ak] with random forms a_i
/// must vanish on random test forms. Returns false on the first witness.
bool operator_order_check(const FormOperator& op, int chart_dim, int k, int trials, std::uint64_t seed);
bool operator_order_check(const SectionOperator& op, SuperRank rank, int chart_dim, int k, int trials,
                          std::uint64_t seed);

}  // namespace superconn
