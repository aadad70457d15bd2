#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "superconn/bundles.hpp"
#include "superconn/derivations.hpp"
#include "superconn/exterior.hpp"

namespace superconn {

/// A monomial ξ^I θ^a. ξ^k has bidegree (1,0), θ^k bidegree (1,1); a form
/// coefficient of degree p has bidegree (0,p). Exchanging bidegrees (k1,p1)
/// and (k2,p2) costs (−1)^{k1 k2 + p1 p2}.
struct SMono {
  IndexMask xi = 0;
  Exponents theta = 0;  ///< packed like Poly exponents, one byte per index

  int theta_degree() const { return Poly::total_degree(theta); }
  int degree() const { return mask_degree(xi) + theta_degree(); }
  friend auto operator<=>(const SMono&, const SMono&) = default;
};

/// Element of Ω(M, Ω(M)): Σ α · ξ^I θ^a with the Form coefficient α stored
/// on the left. theta_cap bounds the θ-degree of results of public
/// operations; intermediate cancellations are allowed to exceed it.
class SuperForm {
public:
  static constexpr int kDefaultThetaCap = 6;

  explicit SuperForm(int chart_dim = 1, int theta_cap = kDefaultThetaCap);

  /// A superfunction: an ordinary form α as a 0-superform.
  static SuperForm function(const Form& a, int theta_cap = kDefaultThetaCap);
  static SuperForm xi(int chart_dim, int index, int theta_cap = kDefaultThetaCap);
  static SuperForm theta(int chart_dim, int index, int theta_cap = kDefaultThetaCap);
  static SuperForm monomial(const Form& coeff, SMono mono, int theta_cap = kDefaultThetaCap);

  int chart_dim() const noexcept { return dim_; }
  int theta_cap() const noexcept { return cap_; }
  const std::map<SMono, Form>& terms() const noexcept { return terms_; }
  Form coefficient(SMono mono) const;
  bool is_zero() const noexcept { return terms_.empty(); }
  bool has_param() const;
  /// Largest θ-degree present, -1 for zero.
  int max_theta_degree() const;
  /// Superform degrees |I| + |a| present, ascending.
  std::vector<int> degrees() const;

  /// Part of superform degree k.
  SuperForm degree_part(int k) const;
  /// Part whose ℤ₂ degree (θ-degree + coefficient form degree) is `parity`.
  SuperForm parity_part(int parity) const;

  SuperForm with_cap(int theta_cap) const;
  /// Throws BudgetError when some θ-degree exceeds the cap.
  void check_cap() const;

  SuperForm operator-() const;
  SuperForm& operator+=(const SuperForm& o);
  SuperForm& operator-=(const SuperForm& o);
  SuperForm& operator*=(const Ratio& c);
  SuperForm& operator*=(const Poly& f);
  friend SuperForm operator+(SuperForm a, const SuperForm& b) { return a += b; }
  friend SuperForm operator-(SuperForm a, const SuperForm& b) { return a -= b; }
  friend SuperForm operator*(const Ratio& c, SuperForm a) { return a *= c; }
  friend SuperForm operator*(const Poly& f, SuperForm a) { return a *= f; }
  /// Equality ignores the cap.
  friend bool operator==(const SuperForm& a, const SuperForm& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }

  /// e.g. "(x*dx(2))*xi(1)*theta(2,2) + xi(1,2)".
  std::string str(std::span<const std::string> names) const;
  std::string str() const;

  void add_term(const SMono& mono, const Form& coeff);

private:
  void check_compatible(const SuperForm& o) const;

  int dim_;
  int cap_;
  std::map<SMono, Form> terms_;
};

/// Bigraded-commutative product.
SuperForm sform_mul(const SuperForm& a, const SuperForm& b);
/// The graded differential: on superfunctions Σ ξ^k·∂_k α + θ^k·i_{∂k} α,
/// extended as a derivation of bidegree (1,0) with 𝐝ξ = 𝐝θ = 0.
SuperForm sform_d(const SuperForm& a);
/// ⟨δ; ω⟩ for the 1-superform part of ω: ⟨δ; ξ^k c⟩ = A_k c, ⟨δ; θ^k c⟩ = B_k c,
/// coefficients written on the right.
Form sform_pair(const DerivationSpec& d, const SuperForm& w);
/// κ: ξ^k ↦ dx^k, θ^k ↦ 0, coefficients projected to their function part.
Form kappa(const SuperForm& a);

namespace detail {
/// Same operations without the θ-cap check on the result.
SuperForm mul_raw(const SuperForm& a, const SuperForm& b);
SuperForm d_raw(const SuperForm& a);
}  // namespace detail

/// Σ_l S_l φ_l: E-valued superforms, coefficients left of the basis sections.
class ESuperForm {
public:
  ESuperForm(SuperRank rank, int chart_dim, int theta_cap = SuperForm::kDefaultThetaCap);
  static ESuperForm from_section(const ESection& s, int theta_cap = SuperForm::kDefaultThetaCap);
  static ESuperForm basis(SuperRank rank, int chart_dim, int slot, int theta_cap = SuperForm::kDefaultThetaCap);

  SuperRank rank() const noexcept { return rank_; }
  int chart_dim() const noexcept { return dim_; }
  int theta_cap() const noexcept { return cap_; }
  const SuperForm& operator[](int i) const { return entries_.at(static_cast<std::size_t>(i)); }
  SuperForm& operator[](int i) { return entries_.at(static_cast<std::size_t>(i)); }
  bool is_zero() const;
  void check_cap() const;

  ESuperForm operator-() const;
  ESuperForm& operator+=(const ESuperForm& o);
  ESuperForm& operator-=(const ESuperForm& o);
  friend ESuperForm operator+(ESuperForm a, const ESuperForm& b) { return a += b; }
  friend ESuperForm operator-(ESuperForm a, const ESuperForm& b) { return a -= b; }
  friend bool operator==(const ESuperForm& a, const ESuperForm& b) {
    return a.rank_ == b.rank_ && a.entries_ == b.entries_;
  }

private:
  SuperRank rank_;
  int dim_;
  int cap_;
  std::vector<SuperForm> entries_;
};

/// S · (Σ T_l φ_l) = Σ (S T_l) φ_l.
ESuperForm left_multiply(const SuperForm& S, const ESuperForm& s);

/// Σ Q_ij E_ij with superform entries; E_ij has ℤ₂ degree end_parity(i,j).
class EndSuperForm {
public:
  EndSuperForm(SuperRank rank, int chart_dim, int theta_cap = SuperForm::kDefaultThetaCap);
  static EndSuperForm from_end_form(const EndForm& W, int theta_cap = SuperForm::kDefaultThetaCap);

  SuperRank rank() const noexcept { return rank_; }
  int chart_dim() const noexcept { return dim_; }
  int theta_cap() const noexcept { return cap_; }
  int size() const noexcept { return rank_.size(); }
  const SuperForm& operator()(int i, int j) const { return entries_.at(index(i, j)); }
  SuperForm& operator()(int i, int j) { return entries_.at(index(i, j)); }
  bool is_zero() const;
  void check_cap() const;
  /// Part of superform degree k.
  EndSuperForm degree_part(int k) const;
  std::vector<int> degrees() const;

  EndSuperForm operator-() const;
  EndSuperForm& operator+=(const EndSuperForm& o);
  EndSuperForm& operator-=(const EndSuperForm& o);
  EndSuperForm& operator*=(const Ratio& c);
  EndSuperForm& operator*=(const Poly& f);
  friend EndSuperForm operator+(EndSuperForm a, const EndSuperForm& b) { return a += b; }
  friend EndSuperForm operator-(EndSuperForm a, const EndSuperForm& b) { return a -= b; }
  friend EndSuperForm operator*(const Ratio& c, EndSuperForm a) { return a *= c; }
  friend EndSuperForm operator*(const Poly& f, EndSuperForm a) { return a *= f; }
  friend bool operator==(const EndSuperForm& a, const EndSuperForm& b) {
    return a.rank_ == b.rank_ && a.entries_ == b.entries_;
  }

private:
  std::size_t index(int i, int j) const;

  SuperRank rank_;
  int dim_;
  int cap_;
  std::vector<SuperForm> entries_;
};

/// Q·(S_l φ_l) = Σ_i (−1)^{ε(i,l)·p(S_l)} Q_il S_l φ_i, p the ℤ₂ degree.
ESuperForm end_apply(const EndSuperForm& Q, const ESuperForm& s);
EndSuperForm end_compose(const EndSuperForm& Q1, const EndSuperForm& Q2);
SuperForm supertrace(const EndSuperForm& Q);
EndSuperForm end_power(const EndSuperForm& Q, int k);

namespace detail {
ESuperForm apply_raw(const EndSuperForm& Q, const ESuperForm& s);
EndSuperForm compose_raw(const EndSuperForm& Q1, const EndSuperForm& Q2);
}  // namespace detail

/// A graded connection on Ω(M)⊗Γ(E), given by a linear connection on TM,
/// an even connection matrix on E and the tensors K0 (even total degree)
/// and K1 (odd total degree), indexed by the coordinate fields.
struct GradedConnection {
  Christoffel gamma;
  EndForm omega;
  std::vector<EndForm> K0;
  std::vector<EndForm> K1;

  /// Zero K0, K1, flat Γ.
  GradedConnection(Christoffel gamma, EndForm omega);
  GradedConnection(Christoffel gamma, EndForm omega, std::vector<EndForm> K0, std::vector<EndForm> K1);

  SuperRank rank() const { return omega.rank(); }
  int chart_dim() const { return omega.chart_dim(); }
  /// Throws ParityError / DimensionError when the invariants fail.
  void validate() const;
  friend bool operator==(const GradedConnection&, const GradedConnection&) = default;
};

/// ∇∇ along ∂_k in the flat frame: ωᴱ(∂k) + K0(∂k) + Σ Γ^j_{kq} dx^q ∧ K1(∂j).
EndForm flat_frame_value(const GradedConnection& C, int k);

/// ∇∇_δ s, extended from basis sections by the Leibniz rule
/// ∇∇_δ(α φ) = δ(α) φ + (−1)^{|δ||α|} α ∇∇_δ φ.
ESection nn_apply(const GradedConnection& C, const DerivationSpec& d, const ESection& s);

/// The connection 1-superform Θ with 𝐝^∇∇ φ_l = Σ_i Θ_il φ_i.
EndSuperForm connection_superform(const GradedConnection& C, int theta_cap = SuperForm::kDefaultThetaCap);

/// 𝐝^∇∇(S_l φ_l) = 𝐝S_l φ_l + (−1)^{deg S_l} Σ_i S_l Θ_il φ_i.
ESuperForm covariant_sform_d(const GradedConnection& C, const ESuperForm& s);

/// ⟨δ; S⟩ entrywise on the 1-superform parts.
ESection sform_pair(const DerivationSpec& d, const ESuperForm& s);

/// [∇∇_{d1}, ∇∇_{d2}] − ∇∇_{[d1,d2]} as an End-valued form. Throws
/// ConsistencyError when the operator fails to be linear over forms.
EndForm graded_curvature(const GradedConnection& C, const DerivationSpec& d1, const DerivationSpec& d2);

/// R with (𝐝^∇∇)² s = R·s, extracted on basis sections and checked linear
/// over random superform multiples.
EndSuperForm curvature_2sform(const GradedConnection& C, int theta_cap = SuperForm::kDefaultThetaCap);

/// [𝐝^∇∇, Q] = 𝐝^∇∇∘Q − (−1)^{deg Q} Q∘𝐝^∇∇ (per superform degree), as an
/// EndSuperForm.
EndSuperForm covariant_commutator(const GradedConnection& C, const EndSuperForm& Q);

namespace detail {
ESuperForm covariant_d_raw(const EndSuperForm& theta, const ESuperForm& s);
/// Curvature for a given connection superform, without cap checks.
EndSuperForm curvature_raw(const EndSuperForm& theta);
}  // namespace detail

}  // namespace superconn
