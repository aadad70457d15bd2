#pragma once

#include <span>
#include <string>
#include <vector>

#include "superconn/exterior.hpp"

namespace superconn {

/// Ranks of E = E₀ ⊕ E₁. Slots 0..p-1 are even, p..p+q-1 odd.
struct SuperRank {
  int p = 1;
  int q = 0;

  SuperRank() = default;
  SuperRank(int even, int odd);
  int size() const noexcept { return p + q; }
  int slot_parity(int slot) const noexcept { return slot >= p ? 1 : 0; }
  /// Parity of the elementary endomorphism φ_j ↦ φ_i.
  int end_parity(int i, int j) const noexcept { return slot_parity(i) ^ slot_parity(j); }
  friend bool operator==(const SuperRank&, const SuperRank&) = default;
};

/// An element of Ω(M;E): Σ_i s_i φ_i with forms written left of the
/// constant basis sections φ_i.
class ESection {
public:
  ESection(SuperRank rank, int chart_dim);
  ESection(SuperRank rank, std::vector<Form> entries);

  /// The constant basis section φ_slot.
  static ESection basis(SuperRank rank, int chart_dim, int slot);

  SuperRank rank() const noexcept { return rank_; }
  int chart_dim() const noexcept { return dim_; }
  const std::vector<Form>& entries() const noexcept { return entries_; }
  const Form& operator[](int i) const { return entries_.at(static_cast<std::size_t>(i)); }
  Form& operator[](int i) { return entries_.at(static_cast<std::size_t>(i)); }
  bool is_zero() const;

  ESection operator-() const;
  ESection& operator+=(const ESection& o);
  ESection& operator-=(const ESection& o);
  ESection& operator*=(const Ratio& c);
  friend ESection operator+(ESection a, const ESection& b) { return a += b; }
  friend ESection operator-(ESection a, const ESection& b) { return a -= b; }
  friend ESection operator*(const Ratio& c, ESection a) { return a *= c; }
  friend bool operator==(const ESection&, const ESection&) = default;

  std::string str() const;

private:
  void check_compatible(const ESection& o) const;

  SuperRank rank_;
  int dim_;
  std::vector<Form> entries_;
};

/// α ∧ s entrywise (α sits left of every basis section, so no sign).
ESection left_multiply(const Form& alpha, const ESection& s);
/// ext_d entrywise.
ESection ext_d(const ESection& s);

/// An End(E)-valued form Σ W_ij E_ij, where E_ij maps φ_j to φ_i and has
/// parity end_parity(i, j). The total degree of an entry is its form degree
/// plus that parity.
class EndForm {
public:
  EndForm(SuperRank rank, int chart_dim);

  static EndForm identity(SuperRank rank, int chart_dim);

  SuperRank rank() const noexcept { return rank_; }
  int chart_dim() const noexcept { return dim_; }
  int size() const noexcept { return rank_.size(); }
  const Form& operator()(int i, int j) const { return entries_.at(index(i, j)); }
  Form& operator()(int i, int j) { return entries_.at(index(i, j)); }
  bool is_zero() const;
  bool has_param() const;

  /// Entries whose total degree has the given parity.
  EndForm total_parity_part(int parity) const;
  bool has_total_parity(int parity) const { return total_parity_part(1 - parity).is_zero(); }
  /// Entries of pure form degree `degree`.
  EndForm form_degree_part(int degree) const;
  /// Restriction to End⁰ (end_parity 0) or End¹ slots.
  EndForm end_parity_part(int parity) const;
  bool is_block_diagonal() const { return end_parity_part(1).is_zero(); }
  /// Form degrees occurring in the entries.
  std::vector<int> form_degrees() const;

  EndForm operator-() const;
  EndForm& operator+=(const EndForm& o);
  EndForm& operator-=(const EndForm& o);
  EndForm& operator*=(const Ratio& c);
  EndForm& operator*=(const Poly& f);
  friend EndForm operator+(EndForm a, const EndForm& b) { return a += b; }
  friend EndForm operator-(EndForm a, const EndForm& b) { return a -= b; }
  friend EndForm operator*(const Ratio& c, EndForm a) { return a *= c; }
  friend EndForm operator*(const Poly& f, EndForm a) { return a *= f; }
  friend bool operator==(const EndForm&, const EndForm&) = default;

  std::string str() const;

private:
  std::size_t index(int i, int j) const;
  void check_compatible(const EndForm& o) const;

  SuperRank rank_;
  int dim_;
  std::vector<Form> entries_;
};

/// α ∧ W entrywise.
EndForm left_multiply(const Form& alpha, const EndForm& W);
/// ext_d entrywise.
EndForm ext_d(const EndForm& W);
/// i_{∂k} entrywise: the value of a 1-form valued W on the coordinate field.
EndForm interior_basis(int index, const EndForm& W);

/// (W·s)_i = Σ_j (−1)^{ε(i,j)·|s_j|} W_ij ∧ s_j.
ESection end_apply(const EndForm& W, const ESection& s);

/// Composition with end_apply(end_compose(W1,W2), s) = end_apply(W1, end_apply(W2, s)).
EndForm end_compose(const EndForm& W1, const EndForm& W2);

/// Graded commutator W1 W2 − (−1)^{w1 w2} W2 W1 in total degree, extended
/// bilinearly over the homogeneous parts.
EndForm supercommutator(const EndForm& W1, const EndForm& W2);

/// d^{∇ᴱ} s = ext_d(s) + ω·s for a connection matrix ω of 1-forms.
ESection dnablaE(const EndForm& omega, const ESection& s);

/// Str(W) = Σ_{i<p} W_ii − Σ_{i≥p} W_ii.
Form supertrace(const EndForm& W);

/// Throws ParityError unless every entry of omega is a 1-form and omega is
/// block-diagonal.
void check_connection_matrix(const EndForm& omega);

}  // namespace superconn
