#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "superconn/poly.hpp"

namespace superconn {

/// Bit i set means dx^{i+1} is present; the wedge is taken in increasing order.
using IndexMask = std::uint32_t;

inline int mask_degree(IndexMask mask) { return __builtin_popcount(mask); }

/// Sign of dx^I ∧ dx^J relative to dx^{I∪J}; 0 when I and J overlap.
int wedge_sign(IndexMask a, IndexMask b);

/// A differential form on the chart: a finite sum of Poly · dx^I.
class Form {
public:
  explicit Form(int chart_dim = 1) : dim_(chart_dim) {}

  static Form function(const Poly& f);
  static Form constant(int chart_dim, const Ratio& c) { return function(Poly::constant(chart_dim, c)); }
  /// coeff · dx^mask.
  static Form basis(int chart_dim, IndexMask mask, const Poly& coeff);
  /// dx^{i1} ∧ ... ∧ dx^{ik} for 0-based indices in any order.
  static Form dx(int chart_dim, std::span<const int> indices);
  static Form dx(int chart_dim, std::initializer_list<int> indices) {
    return dx(chart_dim, std::span<const int>(indices.begin(), indices.size()));
  }

  int chart_dim() const noexcept { return dim_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<IndexMask, Poly>& terms() const noexcept { return terms_; }
  Poly coefficient(IndexMask mask) const;
  bool has_param() const;

  /// Degrees of the nonzero homogeneous pieces, ascending.
  std::vector<int> degrees() const;
  /// The degree when the form is homogeneous; nullopt for inhomogeneous
  /// forms. The zero form reports nullopt too, callers treat it as any degree.
  std::optional<int> homogeneous_degree() const;
  bool is_homogeneous() const { return degrees().size() <= 1; }
  Form piece(int degree) const;
  /// Maximal polynomial degree over the coefficients.
  int poly_degree() const;

  Form operator-() const;
  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(const Poly& f);
  Form& operator*=(const Ratio& c);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, const Poly& f) { return a *= f; }
  friend Form operator*(const Poly& f, Form a) { return a *= f; }
  friend Form operator*(Form a, const Ratio& c) { return a *= c; }
  friend Form operator*(const Ratio& c, Form a) { return a *= c; }

  friend bool operator==(const Form& a, const Form& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }

  /// Canonical text, e.g. "x*dx(2) + (x + y)*dx(1,2)"; indices print 1-based.
  std::string str(std::span<const std::string> names) const;
  std::string str() const;

  /// Adds coeff · dx^mask in place.
  void add_term(IndexMask mask, const Poly& coeff);

private:
  void check_same_chart(const Form& o) const;

  int dim_;
  std::map<IndexMask, Poly> terms_;
};

/// Parity of the form degree, for homogeneous forms.
inline int parity(int degree) { return degree & 1; }

Form wedge(const Form& a, const Form& b);

/// Σ (−1)^deg · piece: the sign picked up when an odd object moves past `a`.
Form grade_involution(const Form& a);

/// Exterior differential. Rejects forms that contain the parameter t.
Form ext_d(const Form& a);

/// Coefficientwise ∂/∂x^{index+1}: the flat covariant derivative ∇⁰_{∂k}.
Form partial(const Form& a, int index);

/// Interior product with the coordinate field ∂_{index+1}.
Form interior_basis(int index, const Form& a);

struct VectorField {
  std::vector<Poly> components;

  static VectorField zero(int chart_dim);
  static VectorField basis(int chart_dim, int index);
  int chart_dim() const { return static_cast<int>(components.size()); }
  friend bool operator==(const VectorField&, const VectorField&) = default;
};

Form interior(const VectorField& X, const Form& a);

/// A vector-valued form K = Σ_j K^j ⊗ ∂_j with every K^j of the same degree.
class VectorForm {
public:
  VectorForm(int chart_dim, int degree);
  /// Throws DegreeError when some component is not homogeneous of `degree`.
  VectorForm(int degree, std::vector<Form> components);

  int degree() const noexcept { return degree_; }
  int chart_dim() const noexcept { return static_cast<int>(components_.size()); }
  const std::vector<Form>& components() const noexcept { return components_; }
  const Form& operator[](int j) const { return components_.at(static_cast<std::size_t>(j)); }
  void set(int j, Form f);

  friend bool operator==(const VectorForm&, const VectorForm&) = default;

private:
  int degree_;
  std::vector<Form> components_;
};

/// Christoffel symbols Γ^r_{pq} of a linear connection on TM, with
/// ∇_{∂p} ∂q = Γ^r_{pq} ∂r. Indices are 0-based.
class Christoffel {
public:
  explicit Christoffel(int chart_dim);
  int chart_dim() const noexcept { return dim_; }
  const Poly& operator()(int r, int p, int q) const { return data_[index(r, p, q)]; }
  Poly& operator()(int r, int p, int q) { return data_[index(r, p, q)]; }
  bool is_flat() const;
  friend bool operator==(const Christoffel&, const Christoffel&) = default;

private:
  std::size_t index(int r, int p, int q) const;
  int dim_;
  std::vector<Poly> data_;
};

/// ∇_X on forms, through the dual rule ∇_X dx^j = −Γ^j_{pq} X^p dx^q.
Form nabla_form(const Christoffel& G, const VectorField& X, const Form& a);

/// ∇_{∂k}: the covariant derivative along a coordinate field.
Form nabla_basis(const Christoffel& G, int index, const Form& a);

/// ∇_K = Σ_p K^p ∧ ∇_{∂p}: a derivation of degree deg K.
Form nabla_K(const Christoffel& G, const VectorForm& K, const Form& a);

/// i_L = Σ_j L^j ∧ i_{∂j}: an algebraic derivation of degree deg L − 1.
Form alg_insertion(const VectorForm& L, const Form& a);

}  // namespace superconn
