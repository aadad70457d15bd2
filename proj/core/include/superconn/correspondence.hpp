#pragma once

#include "superconn/cartan.hpp"
#include "superconn/quillen.hpp"

namespace superconn {

/// Σ_k dx^k ∧ K0(∂k).
EndForm antisym_K0(const std::vector<EndForm>& K0);

/// Σ_{k,q,r} Γ^r_{kq} dx^k ∧ dx^q ∧ K1(∂r): the contraction of K1 with
/// ∇∂_k + T(∂_k, ·) = Γ^r_{kq} ∂_r ⊗ dx^q, wedged with dx^k.
EndForm tilde_K1(const std::vector<EndForm>& K1, const Christoffel& G);

/// D^∇∇ = d^{ωᴱ} + antisym_K0(K0) + tilde_K1(K1, Γ).
Superconnection induce(const GradedConnection& C);

/// The same operator through the superform route: s ↦ ⟨d; 𝐝^∇∇ s⟩.
ESection induce_apply_via_superforms(const GradedConnection& C, const ESection& s);

/// Throws ParityError unless N is an End¹ matrix of functions.
void check_n_tensor(const EndForm& N);

struct SuperconnectionDecomposition {
  GradedConnection C;
  EndForm N;
};

/// D = induce(C) + N with flat Γ, K1 = 0, N the function part of P, and
/// K0(∂k) = Σ_j (1/j) i_{∂k} P_j over the degree-j pieces of P.
SuperconnectionDecomposition decompose_superconnection(const Superconnection& D);

/// induce(C) with N added to P.
Superconnection induce_with(const GradedConnection& C, const EndForm& N);

/// Whether C1 and C2 induce the same superconnection. Throws
/// PreconditionError when Γ or ωᴱ differ.
bool same_induced(const GradedConnection& C1, const GradedConnection& C2);

/// The two separate vanishing conditions (K0 − K0')ᵃ = 0 and
/// (K1 − K1')~ = 0. Together they imply same_induced; the converse fails
/// when a K0 and a K1 difference cancel each other.
struct SameInducedConditions {
  bool k0_part = false;
  bool k1_part = false;
  bool both() const { return k0_part && k1_part; }
};
SameInducedConditions same_induced_conditions(const GradedConnection& C1, const GradedConnection& C2);

struct CurvatureRelation {
  EndForm lhs;
  EndForm rhs;
  bool equal() const { return lhs == rhs; }
};

/// lhs = curvature of induce(C) + N; rhs = ½ R^∇∇(d,d) + [∇∇_d, N] + N∘N,
/// where [∇∇_d, N] is read off the operator s ↦ ∇∇_d(Ns) + N∇∇_d s.
CurvatureRelation curvature_relation(const GradedConnection& C, const EndForm& N);

}  // namespace superconn
