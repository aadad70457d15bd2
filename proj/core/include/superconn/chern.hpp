#pragma once

#include <optional>

#include "superconn/cartan.hpp"
#include "superconn/quillen.hpp"

namespace superconn {

/// Str(R^k) for the curvature superform R of C (unnormalized).
SuperForm chern_superform(const GradedConnection& C, int k, int theta_cap = SuperForm::kDefaultThetaCap);

/// 𝐝s = 0.
bool is_closed(const SuperForm& s);

struct ChernReport {
  int k = 1;
  SuperForm superform;
  SuperForm closedness_witness;  ///< 𝐝 of the superform
  Form kappa_projection;
  /// Classical Str(R^k) of d^{ωᴱ}; present when K0 = K1 = 0, where it must
  /// equal the κ projection.
  std::optional<Form> classical_comparison;

  bool closed() const { return closedness_witness.is_zero(); }
  bool matches() const { return !classical_comparison || *classical_comparison == kappa_projection; }
};

ChernReport chern_report(const GradedConnection& C, int k, int theta_cap = SuperForm::kDefaultThetaCap);

/// η = ∫₀¹ Str(k R_t^{k−1} P) dt along Θ_t = Θ₀ + tP, P = Θ₁ − Θ₀, so that
/// chern_superform(C1, k) − chern_superform(C0, k) = 𝐝η. Throws
/// PreconditionError unless C0 and C1 share Γ and ωᴱ.
SuperForm transgression(const GradedConnection& C0, const GradedConnection& C1, int k,
                        int theta_cap = SuperForm::kDefaultThetaCap);

/// ∫₀¹ dt applied to every coefficient.
SuperForm integrate_unit(const SuperForm& s);

struct ChernMatch {
  Form super_side;
  Form classical_side;
  bool equal() const { return super_side == classical_side; }
};

/// κ(chern_superform(C, k)) against Str(R^k) of d^{ωᴱ}. Throws
/// PreconditionError unless K0 = K1 = 0.
ChernMatch chern_match(const GradedConnection& C, int k, int theta_cap = SuperForm::kDefaultThetaCap);

/// −ωᵀ: the connection induced on the dual bundle.
EndForm dual_connection(const EndForm& omega);

/// Str(R^k) for E = TM ⊕ F* as a rank (m|n) bundle with the block connection
/// diag(tangent, fiber_dual).
Form supertangent_chern(const EndForm& tangent, const EndForm& fiber_dual, int k);
/// The same for the dual bundle T*M ⊕ F.
Form supercotangent_chern(const EndForm& tangent, const EndForm& fiber_dual, int k);
/// Cartan–Koszul case on a flat chart: F = T*M, so F* = TM, both blocks flat.
Form supertangent_chern(int chart_dim, int k);

}  // namespace superconn
