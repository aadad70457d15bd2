#pragma once

#include "superconn/bundles.hpp"

namespace superconn {

/// D = d^{ωᴱ} + P on Ω(M;E): ωᴱ is a block-diagonal matrix of 1-forms and P
/// has odd total degree.
struct Superconnection {
  EndForm omega;
  EndForm P;

  /// Throws ParityError / DegreeError when the invariants fail.
  Superconnection(EndForm omega, EndForm P);
  /// d^{ωᴱ} with P = 0.
  static Superconnection from_connection(EndForm omega);

  SuperRank rank() const { return omega.rank(); }
  int chart_dim() const { return omega.chart_dim(); }
  /// ωᴱ + P: the full odd connection form.
  EndForm connection_form() const { return omega + P; }
  friend bool operator==(const Superconnection&, const Superconnection&) = default;
};

/// Total-degree-one data: T1, T2 are the 1-form blocks on E₀ and E₁, T3 maps
/// E₁ → E₀ and T4 maps E₀ → E₁ (functions). Each is stored as a full matrix
/// that must vanish outside its block.
struct DegreeOneData {
  EndForm omega;
  EndForm T1, T2, T3, T4;

  Superconnection superconnection() const;
};

ESection sc_apply(const Superconnection& D, const ESection& s);

/// R = dΩ + Ω∘Ω with Ω = ωᴱ + P, so that end_apply(R, s) = D(D(s)).
EndForm sc_curvature(const Superconnection& D);

/// R read off from D² on the constant basis sections, after checking that
/// D² commutes with multiplication by coordinates and random forms.
/// Throws ConsistencyError if it does not.
EndForm sc_curvature_extracted(const Superconnection& D);

/// Str(R^k) (unnormalized).
Form classical_chern(const Superconnection& D, int k);

/// W^k under end_compose; k >= 1.
EndForm end_power(const EndForm& W, int k);

}  // namespace superconn
