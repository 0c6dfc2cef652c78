#pragma once

// Matrix Mobius automorphisms of R_I(m,n):
//
//   Phi_P(Z) = Q (P - Z) (I_n - P^H Z)^{-1} R^{-1},
//
// with P = U (sum_k lambda_k E_kk) V, Q = U diag(1/sqrt(1 - lambda^2)) U^H and
// R = V^H diag(1/sqrt(1 - lambda^2), 1, ..., 1) V. Phi_P is an involution
// exchanging P and 0.

#include <cstddef>

#include "cartan/maps.hpp"
#include "cartan/random.hpp"

namespace cartan {

struct MobiusFactors {
  CMat p;
  CMat u;
  RVec lambdas;
  CMat v;
  CMat q;
  CMat r;
  // Same normal form with 1/sqrt(1 - lambda^2) replaced by sqrt(1 - lambda^2).
  CMat q_inv;
  CMat r_inv;
};

MobiusFactors mobius_factors(const CMat& p);
MobiusFactors mobius_factors(const Domain& d, const Point& p);
/// Factors from an explicit normal form; lets callers check that the map does
/// not depend on which singular vectors were chosen.
MobiusFactors mobius_factors_from(const CMat& u, const RVec& lambdas, const CMat& v);

CMat mobius_apply(const MobiusFactors& f, const CMat& z);
/// Q^{-1} (I_m - Z P^H)^{-1} (P - Z) R.
CMat mobius_apply_alt(const MobiusFactors& f, const CMat& z);
Point mobius_apply(const Domain& d, const Point& p, const Point& z);

/// D Phi_P(Z)[W] = Q [-W + (P - Z) M^{-1} P^H W] M^{-1} R^{-1}, M = I - P^H Z.
CMat mobius_differential(const MobiusFactors& f, const CMat& z, const CMat& w);
/// Matrix of the differential in row-major coordinates (mn x mn).
CMat mobius_jacobian(const MobiusFactors& f, const CMat& z);
CMat mobius_jacobian(const Domain& d, const Point& p, const Point& z);

/// Psi = Phi_{lambda_keep E_keep,keep} o Phi_D, D = sum_k lambda_k E_kk, so
/// that Psi(D) = lambda_keep E_keep,keep. Identity when D already has a single
/// nonzero entry at `keep`. `keep` is zero-based.
HoloMap collapse_map(const Domain& d, const RVec& lambdas, std::size_t keep = 0);

/// Max residuals of the automorphism identities over random (P, Z).
struct IdentityResiduals {
  double involution = 0.0;         // Phi_P(Phi_P(Z)) = Z
  double exchange = 0.0;           // Phi_P(0) = P, Phi_P(P) = 0
  double differential_at_p = 0.0;  // D Phi_P(P)[W] = -Q W R
  double differential_at_0 = 0.0;  // D Phi_P(0)[W] = -Q^{-1} W R^{-1}
  double alternate_form = 0.0;     // Q^{-1}(I - Z P^H)^{-1}(P - Z) R
  double determinant_identity = 0.0;  // (I - Z P^H) Q (I - Phi Phi^H) Q^H (I - P Z^H) = I - Z Z^H
  std::size_t self_map_failures = 0;  // Phi_P(Z) outside R_I
  std::size_t samples = 0;
};

IdentityResiduals automorphism_battery(int m, int n, std::size_t samples, Rng& rng);

}  // namespace cartan
