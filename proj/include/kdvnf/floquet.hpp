#pragma once

#include "kdvnf/hill.hpp"

namespace kdvnf {

// Per-index Floquet data at a closed gap n (n not in S_+): the eigenvector
// slopes a_{+-n} of the Floquet matrix at tau_n, the Floquet solutions
// f_{+-n} = y1 + a_{+-n} y2, and the normalized pair (H_n, G_n).

struct FloquetCoeffs {
  cplx a_plus, a_minus;
  double alt_agreement = 0;  // relative mismatch of the two closed-gap formulas
};

FloquetCoeffs floquet_coefficient(const Potential& q, const SpectralTable& t, int n);

struct FloquetSolution {
  std::vector<cplx> f_plus, f_minus;  // on q.grid+1 points of [0,1]
  double multiplier_dev = 0;          // | |f(1)/f(0)| - 1 |
};

FloquetSolution floquet_solution(const Potential& q, const SpectralTable& t, int n);

struct NormalizedPair {
  std::vector<cplx> H, G;
  double res_hg = 0, res_h2 = 0, res_g2 = 0;  // normalization residuals
};

NormalizedPair normalized_pair(const Potential& q, const SpectralTable& t, int n);

/// sqrt(n pi) xi_n via the closed-gap limit formula
/// chi(tau_n) = tau_n^{-1/2} (1-lam0/tau_n)^{-1/2}
///              Prod_{k in S_+} (1-lamdot_k/tau_n)/sqrt((1-lam_k^+/tau_n)(1-lam_k^-/tau_n)).
double gap_factor_xi(const Potential& q, const SpectralTable& t, int n);

/// d_n = -m2_dot(tau_n)/Delta_ddot(tau_n) by the finite product over open
/// gaps, cross-checked against the direct quotient of lambda-derivatives.
double gap_factor_d(const Potential& q, const SpectralTable& t, int n);

/// Coefficients s^n_j (j = 0..M-1) of the numerator polynomial of psi_n,
/// M = number of open gaps, from the M x M moment system.
std::vector<double> psi_polynomial(const Potential& q, const SpectralTable& t, int n);

/// beta_n = sum over open gaps l of int_{lam_l^-}^{mu_l} psi_n/sqrt*(Delta^2-4),
/// branch fixed by sqrt*(Delta(mu_l)^2-4) = delta(mu_l).
double beta_angle(const Potential& q, const SpectralTable& t, int n);

/// Action I_n = (1/pi) oint lam Delta_dot/sqrtc(Delta^2-4) dlam over a circle
/// around gap n, canonical branch tracked by continuity.
double action(const Potential& q, const SpectralTable& t, int n);
/// Same integral collapsed onto the two sides of the gap cut (cross-check).
double action_segment(const Potential& q, const SpectralTable& t, int n);

/// KdV frequency omega_n via the Abelian differential Omega_4.
double frequency(const Potential& q, const SpectralTable& t, int n);
inline double frequency_Omega(const Potential& q, const SpectralTable& t, int n) {
  return frequency(q, t, n) / (2.0 * kPi * n);
}
/// Residual of omega_n = omega_{m_S} + 24 i int_{tau_{m_S}}^{tau_n} Omega_4.
double frequency_tail_residual(const Potential& q, const SpectralTable& t, int n);

struct WFunctions {
  Fn W_plus, W_minus;  // 1-periodic
};

/// W_n = sqrt(n pi) xi_n (m2_dot/Delta_ddot)(tau_n) e^{i beta_n}
///       (-1/(2 pi i n)) d/dx f_n^2, and W_{-n} = conj(W_n).
WFunctions w_function(const Potential& q, const SpectralTable& t, int n);

/// W_n for every n in n_set (data-parallel kernel).
std::vector<WFunctions> w_family(const Potential& q, const SpectralTable& t,
                                 const std::vector<int>& n_set,
                                 ExecMode mode = ExecMode::parallel);

}  // namespace kdvnf
