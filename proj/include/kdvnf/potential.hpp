#pragma once

#include <utility>
#include <vector>

#include "kdvnf/fourier.hpp"

namespace kdvnf {

/// Real, mean-zero, 1-periodic potential.  Fourier coefficients are the
/// canonical representation; grid samples are derived.
struct Potential {
  int n_pot = 0;           // band limit
  std::vector<cplx> c;     // c[n + n_pot], q_0 = 0, q_{-n} = conj(q_n)
  int grid = 128;          // sample count, >= 4*n_pot

  cplx coeff(int n) const {
    return (n < -n_pot || n > n_pot) ? cplx{0.0, 0.0} : c[n + n_pot];
  }
  Fn as_fn() const {
    Fn f(n_pot);
    f.c = c;
    return f;
  }
  double l2_norm() const;  // (int q^2)^{1/2}
};

/// Builds a trigonometric potential from coefficients {n, q_n}, n != 0.
/// Rejects non-Hermitian input (complex-valued potentials are unsupported).
Potential make_trig_potential(const std::vector<std::pair<int, cplx>>& coeffs);

struct LamePotential {
  Potential q;
  double modulus = 0.0;
  double K = 0.0, E = 0.0;  // complete elliptic integrals at the modulus
  int samples = 0;          // resolution used to project onto Fourier space
};

/// Approximate one-gap potential q(x) = 2 (2K(k))^2 k^2 sn^2(2K(k) x, k) - mean,
/// period 1.  Only the gap at n = 1 is open.
LamePotential make_lame_one_gap(double modulus);

Potential reverse_potential(const Potential& q);               // q(-x)
Potential translate_potential(const Potential& q, double s);   // q(x + s)

double eval_potential(const Potential& q, double x);
double eval_derivative(const Potential& q, double x, int order);

/// H^kdv(q) = 1/2 int q_x^2 + int q^3 by spectral quadrature.
double hkdv(const Potential& q);

/// Jacobi sn and complete integrals via the AGM / descending Landen
/// recursion, tolerance 1e-14.
double jacobi_sn(double u, double k);
double elliptic_K(double k);
double elliptic_E(double k);

// JSON serialization: {"n_pot": int, "coeffs": [[n, re, im], ...]}
std::string potential_to_json(const Potential& q);
Potential potential_from_json(const std::string& text);

}  // namespace kdvnf
