#pragma once

#include <vector>

#include "kdvnf/common.hpp"

namespace kdvnf {

// ---------------------------------------------------------------------------
// Band-limited functions on the unit circle, stored as Fourier coefficients
// c[n + band] for Sum_n c_n e^{2 pi i n x}, |n| <= band.
// ---------------------------------------------------------------------------
struct Fn {
  int band = 0;
  std::vector<cplx> c;  // size 2*band+1

  Fn() = default;
  explicit Fn(int b) : band(b), c(2 * b + 1, cplx{0.0, 0.0}) {}

  cplx coeff(int n) const {
    return (n < -band || n > band) ? cplx{0.0, 0.0} : c[n + band];
  }
  cplx& at(int n) { return c[n + band]; }

  cplx eval(double x) const;
  bool is_hermitian(double tol = 1e-11) const;
};

Fn fn_resize(const Fn& f, int band);
Fn fn_add(const Fn& a, const Fn& b);
Fn fn_scale(const Fn& a, cplx s);
Fn fn_mul(const Fn& a, const Fn& b);          // full convolution, band grows
Fn fn_dx(const Fn& a, int order = 1);         // (2 pi i n)^order
Fn fn_dx_inv(const Fn& a, int k = 1);         // (2 pi i n)^{-k}, zero mode dropped
Fn fn_reflect(const Fn& a);                   // f(-x): c_n -> c_{-n}
Fn fn_conj(const Fn& a);                      // conj(f): c_n -> conj(c_{-n})
cplx fn_mean(const Fn& a);
cplx fn_pair(const Fn& a, const Fn& b);       // bilinear <f,g> = int f g = Sum a_n b_{-n}
double fn_norm_hs(const Fn& a, double s);     // (Sum max(1,|n|)^{2s} |a_n|^2)^{1/2}
double fn_sup(const Fn& a, int samples = 512);

// ---------------------------------------------------------------------------
// Grid transforms (FFTW behind a plan cache).  grid_from_coeffs synthesizes
// N equispaced samples on [0,1); coeffs_from_grid is the exact inverse with
// the 1/N normalization.
// ---------------------------------------------------------------------------
std::vector<cplx> dft_forward(const std::vector<cplx>& grid);    // q_k = (1/N) Sum q_j e^{-2pi i jk/N}
std::vector<cplx> dft_backward(const std::vector<cplx>& coeffs); // q_j = Sum q_k e^{+2pi i jk/N}

std::vector<cplx> grid_from_fn(const Fn& f, int N);
Fn fn_from_grid(const std::vector<cplx>& grid, int band);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------
struct GaussLegendre {
  std::vector<double> x, w;  // nodes on [-1,1]
  explicit GaussLegendre(int n);
};

const GaussLegendre& gl_rule(int n);

/// Adaptive panel Gauss-Legendre on [a,b]; subdivides until two rules agree.
template <class F>
double gl_integrate(F&& f, double a, double b, double rel_tol = 1e-12, int depth = 0) {
  const GaussLegendre& lo = gl_rule(32);
  const GaussLegendre& hi = gl_rule(64);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double slo = 0, shi = 0;
  for (int i = 0; i < 32; ++i) slo += lo.w[i] * f(mid + half * lo.x[i]);
  for (int i = 0; i < 64; ++i) shi += hi.w[i] * f(mid + half * hi.x[i]);
  slo *= half; shi *= half;
  double scale = std::max(std::abs(shi), 1e-30);
  if (std::abs(shi - slo) <= rel_tol * scale || depth >= 24)
    return shi;
  return gl_integrate(f, a, mid, rel_tol, depth + 1) +
         gl_integrate(f, mid, b, rel_tol, depth + 1);
}

/// Gauss-Chebyshev: int_{-1}^{1} g(t)/sqrt(1-t^2) dt ~= (pi/M) Sum g(t_i),
/// t_i = cos((2i-1)pi/(2M)).  Exact removal of inverse-sqrt endpoints.
template <class F>
double gauss_chebyshev(F&& g, int M) {
  double s = 0;
  for (int i = 1; i <= M; ++i) s += g(std::cos((2 * i - 1) * kPi / (2 * M)));
  return s * kPi / M;
}

// ---------------------------------------------------------------------------
// PolyTrig: Sum_{j<=J} x^j * (trig polynomial)_j.  Closed under d/dx,
// multiplication by a trig polynomial and exact antiderivative with F(0)=0;
// this is the function class generated by the iterated-antiderivative
// recursion for mean-free band-limited data.
// ---------------------------------------------------------------------------
class PolyTrig {
 public:
  PolyTrig() = default;
  PolyTrig(int degree, int band);

  static PolyTrig one(int band);
  static PolyTrig from_fn(const Fn& f);

  int degree() const { return static_cast<int>(rows_.size()) - 1; }
  int band() const { return band_; }
  const Fn& row(int j) const { return rows_[j]; }
  Fn& row(int j) { return rows_[j]; }

  cplx eval(double x) const;
  PolyTrig dx() const;
  PolyTrig integral0x() const;  // exact antiderivative vanishing at 0
  PolyTrig mul_fn(const Fn& f) const;
  PolyTrig add(const PolyTrig& other) const;
  PolyTrig scale(cplx s) const;

 private:
  int band_ = 0;
  std::vector<Fn> rows_;  // rows_[j] multiplies x^j
};

}  // namespace kdvnf
