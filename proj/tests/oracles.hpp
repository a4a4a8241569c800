// Test-only oracles, independent of the library's integration and
// eigenvalue paths: an adaptive Cash-Karp integrator for the fundamental
// system and a dense sine-Galerkin Dirichlet eigensolver.
#pragma once

#include <Eigen/Dense>
#include <array>

#include "kdvnf/potential.hpp"

namespace oracles {

using kdvnf::cplx;
using kdvnf::kPi;

struct MonodromyOracle {
  cplx y1, dy1, y2, dy2;
};

/// Adaptive Cash-Karp RK45 for -y'' + q y = lambda y on [0,1].
inline MonodromyOracle monodromy_adaptive(const kdvnf::Potential& q, cplx lambda,
                                          double tol = 1e-12) {
  using State = std::array<cplx, 4>;
  kdvnf::Fn f = q.as_fn();
  auto rhs = [&](double x, const State& s) -> State {
    cplx a = f.eval(x).real() - lambda;
    return {s[1], a * s[0], s[3], a * s[2]};
  };
  // Cash-Karp tableau
  static const double A[6] = {0, 1. / 5, 3. / 10, 3. / 5, 1., 7. / 8};
  static const double B[6][5] = {
      {0, 0, 0, 0, 0},
      {1. / 5, 0, 0, 0, 0},
      {3. / 40, 9. / 40, 0, 0, 0},
      {3. / 10, -9. / 10, 6. / 5, 0, 0},
      {-11. / 54, 5. / 2, -70. / 27, 35. / 27, 0},
      {1631. / 55296, 175. / 512, 575. / 13824, 44275. / 110592, 253. / 4096}};
  static const double C5[6] = {37. / 378, 0, 250. / 621, 125. / 594, 0, 512. / 1771};
  static const double C4[6] = {2825. / 27648, 0, 18575. / 48384, 13525. / 55296,
                               277. / 14336, 1. / 4};
  State s{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}};
  double x = 0.0, h = 1e-3;
  int guard = 0;
  while (x < 1.0 && guard++ < 2000000) {
    if (x + h > 1.0) h = 1.0 - x;
    std::array<State, 6> k;
    for (int i = 0; i < 6; ++i) {
      State tmp = s;
      for (int j = 0; j < i; ++j)
        for (int c = 0; c < 4; ++c) tmp[c] += h * B[i][j] * k[j][c];
      k[i] = rhs(x + A[i] * h, tmp);
    }
    State s5 = s, s4 = s;
    for (int i = 0; i < 6; ++i)
      for (int c = 0; c < 4; ++c) {
        s5[c] += h * C5[i] * k[i][c];
        s4[c] += h * C4[i] * k[i][c];
      }
    double err = 0;
    for (int c = 0; c < 4; ++c) err = std::max(err, std::abs(s5[c] - s4[c]));
    double scale = tol * std::max(1.0, std::abs(s5[0]));
    if (err <= scale || h < 1e-12) {
      x += h;
      s = s5;
    }
    double f_adj = err > 0 ? 0.9 * std::pow(scale / err, 0.2) : 2.0;
    h *= std::clamp(f_adj, 0.2, 2.0);
  }
  return {s[0], s[1], s[2], s[3]};
}

/// Dirichlet eigenvalues of -y'' + q y via a dense Galerkin matrix in the
/// sine basis sqrt(2) sin(k pi x), k = 1..modes.
inline std::vector<double> dirichlet_galerkin(const kdvnf::Potential& q, int modes) {
  auto cosint = [&](int L) -> double {
    // int_0^1 q(x) cos(L pi x) dx
    if (L % 2 == 0) return q.coeff(L / 2).real();
    double s = 0;
    for (int m = -q.n_pot; m <= q.n_pot; ++m) {
      if (m == 0) continue;
      // int_0^1 e^{2 pi i m x} cos(L pi x) dx for odd L
      double ap = 2.0 * m + L, am = 2.0 * m - L;
      cplx v = (kdvnf::kI / kPi) * (1.0 / ap + 1.0 / am);
      s += (q.coeff(m) * v).real();
    }
    return s;
  };
  Eigen::MatrixXd A(modes, modes);
  for (int j = 1; j <= modes; ++j)
    for (int k = 1; k <= modes; ++k) {
      double v = cosint(std::abs(j - k)) - cosint(j + k);
      if (j == k) v += kdvnf::sqr(j * kPi);
      A(j - 1, k - 1) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + modes);
  return ev;
}

}  // namespace oracles
