#include "kdvnf/floquet.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace kdvnf {

namespace {

void require_closed(const SpectralTable& t, int n, const char* who) {
  if (n < 1 || n > t.n_max)
    throw std::invalid_argument(std::string(who) + ": index outside table");
  if (!t.closed(n))
    throw ComputeError(std::string(who) + ": gap " + std::to_string(n) +
                       " is open; closed-gap Floquet data is undefined there");
}

struct ClosedGapEntries {
  FloquetEntries fe;
  double root_half;  // sqrt[+]((-1)^{n+1} Delta_ddot(tau_n)/2)
  double sgn;        // (-1)^n
};

ClosedGapEntries closed_gap_entries(const Potential& q, const SpectralTable& t, int n,
                                    const char* who) {
  require_closed(t, n, who);
  ClosedGapEntries out;
  out.fe = floquet_entries(q, t.tau[n - 1]);
  out.sgn = (n % 2 == 0) ? 1.0 : -1.0;
  double m2dot = (out.fe.m2_dot * out.sgn).real();
  double ddd = (out.fe.Delta_ddot * -out.sgn).real();
  if (!(m2dot > 0) || !(ddd > 0))
    throw ComputeError(std::string(who) + ": sign condition violated at n=" +
                       std::to_string(n) + " (wrong tau_n or integrator failure)");
  out.root_half = std::sqrt(0.5 * ddd);
  return out;
}

double simpson(const std::vector<cplx>& f, auto&& map) {
  // composite Simpson over the [0,1] grid (even panel count enforced upstream)
  int G = static_cast<int>(f.size()) - 1;
  double h = 1.0 / G;
  double s = map(f[0]) + map(f[G]);
  for (int i = 1; i < G; ++i) s += map(f[i]) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

FloquetCoeffs floquet_coefficient(const Potential& q, const SpectralTable& t, int n) {
  auto cg = closed_gap_entries(q, t, n, "floquet_coefficient");
  const auto& fe = cg.fe;
  double m1dot = fe.m1_dot.real(), m2dot = fe.m2_dot.real();
  FloquetCoeffs out;
  cplx base = -m1dot / m2dot;
  cplx imag_part = kI * cg.root_half / (cg.sgn * m2dot);
  out.a_plus = base + imag_part;
  out.a_minus = base - imag_part;
  // alternative closed-gap formula through m1'_dot, m2'_dot
  cplx alt_p = fe.m1p_dot / (-fe.m2p_dot + kI * cg.sgn * cg.root_half);
  out.alt_agreement = std::abs(alt_p - out.a_plus) / std::abs(out.a_plus);
  if (out.alt_agreement > 1e-6)
    throw ComputeError("floquet_coefficient: the two a_n formulas disagree by " +
                       std::to_string(out.alt_agreement) + " at n=" + std::to_string(n));
  return out;
}

FloquetSolution floquet_solution(const Potential& q, const SpectralTable& t, int n) {
  auto a = floquet_coefficient(q, t, n);
  auto fp = fundamental_solutions(q, t.tau[n - 1]);
  FloquetSolution out;
  int G = q.grid;
  out.f_plus.resize(G + 1);
  out.f_minus.resize(G + 1);
  for (int i = 0; i <= G; ++i) {
    out.f_plus[i] = fp.y1[i] + a.a_plus * fp.y2[i];
    out.f_minus[i] = fp.y1[i] + a.a_minus * fp.y2[i];
  }
  out.multiplier_dev = std::abs(std::abs(out.f_plus[G] / out.f_plus[0]) - 1.0);
  return out;
}

NormalizedPair normalized_pair(const Potential& q, const SpectralTable& t, int n) {
  auto cg = closed_gap_entries(q, t, n, "normalized_pair");
  double m1dot = cg.fe.m1_dot.real(), m2dot = cg.fe.m2_dot.real();
  double ddd = cg.fe.Delta_ddot.real();
  double scale = std::sqrt(-2.0 * m2dot / ddd);
  double gslope = cg.root_half / (cg.sgn * m2dot);
  auto fp = fundamental_solutions(q, t.tau[n - 1]);
  int G = q.grid;
  NormalizedPair out;
  out.H.resize(G + 1);
  out.G.resize(G + 1);
  for (int i = 0; i <= G; ++i) {
    out.H[i] = scale * (fp.y1[i] - (m1dot / m2dot) * fp.y2[i]);
    out.G[i] = scale * gslope * fp.y2[i];
  }
  // Normalization: int H G = 0, int H^2 = 1, int G^2 = 1, G(0)=0, H(0)>0, G'(0)>0
  std::vector<cplx> hg(G + 1), h2(G + 1), g2(G + 1);
  for (int i = 0; i <= G; ++i) {
    hg[i] = out.H[i] * out.G[i];
    h2[i] = out.H[i] * out.H[i];
    g2[i] = out.G[i] * out.G[i];
  }
  auto re = [](cplx v) { return v.real(); };
  out.res_hg = std::abs(simpson(hg, re));
  out.res_h2 = std::abs(simpson(h2, re) - 1.0);
  out.res_g2 = std::abs(simpson(g2, re) - 1.0);
  if (out.res_hg > 1e-6 || out.res_h2 > 1e-6 || out.res_g2 > 1e-6)
    throw ComputeError("normalized_pair: normalization residual above 1e-6 at n=" +
                       std::to_string(n));
  if (!(out.H[0].real() > 0) || !(out.G[1].real() > 0))
    throw ComputeError("normalized_pair: sign normalization failed at n=" + std::to_string(n));
  return out;
}

double gap_factor_xi(const Potential& q, const SpectralTable& t, int n) {
  require_closed(t, n, "gap_factor_xi");
  (void)q;
  double tau = t.tau[n - 1];
  if (!(tau > 0)) throw ComputeError("gap_factor_xi: Re tau_n must be positive");
  double chi = 1.0 / std::sqrt(tau) / std::sqrt(1.0 - t.lam0 / tau);
  for (int k : t.open_gaps()) {
    chi *= (1.0 - t.lam_dot[k - 1] / tau) /
           std::sqrt((1.0 - t.lam_plus[k - 1] / tau) * (1.0 - t.lam_minus[k - 1] / tau));
  }
  return std::sqrt(n * kPi) * std::sqrt(chi);
}

double gap_factor_d(const Potential& q, const SpectralTable& t, int n) {
  require_closed(t, n, "gap_factor_d");
  double tau = t.tau[n - 1];
  double d = 1.0;
  for (int k : t.open_gaps())
    d *= (1.0 - t.mu[k - 1] / tau) / (1.0 - t.lam_dot[k - 1] / tau);
  // direct quotient from the lambda-derivatives at tau_n
  auto fe = floquet_entries(q, tau);
  double direct = -(fe.m2_dot / fe.Delta_ddot).real();
  if (std::abs(direct - d) > 1e-5 * std::max(1.0, std::abs(d)))
    throw ComputeError("gap_factor_d: product formula and direct quotient disagree at n=" +
                       std::to_string(n) + " (eigenvalue table error?)");
  return d;
}

// ---------------------------------------------------------------------------
// Hyperelliptic quadratures
// ---------------------------------------------------------------------------
namespace {

struct GapGeometry {
  std::vector<int> open;    // open gap indices
  double lam0;
  // sqrt(R) restricted to gap l: sqrt(lam-lam0) * prod over open k of
  // sqrt(|(lam_k^+ - lam)(lam_k^- - lam)|), with the l-factor removed for
  // Chebyshev substitution.
};

/// |sqrt(R)| on the real axis with the factor of gap `skip` removed.
double sqrtR_abs_skip(const SpectralTable& t, const std::vector<int>& open, double lam,
                      int skip) {
  double v = std::sqrt(std::abs(lam - t.lam0));
  for (int k : open) {
    if (k == skip) continue;
    v *= std::sqrt(std::abs((t.lam_plus[k - 1] - lam) * (t.lam_minus[k - 1] - lam)));
  }
  return v;
}

constexpr int chebyshev_nodes = 128;

/// int over gap l of f(lam)/sqrt((lam_l^+ - lam)(lam - lam_l^-)) dlam with a
/// convergence check at doubled node count.
template <class F>
double gap_integral(const SpectralTable& t, int l, F&& f) {
  double mid = t.tau[l - 1], half = 0.5 * t.gamma[l - 1];
  auto eval = [&](int M) {
    return gauss_chebyshev([&](double u) { return f(mid + half * u); }, M);
  };
  double a = eval(chebyshev_nodes), b = eval(2 * chebyshev_nodes);
  if (std::abs(a - b) > 1e-8 * std::max(1.0, std::abs(b)))
    throw ComputeError("gap_integral: quadrature not converged");
  return b;
}

}  // namespace

std::vector<double> psi_polynomial(const Potential& q, const SpectralTable& t, int n) {
  (void)q;
  auto open = t.open_gaps();
  int M = static_cast<int>(open.size());
  if (M < 1) throw ComputeError("psi_polynomial: no open gaps");
  double n2pi2 = sqr(n * kPi);
  double tau_n = t.tau[n - 1];
  Eigen::MatrixXd E(M, M);
  Eigen::VectorXd b(M);
  for (int r = 0; r < M; ++r) {
    int l = open[r];
    for (int j = 0; j < M; ++j) {
      E(r, j) = gap_integral(t, l, [&](double lam) {
        return std::pow(lam, j) / sqrtR_abs_skip(t, open, lam, l) * n2pi2 / (tau_n - lam);
      });
    }
    b(r) = gap_integral(t, l, [&](double lam) {
      return std::pow(lam, M) / sqrtR_abs_skip(t, open, lam, l) * n2pi2 / (tau_n - lam);
    });
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(E);
  Eigen::VectorXd s = lu.solve(-b);
  if ((E * s + b).norm() > 1e-10 * std::max(1.0, b.norm()))
    throw ComputeError("psi_polynomial: singular moment system (degenerate gap data)");
  return std::vector<double>(s.data(), s.data() + M);
}

double beta_angle(const Potential& q, const SpectralTable& t, int n) {
  require_closed(t, n, "beta_angle");
  auto open = t.open_gaps();
  if (open.empty()) return 0.0;
  auto s = psi_polynomial(q, t, n);
  int M = static_cast<int>(s.size());
  double tau_n = t.tau[n - 1];
  double beta = 0.0;
  for (int l : open) {
    double mu = t.mu[l - 1];
    double lm = t.lam_minus[l - 1], lp = t.lam_plus[l - 1];
    if (mu < lm - 1e-9 || mu > lp + 1e-9)
      throw ComputeError("beta_angle: mu outside its gap (table inconsistency)");
    double half = 0.5 * t.gamma[l - 1];
    if (mu - lm < 1e-12 * std::max(1.0, std::abs(lm))) continue;  // empty integral
    // branch: sign(sqrt*(Delta^2-4)) on the gap = sign(delta(mu_l));
    // closed-gap factors of sqrt(Delta^2-4) contribute sign(tau_k - lam)
    double sign_delta = floquet_entries(q, mu).delta.real() >= 0 ? 1.0 : -1.0;
    double closed_sign = 1.0;
    for (int k = 1; k <= t.n_max; ++k)
      if (k != n && t.closed(k) && t.tau[k - 1] < lm) closed_sign = -closed_sign;
    double t_up = std::asin(std::clamp((mu - t.tau[l - 1]) / half, -1.0, 1.0));
    double seg = gl_integrate(
        [&](double u) {
          double lam = t.tau[l - 1] + half * std::sin(u);
          double poly = 1.0;  // lam^M + s_{M-1} lam^{M-1} + ... + s_0
          for (int j = M - 1; j >= 0; --j) poly = poly * lam + s[j];
          return poly / sqrtR_abs_skip(t, open, lam, l) * (n * kPi) / (tau_n - lam);
        },
        -0.5 * kPi, t_up, 1e-11);
    beta += sign_delta * closed_sign * seg;
  }
  return beta;
}

// ---------------------------------------------------------------------------
// Actions
// ---------------------------------------------------------------------------
namespace {

double circle_radius(const SpectralTable& t, int n) {
  double r = std::max(t.gamma[n - 1], 0.25 * sqr(double(n)));
  // keep the contour inside the isolating neighborhood of gap n
  double left = (n == 1) ? t.tau[0] - t.lam0 : t.tau[n - 1] - t.lam_plus[n - 2];
  double right = (n == t.n_max) ? 2.0 * kPi * kPi * n : t.lam_minus[n] - t.tau[n - 1];
  double cap = 0.45 * std::min(left, right);
  r = std::min(r, cap);
  if (!(r > 0.51 * t.gamma[n - 1]))
    throw ComputeError("action: no admissible contour radius at n=" + std::to_string(n));
  return r;
}

/// Canonical root of Delta^2 - 4 tracked by continuity along a path; the
/// anchor fixes sign -i(-1)^n |.|^{1/2} on band n.
class BranchTracker {
 public:
  explicit BranchTracker(int n) : sign_anchor_(n % 2 == 0 ? -1.0 : 1.0) {}
  cplx eval(cplx delta_sq_minus_4, bool first, double angle) {
    cplx w = std::sqrt(delta_sq_minus_4);
    if (first) {
      cplx anchor = sign_anchor_ * kI * std::abs(w);
      if (std::abs(w - anchor) > std::abs(w + anchor)) w = -w;
    } else {
      if (std::abs(w - prev_) > std::abs(w + prev_)) w = -w;
      if (std::abs(w - prev_) > 0.7 * std::abs(prev_) && std::abs(prev_) > 1e-12)
        throw ComputeError("action: branch tracking discontinuity near angle " +
                           std::to_string(angle));
    }
    prev_ = w;
    return w;
  }

 private:
  double sign_anchor_;
  cplx prev_{0, 0};
};

}  // namespace

double action(const Potential& q, const SpectralTable& t, int n) {
  if (n < 1 || n > t.n_max) throw std::invalid_argument("action: index outside table");
  double r = circle_radius(t, n);
  double tau = t.tau[n - 1];
  HillEvaluator ev(q);
  auto run = [&](int M) {
    std::vector<FloquetEntries> fes(M);
    parallel_for(M, ExecMode::parallel, [&](int j) {
      double th = 2.0 * kPi * j / M;
      cplx lam = tau + r * std::exp(cplx{0.0, th});
      fes[j] = ev.entries_fast(lam);
    });
    BranchTracker track(n);
    cplx total{0, 0};
    for (int j = 0; j < M; ++j) {
      double th = 2.0 * kPi * j / M;
      cplx lam = tau + r * std::exp(cplx{0.0, th});
      cplx w = track.eval(fes[j].Delta * fes[j].Delta - 4.0, j == 0, th);
      total += lam * fes[j].Delta_dot / w * (kI * r * std::exp(cplx{0.0, th}));
    }
    return (total * (2.0 * kPi / M) / kPi).real();
  };
  double a = run(128), b = run(256);
  if (std::abs(a - b) > 1e-7 * std::max(1.0, std::abs(b)))
    throw ComputeError("action: contour quadrature not converged at n=" + std::to_string(n));
  return b;
}

double action_segment(const Potential& q, const SpectralTable& t, int n) {
  if (!(t.gamma[n - 1] > 0)) return 0.0;
  double tau = t.tau[n - 1], half = 0.5 * t.gamma[n - 1];
  double lm = t.lam_minus[n - 1], lp = t.lam_plus[n - 1];
  HillEvaluator ev(q);
  // track the canonical branch from the band anchor at tau + r over the top
  // of the gap down to its upper rim
  double r = circle_radius(t, n);
  BranchTracker track(n);
  bool first = true;
  cplx w_top{0, 0};
  auto visit = [&](cplx lam) {
    auto fe = ev.entries_fast(lam);
    w_top = track.eval(fe.Delta * fe.Delta - 4.0, first, 0.0);
    first = false;
  };
  for (int j = 0; j <= 40; ++j) visit(tau + r * std::exp(cplx{0.0, 0.5 * kPi * j / 40}));
  for (int j = 1; j <= 40; ++j) visit(cplx{tau, r * (1.0 - double(j) / 40) + 1e-7});
  double sgn = (w_top.real() >= 0) ? 1.0 : -1.0;  // upper-rim values are real in the gap
  auto run = [&](int nodes) {
    std::vector<FloquetEntries> fes(nodes);
    std::vector<double> us(nodes);
    for (int i = 1; i <= nodes; ++i) us[i - 1] = std::cos((2 * i - 1) * kPi / (2 * nodes));
    parallel_for(nodes, ExecMode::parallel, [&](int i) {
      fes[i] = ev.entries_fast(tau + half * us[i]);
    });
    double total = 0;
    for (int i = 0; i < nodes; ++i) {
      double lam = tau + half * us[i];
      double hval = (fes[i].Delta * fes[i].Delta - 4.0).real() / ((lp - lam) * (lam - lm));
      double w = sgn * std::sqrt(std::max(hval, 1e-300));
      total += lam * fes[i].Delta_dot.real() / w;
    }
    return -(2.0 / kPi) * total * kPi / nodes;
  };
  double a = run(chebyshev_nodes), b = run(2 * chebyshev_nodes);
  if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(b)))
    throw ComputeError("action_segment: quadrature not converged");
  return b;
}

// ---------------------------------------------------------------------------
// Frequencies via the Abelian differential Omega_4
// ---------------------------------------------------------------------------
namespace {

struct Omega4 {
  std::vector<double> c;  // P(lam) = lam^{M+1} + c[0] lam^M + ... + c[M]
  std::vector<int> open;
  double lam0;

  double P(double lam) const {
    double v = 1.0;
    for (double ck : c) v = v * lam + ck;
    return v;
  }
  /// |sqrt(Rt)| with Rt = (lam-lam0) prod_open (lam-lam^+)(lam-lam^-)
  double sqrtRt_abs(const SpectralTable& t, double lam, int skip = 0) const {
    double v = std::sqrt(std::abs(lam - lam0));
    for (int k : open) {
      if (k == skip) continue;
      v *= std::sqrt(std::abs((lam - t.lam_plus[k - 1]) * (lam - t.lam_minus[k - 1])));
    }
    return v;
  }
};

Omega4 omega4_coeffs(const SpectralTable& t) {
  Omega4 om;
  om.open = t.open_gaps();
  om.lam0 = t.lam0;
  int M = static_cast<int>(om.open.size());
  om.c.assign(M + 1, 0.0);
  // z-chart condition: coefficient of z^{-2} vanishes <=> c1 = -(sum of branch points)/2
  double p1 = t.lam0;
  for (int k : om.open) p1 += t.lam_plus[k - 1] + t.lam_minus[k - 1];
  om.c[0] = -0.5 * p1;
  if (M == 0) return om;
  // a-cycle conditions: int over each open gap of P/sqrt|Rt| = 0
  Eigen::MatrixXd A(M, M);
  Eigen::VectorXd rhs(M);
  for (int r = 0; r < M; ++r) {
    int l = om.open[r];
    auto moment = [&](int power) {
      return gap_integral(t, l, [&](double lam) {
        return std::pow(lam, power) / om.sqrtRt_abs(t, lam, l);
      });
    };
    // unknowns c[1..M] multiply lam^{M-1}..lam^0
    for (int j = 1; j <= M; ++j) A(r, j - 1) = moment(M - j);
    rhs(r) = -(moment(M + 1) + om.c[0] * moment(M));
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd x = lu.solve(rhs);
  if ((A * x - rhs).norm() > 1e-9 * std::max(1.0, rhs.norm()))
    throw ComputeError("frequency: ill-conditioned a-cycle coefficient system");
  for (int j = 1; j <= M; ++j) om.c[j] = x(j - 1);
  return om;
}

/// -12 * sum over band segments from lam0 to `end` with alternating signs.
/// Open-gap cut segments are skipped (a-cycle normalization kills them).
double omega_path(const Potential& q, const SpectralTable& t, const Omega4& om,
                  double end_lam, bool end_singular, int end_gap) {
  (void)q;
  int M = static_cast<int>(om.open.size());
  double total = 0.0;
  double seg_lo = t.lam0;
  double band_sign = (M == 0) ? -1.0 : 1.0;  // q = 0 degenerate chart flips the branch
  for (int idx = 0; idx <= M; ++idx) {
    bool last_band = (idx == M) || (end_gap > 0 && om.open[idx] >= end_gap) ||
                     (end_lam <= t.lam_minus[om.open[idx] - 1] + 1e-14);
    double seg_hi = last_band ? end_lam : t.lam_minus[om.open[idx] - 1];
    if (seg_hi > seg_lo + 1e-14) {
      bool right_singular = !last_band || end_singular;
      double seg;
      if (right_singular) {
        // both endpoints are branch points (or the left one is lam0 itself):
        // Chebyshev substitution over [seg_lo, seg_hi]
        double mid = 0.5 * (seg_lo + seg_hi), half = 0.5 * (seg_hi - seg_lo);
        auto eval = [&](int nodes) {
          return gauss_chebyshev(
              [&](double u) {
                double lam = mid + half * u;
                double red = om.sqrtRt_abs(t, lam) /
                             std::sqrt(std::abs((lam - seg_lo) * (seg_hi - lam)));
                return om.P(lam) / red;
              },
              nodes);
        };
        double a = eval(chebyshev_nodes), b = eval(2 * chebyshev_nodes);
        if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b)))
          throw ComputeError("frequency: band quadrature not converged");
        seg = b;
      } else {
        // singular on the left only: u-substitution lam = seg_lo + u^2
        double U = std::sqrt(seg_hi - seg_lo);
        seg = gl_integrate(
            [&](double u) {
              double lam = seg_lo + u * u;
              double red = om.sqrtRt_abs(t, lam) / std::sqrt(std::abs(lam - seg_lo));
              return 2.0 * om.P(lam) / red;
            },
            0.0, U, 1e-12);
      }
      total += band_sign * seg;
    }
    if (last_band) break;
    seg_lo = t.lam_plus[om.open[idx] - 1];
    band_sign = -band_sign;
  }
  return -12.0 * total;
}

}  // namespace

double frequency(const Potential& q, const SpectralTable& t, int n) {
  if (n < 1 || n > t.n_max) throw std::invalid_argument("frequency: index outside table");
  Omega4 om = omega4_coeffs(t);
  if (t.closed(n)) return omega_path(q, t, om, t.tau[n - 1], false, 0);
  return omega_path(q, t, om, t.lam_minus[n - 1], true, n);
}

double frequency_tail_residual(const Potential& q, const SpectralTable& t, int n) {
  auto open = t.open_gaps();
  int m_s = open.empty() ? 1 : open.back() + 1;
  if (!(n > m_s) || !t.closed(n) || !t.closed(m_s)) return 0.0;
  Omega4 om = omega4_coeffs(t);
  double w_n = omega_path(q, t, om, t.tau[n - 1], false, 0);
  double w_ms = omega_path(q, t, om, t.tau[m_s - 1], false, 0);
  // tail integral over [tau_{m_S}, tau_n] with the last band's sign
  double sign = open.empty() ? -1.0 : ((open.size() % 2) ? -1.0 : 1.0);
  double tail = gl_integrate(
      [&](double lam) { return om.P(lam) / om.sqrtRt_abs(t, lam); },
      t.tau[m_s - 1], t.tau[n - 1], 1e-12);
  return std::abs(w_n - (w_ms - 12.0 * sign * tail)) / std::max(1.0, std::abs(w_n));
}

// ---------------------------------------------------------------------------
// W functions
// ---------------------------------------------------------------------------
WFunctions w_function(const Potential& q, const SpectralTable& t, int n) {
  require_closed(t, n, "w_function");
  double xi = gap_factor_xi(q, t, n);
  double d = gap_factor_d(q, t, n);
  double beta = beta_angle(q, t, n);

  // f_n^2 is 1-periodic; sample it on a grid wide enough for its band n + n_pot
  int G = q.grid;
  while (G < 2 * (n + q.n_pot) + 32) G *= 2;
  Potential qw = q;
  qw.grid = G;
  auto a = floquet_coefficient(q, t, n);
  auto fp = fundamental_solutions(qw, t.tau[n - 1]);
  std::vector<cplx> f2(G);
  for (int i = 0; i < G; ++i) {
    cplx f = fp.y1[i] + a.a_plus * fp.y2[i];
    f2[i] = f * f;
  }
  Fn f2_fn = fn_from_grid(f2, G / 2 - 1);
  // spectral derivative, then the scalar factors; m2_dot/Delta_ddot = -d
  Fn df2 = fn_dx(f2_fn);
  cplx factor = xi * (-d) * std::exp(kI * beta) * (-1.0 / (2.0 * kPi * kI * double(n)));
  WFunctions out;
  out.W_plus = fn_scale(df2, factor);
  out.W_minus = fn_conj(out.W_plus);
  return out;
}

std::vector<WFunctions> w_family(const Potential& q, const SpectralTable& t,
                                 const std::vector<int>& n_set, ExecMode mode) {
  std::vector<WFunctions> out(n_set.size());
  std::vector<std::string> errors(n_set.size());
  parallel_for(static_cast<int>(n_set.size()), mode, [&](int i) {
    try {
      out[i] = w_function(q, t, n_set[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& msg : errors)
    if (!msg.empty()) throw ComputeError(msg);
  return out;
}

}  // namespace kdvnf
