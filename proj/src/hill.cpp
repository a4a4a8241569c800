#include "kdvnf/hill.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "json.hpp"

namespace kdvnf {

namespace {

enum class VarLevel { none = 0, first = 1, second = 2 };

// State layout: [y1, y1', y2, y2'] + first lambda-variation + second
using State = std::array<cplx, 12>;

struct EndData {
  cplx m1, dm1, m2, dm2;
  cplx v1, dv1, v2, dv2;
  cplx w1, dw1, w2, dw2;
};

int step_count(const Potential& q, cplx lambda, bool align_grid) {
  double base = 96.0 * std::max({double(q.n_pot), std::sqrt(std::abs(lambda)) / kPi, 1.0});
  int steps = static_cast<int>(std::ceil(base));
  if (align_grid && q.grid > 0) steps = q.grid * ((steps + q.grid - 1) / q.grid);
  return steps;
}

/// q sampled at the RK4 nodes (step endpoints and midpoints) for a given
/// step count; built once per count and reused across the lambda sweep.
class QNodes {
 public:
  explicit QNodes(const Potential& q) : f_(q.as_fn()) {}
  // std::map references stay valid across inserts, so concurrent callers only
  // need the lock around lookup/insert
  const std::vector<double>& at(int steps) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(steps);
    if (it != cache_.end()) return it->second;
    std::vector<double> v(2 * steps + 1);
    double h = 0.5 / steps;
    for (int i = 0; i <= 2 * steps; ++i) v[i] = f_.eval(h * i).real();
    return cache_.emplace(steps, std::move(v)).first->second;
  }

 private:
  Fn f_;
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<double>> cache_;
};

inline void derivs(const State& s, cplx a, int nv, State& out) {
  out[0] = s[1]; out[1] = a * s[0];
  out[2] = s[3]; out[3] = a * s[2];
  if (nv > 4) {
    out[4] = s[5]; out[5] = a * s[4] - s[0];
    out[6] = s[7]; out[7] = a * s[6] - s[2];
  }
  if (nv > 8) {
    out[8] = s[9];  out[9] = a * s[8] - 2.0 * s[4];
    out[10] = s[11]; out[11] = a * s[10] - 2.0 * s[6];
  }
}

EndData integrate(const std::vector<double>& qv, cplx lambda, int steps, VarLevel lvl,
                  std::vector<cplx>* gy1, std::vector<cplx>* gdy1,
                  std::vector<cplx>* gy2, std::vector<cplx>* gdy2, int grid) {
  const double h = 1.0 / steps;
  const int nv = (lvl == VarLevel::none) ? 4 : (lvl == VarLevel::first ? 8 : 12);
  State s{};
  s[0] = 1.0; s[3] = 1.0;
  int record_every = grid > 0 ? steps / grid : 0;
  auto record = [&](int i) {
    if (!gy1 || record_every == 0 || i % record_every != 0) return;
    int j = i / record_every;
    (*gy1)[j] = s[0]; (*gdy1)[j] = s[1];
    (*gy2)[j] = s[2]; (*gdy2)[j] = s[3];
  };
  record(0);
  State k1, k2, k3, k4, tmp;
  for (int i = 0; i < steps; ++i) {
    cplx a0 = qv[2 * i] - lambda, am = qv[2 * i + 1] - lambda, a1 = qv[2 * i + 2] - lambda;
    derivs(s, a0, nv, k1);
    for (int j = 0; j < nv; ++j) tmp[j] = s[j] + 0.5 * h * k1[j];
    derivs(tmp, am, nv, k2);
    for (int j = 0; j < nv; ++j) tmp[j] = s[j] + 0.5 * h * k2[j];
    derivs(tmp, am, nv, k3);
    for (int j = 0; j < nv; ++j) tmp[j] = s[j] + h * k3[j];
    derivs(tmp, a1, nv, k4);
    for (int j = 0; j < nv; ++j)
      s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    record(i + 1);
  }
  EndData e{};
  e.m1 = s[0]; e.dm1 = s[1]; e.m2 = s[2]; e.dm2 = s[3];
  e.v1 = s[4]; e.dv1 = s[5]; e.v2 = s[6]; e.dv2 = s[7];
  e.w1 = s[8]; e.dw1 = s[9]; e.w2 = s[10]; e.dw2 = s[11];
  return e;
}

EndData rich(const EndData& a, const EndData& b) {
  auto mix = [](cplx ca, cplx cb) { return (16.0 * cb - ca) / 15.0; };
  EndData e;
  e.m1 = mix(a.m1, b.m1); e.dm1 = mix(a.dm1, b.dm1);
  e.m2 = mix(a.m2, b.m2); e.dm2 = mix(a.dm2, b.dm2);
  e.v1 = mix(a.v1, b.v1); e.dv1 = mix(a.dv1, b.dv1);
  e.v2 = mix(a.v2, b.v2); e.dv2 = mix(a.dv2, b.dv2);
  e.w1 = mix(a.w1, b.w1); e.dw1 = mix(a.dw1, b.dw1);
  e.w2 = mix(a.w2, b.w2); e.dw2 = mix(a.dw2, b.dw2);
  return e;
}

FloquetEntries entries_from_end(const EndData& e) {
  FloquetEntries f;
  f.m1 = e.m1; f.m2 = e.m2; f.m1p = e.dm1; f.m2p = e.dm2;
  f.Delta = e.m1 + e.dm2;
  f.delta = e.m1 - e.dm2;
  f.m1_dot = e.v1; f.m2_dot = e.v2; f.m1p_dot = e.dv1; f.m2p_dot = e.dv2;
  f.Delta_dot = e.v1 + e.dv2;
  f.Delta_ddot = e.w1 + e.dw2;
  return f;
}

/// Per-potential evaluation engine.  "Cheap" single-pass evaluations drive
/// panel scans and bisections; Richardson-extrapolated evaluations feed Newton
/// polishing and all reported values.
class HillEval {
 public:
  explicit HillEval(const Potential& q) : q_(q), nodes_(q) {}

  FloquetEntries cheap(double lam, VarLevel lvl = VarLevel::none) const {
    int steps = step_count(q_, lam, false);
    return entries_from_end(integrate(nodes_.at(steps), lam, steps, lvl,
                                      nullptr, nullptr, nullptr, nullptr, 0));
  }
  FloquetEntries accurate(cplx lam, VarLevel lvl = VarLevel::second, double* err = nullptr) const {
    int steps = step_count(q_, lam, false);
    EndData a = integrate(nodes_.at(steps), lam, steps, lvl, nullptr, nullptr, nullptr, nullptr, 0);
    EndData b = integrate(nodes_.at(2 * steps), lam, 2 * steps, lvl,
                          nullptr, nullptr, nullptr, nullptr, 0);
    if (err)
      *err = std::max({std::abs(a.m1 - b.m1), std::abs(a.m2 - b.m2),
                       std::abs(a.dm1 - b.dm1), std::abs(a.dm2 - b.dm2)}) / 15.0;
    return entries_from_end(rich(a, b));
  }
  /// Two Richardson levels (kills the h^4 and h^5 error terms); used where
  /// closed-gap discrimination needs the discriminant to ~1e-13.
  FloquetEntries accurate8(cplx lam, VarLevel lvl = VarLevel::second, double* err = nullptr) const {
    int steps = step_count(q_, lam, false);
    EndData a = integrate(nodes_.at(steps), lam, steps, lvl, nullptr, nullptr, nullptr, nullptr, 0);
    EndData b = integrate(nodes_.at(2 * steps), lam, 2 * steps, lvl,
                          nullptr, nullptr, nullptr, nullptr, 0);
    EndData c = integrate(nodes_.at(4 * steps), lam, 4 * steps, lvl,
                          nullptr, nullptr, nullptr, nullptr, 0);
    EndData p1 = rich(a, b), p2 = rich(b, c);
    auto mix = [](cplx u, cplx v) { return (32.0 * v - u) / 31.0; };
    EndData e;
    e.m1 = mix(p1.m1, p2.m1); e.dm1 = mix(p1.dm1, p2.dm1);
    e.m2 = mix(p1.m2, p2.m2); e.dm2 = mix(p1.dm2, p2.dm2);
    e.v1 = mix(p1.v1, p2.v1); e.dv1 = mix(p1.dv1, p2.dv1);
    e.v2 = mix(p1.v2, p2.v2); e.dv2 = mix(p1.dv2, p2.dv2);
    e.w1 = mix(p1.w1, p2.w1); e.dw1 = mix(p1.dw1, p2.dw1);
    e.w2 = mix(p1.w2, p2.w2); e.dw2 = mix(p1.dw2, p2.dw2);
    if (err)
      *err = std::max({std::abs(p1.m1 - p2.m1), std::abs(p1.m2 - p2.m2),
                       std::abs(p1.dm1 - p2.dm1), std::abs(p1.dm2 - p2.dm2)}) / 31.0;
    return entries_from_end(e);
  }

 private:
  Potential q_;
  QNodes nodes_;
};

using RealFn = std::function<double(double)>;

/// Bisection (cheap evaluator) to moderate width, then Newton with the
/// accurate evaluator and analytic derivative.
double refine_root(HillEval& ev, const RealFn& f_cheap, double lo, double hi, double flo_cheap,
                   const std::function<std::pair<double, double>(double)>& f_df_acc) {
  double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  for (int it = 0; it < 200 && hi - lo > 1e-5 * scale; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f_cheap(mid);
    if ((fm < 0) == (flo_cheap < 0)) { lo = mid; flo_cheap = fm; } else { hi = mid; }
  }
  (void)ev;
  double x = 0.5 * (lo + hi);
  double span = hi - lo;
  for (int it = 0; it < 12; ++it) {
    auto [fx, dfx] = f_df_acc(x);
    if (dfx == 0) break;
    double step = fx / dfx;
    double xn = x - step;
    if (xn < lo - 4 * span || xn > hi + 4 * span) break;  // stay near the bracket
    x = xn;
    if (std::abs(step) < 1e-12 * scale) break;
  }
  return x;
}

std::vector<std::pair<double, double>> sign_changes(const RealFn& f, double lo, double hi,
                                                    int panels) {
  std::vector<std::pair<double, double>> out;
  double prev = f(lo);
  for (int i = 1; i <= panels; ++i) {
    double x = lo + (hi - lo) * i / panels;
    double cur = f(x);
    if ((prev < 0) != (cur < 0)) out.emplace_back(lo + (hi - lo) * (i - 1) / panels, x);
    prev = cur;
  }
  return out;
}

double nearest_root(HillEval& ev, const RealFn& f_cheap,
                    const std::function<std::pair<double, double>(double)>& f_df_acc,
                    double lo, double hi, double center, int panels, const char* what,
                    int index) {
  auto brackets = sign_changes(f_cheap, lo, hi, panels);
  if (brackets.empty())
    throw ComputeError(std::string("spectral_table: bracketing failure for ") + what +
                       " at n=" + std::to_string(index) + " in [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  double best = 0, bestd = 1e300;
  for (auto& [a, b] : brackets) {
    double r = refine_root(ev, f_cheap, a, b, f_cheap(a), f_df_acc);
    if (std::abs(r - center) < bestd) { bestd = std::abs(r - center); best = r; }
  }
  return best;
}

}  // namespace

FundamentalPair fundamental_solutions(const Potential& q, cplx lambda,
                                      bool store_grid, bool check) {
  FundamentalPair out;
  out.lambda = lambda;
  int grid = store_grid ? q.grid : 0;
  int steps = step_count(q, lambda, store_grid);
  QNodes nodes(q);
  std::vector<cplx> y1(grid + 1), dy1(grid + 1), y2(grid + 1), dy2(grid + 1);
  EndData a = integrate(nodes.at(steps), lambda, steps, VarLevel::second,
                        store_grid ? &y1 : nullptr, store_grid ? &dy1 : nullptr,
                        store_grid ? &y2 : nullptr, store_grid ? &dy2 : nullptr, grid);
  EndData e = a;
  if (check) {
    std::vector<cplx> y1b(grid + 1), dy1b(grid + 1), y2b(grid + 1), dy2b(grid + 1);
    EndData b = integrate(nodes.at(2 * steps), lambda, 2 * steps, VarLevel::second,
                          store_grid ? &y1b : nullptr, store_grid ? &dy1b : nullptr,
                          store_grid ? &y2b : nullptr, store_grid ? &dy2b : nullptr, grid);
    out.err_estimate = std::max({std::abs(a.m1 - b.m1), std::abs(a.m2 - b.m2),
                                 std::abs(a.dm1 - b.dm1), std::abs(a.dm2 - b.dm2)}) / 15.0;
    double scale = std::max({1.0, std::abs(b.m1), std::abs(b.dm1)});
    if (!(out.err_estimate < 1e-6 * scale))
      throw ComputeError("fundamental_solutions: step-halving disagreement, estimate " +
                         std::to_string(out.err_estimate));
    e = rich(a, b);
    if (store_grid) {
      for (int i = 0; i <= grid; ++i) {
        y1[i] = (16.0 * y1b[i] - y1[i]) / 15.0;
        dy1[i] = (16.0 * dy1b[i] - dy1[i]) / 15.0;
        y2[i] = (16.0 * y2b[i] - y2[i]) / 15.0;
        dy2[i] = (16.0 * dy2b[i] - dy2[i]) / 15.0;
      }
    }
  }
  if (store_grid) {
    out.y1 = std::move(y1); out.dy1 = std::move(dy1);
    out.y2 = std::move(y2); out.dy2 = std::move(dy2);
  } else {
    out.y1 = {e.m1}; out.dy1 = {e.dm1}; out.y2 = {e.m2}; out.dy2 = {e.dm2};
  }
  out.v1 = e.v1; out.dv1 = e.dv1; out.v2 = e.v2; out.dv2 = e.dv2;
  out.w1 = e.w1; out.dw1 = e.dw1; out.w2 = e.w2; out.dw2 = e.dw2;
  return out;
}

FloquetEntries floquet_entries(const Potential& q, cplx lambda, bool check) {
  HillEval ev(q);
  double err = 0;
  FloquetEntries f = ev.accurate8(lambda, VarLevel::second, &err);
  if (check && !(err < 1e-6 * std::max(1.0, std::abs(f.m1))))
    throw ComputeError("floquet_entries: step-halving disagreement");
  return f;
}

std::vector<int> SpectralTable::open_gaps() const {
  std::vector<int> out;
  for (int n = 1; n <= n_max; ++n)
    if (!closed(n)) out.push_back(n);
  return out;
}

SpectralTable spectral_table(const Potential& q, int n_max, ExecMode mode,
                             const SpectralTable* hints) {
  if (n_max < 1) throw std::invalid_argument("spectral_table: n_max >= 1 required");
  const double C = 2.0 * q.l2_norm() + 10.0;

  SpectralTable t;
  t.n_max = n_max;
  t.lam_minus.assign(n_max, 0); t.lam_plus.assign(n_max, 0);
  t.mu.assign(n_max, 0); t.nu.assign(n_max, 0); t.lam_dot.assign(n_max, 0);
  t.tau.assign(n_max, 0); t.gamma.assign(n_max, 0);
  t.resolution.assign(n_max, 0);

  {
    HillEval ev(q);
    auto Delta_c = [&](double l) { return ev.cheap(l).Delta.real(); };
    auto D2_acc = [&](double l) {
      auto e = ev.accurate(l, VarLevel::first);
      return std::make_pair(e.Delta.real() - 2.0, e.Delta_dot.real());
    };
    double lo = -C - 10.0;
    int guard = 0;
    while (Delta_c(lo) <= 2.0 && guard++ < 8) lo = 2.0 * lo - 10.0;
    if (Delta_c(lo) <= 2.0) throw ComputeError("spectral_table: no lower bound for lambda_0^+");
    t.lam0 = nearest_root(ev, [&](double l) { return Delta_c(l) - 2.0; }, D2_acc,
                          lo, kPi * kPi + C, 0.0, 64, "lambda_0^+", 0);
    auto m1p_c = [&](double l) { return ev.cheap(l).m1p.real(); };
    auto m1p_acc = [&](double l) {
      auto e = ev.accurate(l, VarLevel::first);
      return std::make_pair(e.m1p.real(), e.m1p_dot.real());
    };
    t.nu0 = nearest_root(ev, m1p_c, m1p_acc, lo, t.lam0 + 1.0, t.lam0, 64, "nu_0", 0);
  }

  std::vector<std::string> errors(n_max);
  parallel_for(n_max, mode, [&](int i) {
    int n = i + 1;
    try {
      HillEval ev(q);
      double c = sqr(n * kPi);
      double lo = c - C, hi = c + C;
      double sgn = (n % 2 == 0) ? 1.0 : -1.0;

      auto Ddot_c = [&](double l) { return ev.cheap(l, VarLevel::first).Delta_dot.real(); };
      auto Ddot_acc = [&](double l) {
        auto e = ev.accurate8(l);
        return std::make_pair(e.Delta_dot.real(), e.Delta_ddot.real());
      };

      // critical point of Delta in gap n
      double ld = 0;
      bool have_ld = false;
      if (hints && hints->n_max >= n) {
        ld = hints->lam_dot[n - 1];
        for (int it = 0; it < 12; ++it) {
          auto [f, df] = Ddot_acc(ld);
          if (df == 0) break;
          double step = f / df;
          ld -= step;
          if (std::abs(step) < 1e-12 * std::max(1.0, std::abs(ld))) { have_ld = true; break; }
        }
        have_ld = have_ld && ld > lo && ld < hi;
      }
      if (!have_ld) ld = nearest_root(ev, Ddot_c, Ddot_acc, lo, hi, c, 24, "lam_dot", n);
      t.lam_dot[n - 1] = ld;

      double derr = 0;
      auto ed = ev.accurate8(ld, VarLevel::second, &derr);
      double h = sgn * ed.Delta.real() - 2.0;
      double dd = std::abs(ed.Delta_ddot.real());
      double gam_est = std::sqrt(8.0 * std::max(h, 0.0) / std::max(dd, 1e-300));
      // a gap below the integrator's resolving power cannot be distinguished
      // from a closed one: fold the measured step-halving spread into the
      // closed-gap threshold
      double gam_floor = std::sqrt(8.0 * std::max(derr, 1e-300) / std::max(dd, 1e-300));
      double resolvable = std::max(t.tol_gap(n), 4.0 * gam_floor);
      t.resolution[n - 1] = resolvable;
      if (gam_est < resolvable) {
        t.lam_minus[n - 1] = t.lam_plus[n - 1] = ld;
        t.gamma[n - 1] = 0.0;
      } else {
        // nearly closed gaps sit within the single-pass integrator noise, so
        // the edge solves use extrapolated evaluations throughout
        auto g_acc = [&](double l) {
          auto e = ev.accurate8(l, VarLevel::first);
          return std::make_pair(sgn * e.Delta.real() - 2.0, sgn * e.Delta_dot.real());
        };
        auto g_a = [&](double l) { return g_acc(l).first; };
        double step0 = std::max(gam_est, 1e-6 * std::max(1.0, c));
        double a = ld - step0;
        int guard = 0;
        while (g_a(a) >= 0 && guard++ < 60) { step0 *= 2.0; a = ld - step0; }
        if (g_a(a) >= 0)
          throw ComputeError("spectral_table: bracketing failure for lam_minus at n=" +
                             std::to_string(n));
        t.lam_minus[n - 1] = refine_root(ev, g_a, a, ld, g_a(a), g_acc);
        step0 = std::max(gam_est, 1e-6 * std::max(1.0, c));
        double b = ld + step0;
        guard = 0;
        while (g_a(b) >= 0 && guard++ < 60) { step0 *= 2.0; b = ld + step0; }
        if (g_a(b) >= 0)
          throw ComputeError("spectral_table: bracketing failure for lam_plus at n=" +
                             std::to_string(n));
        t.lam_plus[n - 1] = refine_root(ev, g_a, ld, b, h, g_acc);
        t.gamma[n - 1] = t.lam_plus[n - 1] - t.lam_minus[n - 1];
        if (t.gamma[n - 1] < resolvable) {  // edges collapsed into the noise floor
          t.lam_minus[n - 1] = t.lam_plus[n - 1] = ld;
          t.gamma[n - 1] = 0.0;
        }
      }
      t.tau[n - 1] = 0.5 * (t.lam_minus[n - 1] + t.lam_plus[n - 1]);

      auto newton_warm = [&](double start, auto f_df) {
        double x = start;
        for (int it = 0; it < 12; ++it) {
          auto [f, df] = f_df(x);
          if (df == 0) return std::make_pair(x, false);
          double step = f / df;
          x -= step;
          if (std::abs(step) < 1e-12 * std::max(1.0, std::abs(x)))
            return std::make_pair(x, x > lo && x < hi);
        }
        return std::make_pair(x, false);
      };
      auto m2_c = [&](double l) { return ev.cheap(l).m2.real(); };
      auto m2_acc = [&](double l) {
        auto e = ev.accurate(l, VarLevel::first);
        return std::make_pair(e.m2.real(), e.m2_dot.real());
      };
      auto m1p_c = [&](double l) { return ev.cheap(l).m1p.real(); };
      auto m1p_acc = [&](double l) {
        auto e = ev.accurate(l, VarLevel::first);
        return std::make_pair(e.m1p.real(), e.m1p_dot.real());
      };
      bool warm_ok = false;
      if (hints && hints->n_max >= n) {
        auto [mu, ok] = newton_warm(hints->mu[n - 1], m2_acc);
        if (ok) { t.mu[n - 1] = mu; warm_ok = true; }
      }
      if (!warm_ok) t.mu[n - 1] = nearest_root(ev, m2_c, m2_acc, lo, hi, c, 24, "mu", n);
      warm_ok = false;
      if (hints && hints->n_max >= n) {
        auto [nu, ok] = newton_warm(hints->nu[n - 1], m1p_acc);
        if (ok) { t.nu[n - 1] = nu; warm_ok = true; }
      }
      if (!warm_ok) t.nu[n - 1] = nearest_root(ev, m1p_c, m1p_acc, lo, hi, c, 24, "nu", n);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& msg : errors)
    if (!msg.empty()) throw ComputeError(msg);

  auto check_in = [&](double v, double a, double b, int n, const char* w) {
    // gaps below the resolving power are reported as points; mu, nu, lam_dot
    // may legitimately sit anywhere inside the unresolved interval
    double tol = std::max(1e-7 * std::max(1.0, sqr(double(n))), 2.0 * t.resolution[n - 1]);
    if (v < a - tol || v > b + tol)
      throw ComputeError(std::string("spectral_table: ordering violation for ") + w +
                         " at n=" + std::to_string(n) + ": " + std::to_string(v) +
                         " outside [" + std::to_string(a) + ", " + std::to_string(b) +
                         "] (integrator inaccuracy?)");
  };
  if (t.nu0 > t.lam0 + 1e-7) throw ComputeError("spectral_table: nu_0 above lambda_0^+");
  double prev = t.lam0;
  for (int n = 1; n <= n_max; ++n) {
    if (t.lam_minus[n - 1] <= prev)
      throw ComputeError("spectral_table: band ordering violation at n=" + std::to_string(n));
    check_in(t.mu[n - 1], t.lam_minus[n - 1], t.lam_plus[n - 1], n, "mu");
    check_in(t.nu[n - 1], t.lam_minus[n - 1], t.lam_plus[n - 1], n, "nu");
    check_in(t.lam_dot[n - 1], t.lam_minus[n - 1], t.lam_plus[n - 1], n, "lam_dot");
    prev = t.lam_plus[n - 1];
  }
  return t;
}

// ---------------------------------------------------------------------------
// Product representations with analytic q = 0 tail
// ---------------------------------------------------------------------------
namespace {

/// Product over n > T of (n^2 pi^2 - lambda)/(n^2 pi^2): explicit factors up
/// to M, Euler-Maclaurin log-tail beyond.
cplx tail_S(cplx lambda, int T) {
  int M = T + 64 + 2 * static_cast<int>(std::ceil(std::sqrt(std::abs(lambda)) / kPi));
  cplx logp{0.0, 0.0};
  for (int n = T + 1; n <= M; ++n) logp += std::log(1.0 - lambda / sqr(n * kPi));
  cplx z = lambda / (kPi * kPi);
  cplx zk = z;
  for (int k = 1; k <= 40; ++k) {
    double Md = M;
    double S = 1.0 / ((2 * k - 1) * std::pow(Md, 2 * k - 1)) - 0.5 / std::pow(Md, 2 * k) +
               (2 * k) / (12.0 * std::pow(Md, 2 * k + 1));
    logp -= zk / double(k) * S;
    if (std::abs(zk) * S < 1e-18) break;
    zk *= z;
  }
  return std::exp(logp);
}

}  // namespace

cplx product_representation_eval(const SpectralTable& t, ProductKind which,
                                 cplx lambda, int n_trunc) {
  if (n_trunc > t.n_max)
    throw std::invalid_argument("product_representation_eval: n_trunc exceeds table");
  int T = n_trunc;
  cplx ts = tail_S(lambda, T);
  switch (which) {
    case ProductKind::m2: {
      cplx p{1.0, 0.0};
      for (int n = 1; n <= T; ++n) p *= (t.mu[n - 1] - lambda) / sqr(n * kPi);
      return p * ts;
    }
    case ProductKind::delta_dot: {
      cplx p{1.0, 0.0};
      for (int n = 1; n <= T; ++n) p *= (t.lam_dot[n - 1] - lambda) / sqr(n * kPi);
      return -p * ts;
    }
    case ProductKind::m1p: {
      cplx p = (t.nu0 - lambda);
      for (int n = 1; n <= T; ++n) p *= (t.nu[n - 1] - lambda) / sqr(n * kPi);
      return p * ts;
    }
    case ProductKind::delta_sq_minus_4: {
      cplx p = 4.0 * (t.lam0 - lambda);
      for (int n = 1; n <= T; ++n)
        p *= (t.lam_plus[n - 1] - lambda) * (t.lam_minus[n - 1] - lambda) / sqr(sqr(n * kPi));
      return p * ts * ts;
    }
  }
  throw std::invalid_argument("product_representation_eval: unknown kind");
}

struct HillEvaluator::Impl {
  explicit Impl(const Potential& q) : ev(q) {}
  HillEval ev;
};

HillEvaluator::HillEvaluator(const Potential& q) : impl_(std::make_unique<Impl>(q)) {}
HillEvaluator::~HillEvaluator() = default;

FloquetEntries HillEvaluator::entries(cplx lambda) const {
  return impl_->ev.accurate8(lambda);
}
FloquetEntries HillEvaluator::entries_fast(cplx lambda) const {
  return impl_->ev.accurate(lambda);
}

std::string spectral_table_to_json(const SpectralTable& t) {
  nlohmann::ordered_json j;
  j["n_max"] = t.n_max;
  j["lam0"] = t.lam0;
  j["nu0"] = t.nu0;
  j["lam_minus"] = t.lam_minus;
  j["lam_plus"] = t.lam_plus;
  j["mu"] = t.mu;
  j["nu"] = t.nu;
  j["lam_dot"] = t.lam_dot;
  j["tau"] = t.tau;
  j["gamma"] = t.gamma;
  return j.dump();
}

std::string spectral_table_to_csv(const SpectralTable& t) {
  std::ostringstream os;
  os.precision(16);
  os << "n,lam_minus,lam_plus,mu,nu,lam_dot,tau,gamma\n";
  for (int n = 1; n <= t.n_max; ++n)
    os << n << ',' << t.lam_minus[n - 1] << ',' << t.lam_plus[n - 1] << ',' << t.mu[n - 1]
       << ',' << t.nu[n - 1] << ',' << t.lam_dot[n - 1] << ',' << t.tau[n - 1] << ','
       << t.gamma[n - 1] << '\n';
  return os.str();
}

}  // namespace kdvnf
