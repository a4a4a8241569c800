#include "kdvnf/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace kdvnf {

cplx Fn::eval(double x) const {
  // Horner in z = e^{2 pi i x} over n = -band..band
  cplx z = std::exp(cplx{0.0, 2.0 * kPi * x});
  cplx acc{0.0, 0.0};
  for (int i = 2 * band; i >= 0; --i) acc = acc * z + c[i];
  return acc * std::exp(cplx{0.0, -2.0 * kPi * band * x});
}

bool Fn::is_hermitian(double tol) const {
  double scale = 0;
  for (const cplx& v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0) return true;
  for (int n = 0; n <= band; ++n)
    if (std::abs(coeff(-n) - std::conj(coeff(n))) > tol * scale) return false;
  return true;
}

Fn fn_resize(const Fn& f, int band) {
  Fn out(band);
  int m = std::min(band, f.band);
  for (int n = -m; n <= m; ++n) out.at(n) = f.coeff(n);
  return out;
}

Fn fn_add(const Fn& a, const Fn& b) {
  Fn out(std::max(a.band, b.band));
  for (int n = -out.band; n <= out.band; ++n) out.at(n) = a.coeff(n) + b.coeff(n);
  return out;
}

Fn fn_scale(const Fn& a, cplx s) {
  Fn out = a;
  for (cplx& v : out.c) v *= s;
  return out;
}

Fn fn_mul(const Fn& a, const Fn& b) {
  Fn out(a.band + b.band);
  for (int i = -a.band; i <= a.band; ++i) {
    cplx ai = a.coeff(i);
    if (ai == cplx{0.0, 0.0}) continue;
    for (int j = -b.band; j <= b.band; ++j) out.at(i + j) += ai * b.coeff(j);
  }
  return out;
}

Fn fn_dx(const Fn& a, int order) {
  Fn out(a.band);
  for (int n = -a.band; n <= a.band; ++n)
    out.at(n) = a.coeff(n) * std::pow(cplx{0.0, 2.0 * kPi * n}, order);
  return out;
}

Fn fn_dx_inv(const Fn& a, int k) {
  Fn out(a.band);
  for (int n = -a.band; n <= a.band; ++n) {
    if (n == 0) continue;
    out.at(n) = a.coeff(n) / std::pow(cplx{0.0, 2.0 * kPi * n}, k);
  }
  return out;
}

Fn fn_reflect(const Fn& a) {
  Fn out(a.band);
  for (int n = -a.band; n <= a.band; ++n) out.at(n) = a.coeff(-n);
  return out;
}

Fn fn_conj(const Fn& a) {
  Fn out(a.band);
  for (int n = -a.band; n <= a.band; ++n) out.at(n) = std::conj(a.coeff(-n));
  return out;
}

cplx fn_mean(const Fn& a) { return a.coeff(0); }

cplx fn_pair(const Fn& a, const Fn& b) {
  cplx s{0.0, 0.0};
  int m = std::min(a.band, b.band);
  for (int n = -m; n <= m; ++n) s += a.coeff(n) * b.coeff(-n);
  return s;
}

double fn_norm_hs(const Fn& a, double s) {
  double acc = 0;
  for (int n = -a.band; n <= a.band; ++n)
    acc += std::pow(std::max(1.0, std::abs(static_cast<double>(n))), 2 * s) * std::norm(a.coeff(n));
  return std::sqrt(acc);
}

double fn_sup(const Fn& a, int samples) {
  auto g = grid_from_fn(a, samples);
  double m = 0;
  for (const cplx& v : g) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// FFTW plan cache.  Plans are created once per size with FFTW_UNALIGNED so
// they can be executed on caller-owned buffers; fftw_execute_dft on distinct
// buffers is thread-safe, only plan creation is guarded.
// ---------------------------------------------------------------------------
namespace {
struct PlanPair {
  fftw_plan fwd = nullptr, bwd = nullptr;
};
std::mutex g_plan_mutex;
PlanPair get_plans(int n) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  static std::map<int, PlanPair> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  PlanPair p;
  p.fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(n, p);
  return p;
}
}  // namespace

std::vector<cplx> dft_forward(const std::vector<cplx>& grid) {
  int n = static_cast<int>(grid.size());
  std::vector<cplx> out = grid;
  PlanPair p = get_plans(n);
  auto* buf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(p.fwd, buf, buf);
  for (cplx& v : out) v /= static_cast<double>(n);
  return out;
}

std::vector<cplx> dft_backward(const std::vector<cplx>& coeffs) {
  int n = static_cast<int>(coeffs.size());
  std::vector<cplx> out = coeffs;
  PlanPair p = get_plans(n);
  auto* buf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(p.bwd, buf, buf);
  return out;
}

std::vector<cplx> grid_from_fn(const Fn& f, int N) {
  if (2 * f.band + 1 > N)
    throw ComputeError("grid_from_fn: grid too small for band " + std::to_string(f.band));
  std::vector<cplx> bins(N, cplx{0.0, 0.0});
  for (int n = -f.band; n <= f.band; ++n) bins[(n % N + N) % N] = f.coeff(n);
  return dft_backward(bins);
}

Fn fn_from_grid(const std::vector<cplx>& grid, int band) {
  int N = static_cast<int>(grid.size());
  if (2 * band + 1 > N)
    throw ComputeError("fn_from_grid: band exceeds grid resolution");
  auto bins = dft_forward(grid);
  Fn out(band);
  for (int n = -band; n <= band; ++n) out.at(n) = bins[(n % N + N) % N];
  return out;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes by Newton iteration on P_n
// ---------------------------------------------------------------------------
GaussLegendre::GaussLegendre(int n) : x(n), w(n) {
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = xi;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

const GaussLegendre& gl_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// PolyTrig
// ---------------------------------------------------------------------------
PolyTrig::PolyTrig(int degree, int band) : band_(band), rows_(degree + 1, Fn(band)) {}

PolyTrig PolyTrig::one(int band) {
  PolyTrig p(0, band);
  p.rows_[0].at(0) = cplx{1.0, 0.0};
  return p;
}

PolyTrig PolyTrig::from_fn(const Fn& f) {
  PolyTrig p(0, f.band);
  p.rows_[0] = f;
  return p;
}

cplx PolyTrig::eval(double x) const {
  cplx acc{0.0, 0.0};
  double xp = 1.0;
  for (const Fn& r : rows_) {
    acc += xp * r.eval(x);
    xp *= x;
  }
  return acc;
}

PolyTrig PolyTrig::dx() const {
  PolyTrig out(degree(), band_);
  for (int j = 0; j <= degree(); ++j) {
    out.rows_[j] = fn_add(out.rows_[j], fn_resize(fn_dx(rows_[j]), band_));
    if (j + 1 <= degree())
      out.rows_[j] = fn_add(out.rows_[j], fn_scale(rows_[j + 1], cplx{double(j + 1), 0.0}));
  }
  out.band_ = out.rows_[0].band;
  return out;
}

PolyTrig PolyTrig::integral0x() const {
  // antiderivative of x^j e^{2 pi i n x}: by parts for n != 0, power rule for n = 0
  int J = degree();
  PolyTrig out(J + 1, band_);
  for (int j = 0; j <= J; ++j) {
    for (int n = -band_; n <= band_; ++n) {
      cplx a = rows_[j].coeff(n);
      if (a == cplx{0.0, 0.0}) continue;
      if (n == 0) {
        out.rows_[j + 1].at(0) += a / double(j + 1);
      } else {
        // int x^j e^{ax} = e^{ax} sum_{m<=j} (-1)^{j-m} (j!/m!) x^m / a^{j-m+1}
        cplx inv = 1.0 / cplx{0.0, 2.0 * kPi * n};
        cplx term = a * inv;
        for (int m = j; m >= 0; --m) {
          out.rows_[m].at(n) += term;
          term *= -inv * double(m);
        }
      }
    }
  }
  // enforce F(0) = 0
  cplx f0 = out.eval(0.0);
  out.rows_[0].at(0) -= f0;
  return out;
}

PolyTrig PolyTrig::mul_fn(const Fn& f) const {
  PolyTrig out(degree(), band_ + f.band);
  for (int j = 0; j <= degree(); ++j) out.rows_[j] = fn_mul(rows_[j], f);
  out.band_ = band_ + f.band;
  return out;
}

PolyTrig PolyTrig::add(const PolyTrig& other) const {
  int J = std::max(degree(), other.degree());
  int B = std::max(band_, other.band_);
  PolyTrig out(J, B);
  for (int j = 0; j <= J; ++j) {
    Fn r(B);
    if (j <= degree()) r = fn_add(r, rows_[j]);
    if (j <= other.degree()) r = fn_add(r, other.rows_[j]);
    out.rows_[j] = fn_resize(r, B);
  }
  return out;
}

PolyTrig PolyTrig::scale(cplx s) const {
  PolyTrig out = *this;
  for (Fn& r : out.rows_) r = fn_scale(r, s);
  return out;
}

}  // namespace kdvnf
