#include "kdvnf/potential.hpp"

#include <algorithm>

#include "json.hpp"

namespace kdvnf {

double Potential::l2_norm() const {
  double s = 0;
  for (const cplx& v : c) s += std::norm(v);
  return std::sqrt(s);
}

namespace {
int grid_for_band(int n_pot) {
  int g = 128;
  while (g < 4 * n_pot) g *= 2;
  return g;
}
}  // namespace

Potential make_trig_potential(const std::vector<std::pair<int, cplx>>& coeffs) {
  int band = 0;
  for (const auto& [n, v] : coeffs) band = std::max(band, std::abs(n));
  Potential q;
  q.n_pot = std::max(band, 1);
  q.c.assign(2 * q.n_pot + 1, cplx{0.0, 0.0});
  for (const auto& [n, v] : coeffs) {
    if (n == 0 && std::abs(v) > 0)
      throw std::invalid_argument("make_trig_potential: nonzero mean requested");
    if (n != 0) q.c[n + q.n_pot] += v;
  }
  double scale = 0;
  for (const cplx& v : q.c) scale = std::max(scale, std::abs(v));
  for (int n = 1; n <= q.n_pot; ++n) {
    if (std::abs(q.c[q.n_pot + n] - std::conj(q.c[q.n_pot - n])) > 1e-12 * std::max(scale, 1.0))
      throw std::invalid_argument(
          "make_trig_potential: coefficients not Hermitian (complex-valued potential)");
  }
  q.grid = grid_for_band(q.n_pot);
  return q;
}

// ---------------------------------------------------------------------------
// AGM ladder for sn, K, E
// ---------------------------------------------------------------------------
namespace {
struct AgmLadder {
  std::vector<double> a, b, cc;
};
AgmLadder agm(double k) {
  AgmLadder L;
  double a = 1.0, b = std::sqrt(1.0 - k * k), c = k;
  L.a.push_back(a); L.b.push_back(b); L.cc.push_back(c);
  while (std::abs(c) > 1e-14) {
    double an = 0.5 * (a + b);
    double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an; b = bn;
    L.a.push_back(a); L.b.push_back(b); L.cc.push_back(c);
    if (L.a.size() > 64) break;
  }
  return L;
}
}  // namespace

double elliptic_K(double k) {
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("elliptic_K: modulus out of (0,1)");
  AgmLadder L = agm(k);
  return kPi / (2.0 * L.a.back());
}

double elliptic_E(double k) {
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("elliptic_E: modulus out of (0,1)");
  AgmLadder L = agm(k);
  double s = 0;
  for (size_t i = 0; i < L.cc.size(); ++i) s += std::ldexp(L.cc[i] * L.cc[i], int(i) - 1);
  return elliptic_K(k) * (1.0 - s);
}

double jacobi_sn(double u, double k) {
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("jacobi_sn: modulus out of (0,1)");
  AgmLadder L = agm(k);
  int n = static_cast<int>(L.a.size()) - 1;
  double phi = std::ldexp(L.a[n] * u, n);
  for (int i = n; i >= 1; --i) {
    double s = L.cc[i] / L.a[i] * std::sin(phi);
    s = std::clamp(s, -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(s));
  }
  return std::sin(phi);
}

LamePotential make_lame_one_gap(double modulus) {
  if (!(modulus > 0.0 && modulus < 1.0))
    throw std::invalid_argument("make_lame_one_gap: modulus must lie in (0,1)");
  LamePotential out;
  out.modulus = modulus;
  out.K = elliptic_K(modulus);
  out.E = elliptic_E(modulus);
  const int N = 4096;
  out.samples = N;
  double amp = 2.0 * sqr(2.0 * out.K * modulus);
  std::vector<cplx> samples(N);
  double mean = 0;
  for (int i = 0; i < N; ++i) {
    double v = amp * sqr(jacobi_sn(2.0 * out.K * i / N, modulus));
    samples[i] = v;
    mean += v;
  }
  mean /= N;
  for (cplx& v : samples) v -= mean;
  auto bins = dft_forward(samples);
  // band limit where coefficients fall below machine noise
  double top = 0;
  for (const cplx& v : bins) top = std::max(top, std::abs(v));
  int band = 1;
  for (int n = 1; n <= N / 4; ++n) {
    if (std::abs(bins[n]) > 1e-15 * top) band = n;
  }
  band = std::max(band, 4);
  Potential& q = out.q;
  q.n_pot = band;
  q.c.assign(2 * band + 1, cplx{0.0, 0.0});
  for (int n = 1; n <= band; ++n) {
    cplx v = 0.5 * (bins[n] + std::conj(bins[N - n]));  // enforce Hermitian symmetry
    q.c[band + n] = v;
    q.c[band - n] = std::conj(v);
  }
  q.grid = grid_for_band(band);
  return out;
}

Potential reverse_potential(const Potential& q) {
  Potential out = q;
  for (int n = -q.n_pot; n <= q.n_pot; ++n) out.c[n + q.n_pot] = q.coeff(-n);
  return out;
}

Potential translate_potential(const Potential& q, double s) {
  // coefficients pick up e^{2 pi i n s}: realizes q(x + s)
  Potential out = q;
  for (int n = -q.n_pot; n <= q.n_pot; ++n)
    out.c[n + q.n_pot] = q.coeff(n) * std::exp(cplx{0.0, 2.0 * kPi * n * s});
  return out;
}

double eval_potential(const Potential& q, double x) {
  return q.as_fn().eval(x).real();
}

double eval_derivative(const Potential& q, double x, int order) {
  // spectral differentiation; sensible up to order ~ log(1/eps)/log(2 pi n_pot)
  // amplification, which callers should respect (order <= 8 is plenty here)
  return fn_dx(q.as_fn(), order).eval(x).real();
}

double hkdv(const Potential& q) {
  Fn f = q.as_fn();
  double h2 = 0;
  for (int n = 1; n <= q.n_pot; ++n) h2 += sqr(2.0 * kPi * n) * std::norm(q.coeff(n));
  Fn q3 = fn_mul(fn_mul(f, f), f);
  return h2 + q3.coeff(0).real();  // 1/2 * 2*sum |2pi n q_n|^2 + mean of q^3
}

std::string potential_to_json(const Potential& q) {
  nlohmann::ordered_json j;
  j["n_pot"] = q.n_pot;
  auto arr = nlohmann::ordered_json::array();
  for (int n = -q.n_pot; n <= q.n_pot; ++n) {
    if (n == 0 || q.coeff(n) == cplx{0.0, 0.0}) continue;
    arr.push_back({n, q.coeff(n).real(), q.coeff(n).imag()});
  }
  j["coeffs"] = arr;
  return j.dump();
}

Potential potential_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  std::vector<std::pair<int, cplx>> coeffs;
  for (const auto& e : j.at("coeffs"))
    coeffs.emplace_back(e.at(0).get<int>(), cplx{e.at(1).get<double>(), e.at(2).get<double>()});
  Potential q = make_trig_potential(coeffs);
  if (j.contains("n_pot")) {
    int band = std::max<int>(j["n_pot"].get<int>(), q.n_pot);
    Potential r;
    r.n_pot = band;
    r.c.assign(2 * band + 1, cplx{0.0, 0.0});
    for (int n = -q.n_pot; n <= q.n_pot; ++n) r.c[n + band] = q.coeff(n);
    r.grid = q.grid;
    while (r.grid < 4 * band) r.grid *= 2;
    return r;
  }
  return q;
}

}  // namespace kdvnf
