#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "kdvnf/potential.hpp"

namespace kdvnf {

/// Fundamental solutions y1, y2 of -y'' + q y = lambda y with
/// y1(0)=1, y1'(0)=0, y2(0)=0, y2'(0)=1, integrated by fixed-step RK4
/// together with the first and second variational systems in lambda
/// (forcing -y and -2 d_lambda y).
struct FundamentalPair {
  cplx lambda;
  std::vector<cplx> y1, dy1, y2, dy2;  // values on x_i = i/grid, i = 0..grid
  // lambda-derivatives of the endpoint data y_j(1), y_j'(1)
  cplx v1, dv1, v2, dv2;     // d/dlambda
  cplx w1, dw1, w2, dw2;     // d^2/dlambda^2
  double err_estimate = 0;   // Richardson step-halving estimate (endpoint)
};

struct FloquetEntries {
  cplx m1, m2, m1p, m2p;     // Floquet matrix entries m_j = y_j(1), m_j' = y_j'(1)
  cplx Delta, delta;         // trace and anti-trace
  cplx Delta_dot, Delta_ddot;
  cplx m1_dot, m2_dot, m1p_dot, m2p_dot;
};

struct SpectralTable {
  int n_max = 0;
  double lam0 = 0;                     // lambda_0^+
  double nu0 = 0;                      // lowest Neumann eigenvalue
  std::vector<double> lam_minus, lam_plus;  // [n-1] for n = 1..n_max
  std::vector<double> mu, nu, lam_dot;
  std::vector<double> tau, gamma;
  std::vector<double> resolution;  // per-index gap-length resolving power

  double tol_gap(int n) const { return 1e-8 * std::max(1.0, double(n) * double(n)); }
  bool closed(int n) const { return gamma[n - 1] < tol_gap(n); }
  /// Indices n in [1, n_max] with gamma_n above the closed-gap tolerance.
  std::vector<int> open_gaps() const;
};

/// Integrates the 12-dimensional system (y1, y2 and their first/second
/// lambda-variations).  When store_grid is true the y values are kept on
/// q.grid points; with check enabled a halved-step pass provides the
/// Richardson error estimate and throws on disagreement.
FundamentalPair fundamental_solutions(const Potential& q, cplx lambda,
                                      bool store_grid = true, bool check = true);

FloquetEntries floquet_entries(const Potential& q, cplx lambda, bool check = false);

/// Reusable evaluation engine for lambda sweeps over a fixed potential; the
/// sampled-q node tables are cached across calls (thread-safe).
class HillEvaluator {
 public:
  explicit HillEvaluator(const Potential& q);
  ~HillEvaluator();
  HillEvaluator(const HillEvaluator&) = delete;
  HillEvaluator& operator=(const HillEvaluator&) = delete;
  FloquetEntries entries(cplx lambda) const;       // two Richardson levels
  FloquetEntries entries_fast(cplx lambda) const;  // one Richardson level

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// All eigenvalue families up to n_max.  hints, when given, provides Newton
/// starting points from a previous table (warm restart for nearby potentials).
SpectralTable spectral_table(const Potential& q, int n_max,
                             ExecMode mode = ExecMode::parallel,
                             const SpectralTable* hints = nullptr);

enum class ProductKind { delta_sq_minus_4, delta_dot, m2, m1p };

/// Truncated product representation with the q=0 tail beyond n_trunc folded
/// in analytically.
cplx product_representation_eval(const SpectralTable& table, ProductKind which,
                                 cplx lambda, int n_trunc);

// Serialization per the table's external interface.
std::string spectral_table_to_json(const SpectralTable& t);
std::string spectral_table_to_csv(const SpectralTable& t);

}  // namespace kdvnf
