#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdvnf {

using cplx = std::complex<double>;
using std::size_t;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline const cplx kI{0.0, 1.0};

/// Thrown when a computation fails in a way the caller can report
/// (bracketing failure, non-convergence, inconsistent input tables).
class ComputeError : public std::runtime_error {
 public:
  explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

enum class ExecMode { serial, parallel };

/// Runs body(i) for i in [0, n); OpenMP when mode == parallel.
/// Bodies must write to disjoint slots so both modes agree bitwise.
template <class F>
void parallel_for(int n, ExecMode mode, F&& body) {
  if (mode == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) body(i);
  } else {
    for (int i = 0; i < n; ++i) body(i);
  }
}

/// Least-squares slope of log|y| against log x. Points with |y| <= floor are skipped.
struct SlopeFit {
  double slope = 0.0;
  double ratio_max_min = 1.0;  // max|y| / min|y| over the used points
  double sup = 0.0;            // max|y|
  int used = 0;
};

inline SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                           double floor = 1e-300) {
  SlopeFit out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double lo = 1e300;
  for (size_t i = 0; i < xs.size(); ++i) {
    double a = std::abs(ys[i]);
    if (!(a > floor)) continue;
    double lx = std::log(xs[i]), ly = std::log(a);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    out.sup = std::max(out.sup, a);
    lo = std::min(lo, a);
    ++out.used;
  }
  if (out.used >= 2) {
    double denom = out.used * sxx - sx * sx;
    out.slope = denom != 0 ? (out.used * sxy - sx * sy) / denom : 0.0;
    out.ratio_max_min = out.sup / lo;
  }
  return out;
}

inline double sqr(double x) { return x * x; }

}  // namespace kdvnf
