// Test-side oracles, deliberately independent of the library's numerics:
// a plain adaptive Simpson integrator, brute-force moment sums, and a
// Blahut-Arimoto solver for discrete memoryless channel capacity.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate_simpson(const std::function<double(double)>& f,
                                double a, double b, double tol = 1e-11) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

struct MomentSums {
  double mean = 0.0, second = 0.0, variance = 0.0;
};

inline MomentSums discrete_moments(const std::vector<double>& values,
                                   const std::vector<double>& probs) {
  MomentSums m;
  for (std::size_t i = 0; i < values.size(); ++i) {
    m.mean += probs[i] * values[i];
    m.second += probs[i] * values[i] * values[i];
  }
  m.variance = m.second - m.mean * m.mean;
  return m;
}

// Blahut-Arimoto for max_{p(x)} I(X;Y) on a row-stochastic matrix
// w[x][y]; returns capacity in bits.
inline double blahut_arimoto(const std::vector<std::vector<double>>& w,
                             int iters = 2000) {
  const std::size_t nx = w.size(), ny = w[0].size();
  std::vector<double> px(nx, 1.0 / nx), py(ny), d(nx);
  double cap = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::fill(py.begin(), py.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) py[y] += px[x] * w[x][y];
    double z = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      double acc = 0.0;
      for (std::size_t y = 0; y < ny; ++y)
        if (w[x][y] > 0.0 && py[y] > 0.0)
          acc += w[x][y] * std::log2(w[x][y] / py[y]);
      d[x] = std::exp2(acc);
      z += px[x] * d[x];
    }
    cap = std::log2(z);
    for (std::size_t x = 0; x < nx; ++x) px[x] *= d[x] / z;
  }
  return cap;
}

}  // namespace oracle
