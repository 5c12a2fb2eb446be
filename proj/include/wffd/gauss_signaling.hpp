#pragma once

#include "wffd/fading.hpp"

namespace wffd::gauss {

// Correlation triple (rho_XS, rho_US, rho_UX) on the jointly Gaussian
// signaling manifold rho_UX^2 = 1 - (rho_XS - rho_US)^2, all |rho| < 1.
struct RhoPoint {
  double rho_xs = 0.0;
  double rho_us = 0.0;
  double rho_ux = 0.0;

  double manifold_residual() const;  // |1 + 2 xs us - xs^2 - us^2 - ux^2|
};

// Lifts a (rho_XS, rho_US) pair onto the manifold; sign selects the root.
RhoPoint rho_from_pair(double rho_xs, double rho_us, int sign);

// Conditional jointly Gaussian rate at fading realization theta. May be
// negative; returns -inf when a log argument is nonpositive.
double r_gamma(const RhoPoint& rho, double theta, double P, double c);

// E_theta[R_Gamma(rho, theta)] for theta ~ N(0,1) via Gauss-Hermite.
double expected_r_gamma(const RhoPoint& rho, double P, double c,
                        int quad_order = 48);

struct ExpectedRate {
  double value = 0.0;
  bool quad_warning = false;  // order-doubling check disagreed
};
ExpectedRate expected_r_gamma_checked(const RhoPoint& rho, double P, double c,
                                      int quad_order = 48);

struct OptimizeResult {
  RhoPoint rho;
  double rate = 0.0;  // clamped to >= 0
};

// Deterministic coarse grid (step 0.02 over (rho_XS, rho_US), both rho_UX
// signs) followed by compass pattern search down to step 1e-5.
OptimizeResult optimize_rho(double P, double c, int quad_order = 48);

}  // namespace wffd::gauss
