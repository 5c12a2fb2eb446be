#include "wffd/gauss_signaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wffd/numerics.hpp"

namespace wffd::gauss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRadicandMin = 1e-6;
constexpr double kRadicandMax = 1.0 - 1e-6;

}  // namespace

double RhoPoint::manifold_residual() const {
  return std::abs(1.0 + 2.0 * rho_xs * rho_us - rho_xs * rho_xs -
                  rho_us * rho_us - rho_ux * rho_ux);
}

RhoPoint rho_from_pair(double rho_xs, double rho_us, int sign) {
  if (!(std::abs(rho_xs) < 1.0 && std::abs(rho_us) < 1.0))
    throw std::domain_error("rho_from_pair: |rho| must be < 1");
  const double d = rho_xs - rho_us;
  const double radicand = 1.0 - d * d;
  if (!(radicand > 0.0 && radicand < 1.0))
    throw std::domain_error(
        "rho_from_pair: off-manifold pair (radicand = " +
        std::to_string(radicand) + " outside (0,1))");
  RhoPoint rho;
  rho.rho_xs = rho_xs;
  rho.rho_us = rho_us;
  rho.rho_ux = (sign >= 0 ? 1.0 : -1.0) * std::sqrt(radicand);
  return rho;
}

double r_gamma(const RhoPoint& rho, double theta, double P, double c) {
  if (!(P >= 0.0)) throw std::domain_error("r_gamma: P must be >= 0");
  const double sp = std::sqrt(P);
  const double num = (P + c * c + 2.0 * theta * rho.rho_xs * c * sp + 1.0) *
                     (1.0 - rho.rho_us * rho.rho_us);
  const double den = P * (1.0 - rho.rho_ux * rho.rho_ux) +
                     c * c * (1.0 - rho.rho_us * rho.rho_us) +
                     2.0 * theta * c * (rho.rho_xs - rho.rho_ux * rho.rho_us) * sp +
                     1.0;
  if (!(num > 0.0) || !(den > 0.0)) return -kInf;
  return 0.5 * std::log2(num) - 0.5 * std::log2(den);
}

double expected_r_gamma(const RhoPoint& rho, double P, double c,
                        int quad_order) {
  if (quad_order < 16)
    throw std::domain_error("expected_r_gamma: quad_order must be >= 16");
  const auto& rule = gauss_hermite(quad_order);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = r_gamma(rho, rule.nodes[i], P, c);
    if (v == -kInf) return -kInf;
    acc += rule.weights[i] * v;
  }
  return acc;
}

ExpectedRate expected_r_gamma_checked(const RhoPoint& rho, double P, double c,
                                      int quad_order) {
  ExpectedRate out;
  out.value = expected_r_gamma(rho, P, c, quad_order);
  const double doubled = expected_r_gamma(rho, P, c, 2 * quad_order);
  const double scale = std::max(1e-12, std::abs(doubled));
  out.quad_warning = std::abs(out.value - doubled) > 1e-6 * scale;
  return out;
}

namespace {

// Evaluates the expectation if the pair lies inside the open manifold slice.
bool eval_pair(double xs, double us, int sign, double P, double c,
               int quad_order, RhoPoint* rho, double* rate) {
  const double d = xs - us;
  const double radicand = 1.0 - d * d;
  if (!(radicand >= kRadicandMin && radicand <= kRadicandMax)) return false;
  if (!(std::abs(xs) < 1.0 && std::abs(us) < 1.0)) return false;
  *rho = rho_from_pair(xs, us, sign);
  *rate = expected_r_gamma(*rho, P, c, quad_order);
  return std::isfinite(*rate);
}

}  // namespace

OptimizeResult optimize_rho(double P, double c, int quad_order) {
  if (!(P > 0.0)) {
    // Zero power transmits nothing; report the clamped rate at an arbitrary
    // on-manifold point.
    OptimizeResult res;
    res.rho = rho_from_pair(0.0, 0.5, +1);
    res.rate = 0.0;
    return res;
  }
  if (!(c >= 0.0)) throw std::domain_error("optimize_rho: c must be >= 0");

  const double step = 0.02;
  RhoPoint best_rho;
  double best = -kInf;
  // Coarse exhaustive grid over the open square, both signs of rho_UX.
  for (int i = -49; i <= 49; ++i) {
    for (int j = -49; j <= 49; ++j) {
      const double xs = i * step, us = j * step;
      for (int sign : {+1, -1}) {
        RhoPoint rho;
        double rate;
        if (!eval_pair(xs, us, sign, P, c, quad_order, &rho, &rate)) continue;
        if (rate > best) {
          best = rate;
          best_rho = rho;
        }
      }
    }
  }
  // Compass pattern search with step halving.
  double h = step;
  int sign = best_rho.rho_ux >= 0.0 ? +1 : -1;
  while (h > 1e-5) {
    bool improved = false;
    const double xs0 = best_rho.rho_xs, us0 = best_rho.rho_us;
    const double moves[4][2] = {{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}};
    for (const auto& mv : moves) {
      for (int sg : {sign, -sign}) {
        RhoPoint rho;
        double rate;
        if (!eval_pair(xs0 + mv[0], us0 + mv[1], sg, P, c, quad_order, &rho,
                       &rate))
          continue;
        if (rate > best + 1e-15) {
          best = rate;
          best_rho = rho;
          sign = sg;
          improved = true;
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  OptimizeResult res;
  res.rho = best_rho;
  res.rate = std::max(0.0, best);
  return res;
}

}  // namespace wffd::gauss
