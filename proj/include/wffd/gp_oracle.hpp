#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wffd/fading.hpp"
#include "wffd/numerics.hpp"

namespace wffd::gp {

// Finite-alphabet discretization of Y = X + c*A.S + Z with S ~ N(0,1)
// quantized to equal-mass cells and Y binned on [-y_span, y_span] with
// tail-absorbing edge bins.
struct DiscreteGPChannel {
  std::vector<double> x_alphabet;
  std::vector<double> s_values, s_prior;
  std::vector<double> a_values, a_prior;
  std::vector<double> y_centers;
  // p(y | x, s, a), flattened as ((x * ns + s) * na + a) * ny + y.
  std::vector<double> transition;
  double power_limit = 0.0;
  double y_span = 0.0;
  int nx = 0, ns = 0, na = 0, ny = 0;

  double p(int x, int s, int a, int y) const {
    return transition[((static_cast<std::size_t>(x) * ns + s) * na + a) * ny + y];
  }
};

// y_span <= 0 selects max|x + c a s| + 5.2 automatically (tail mass beyond
// the span stays below 1e-6 for every (x, s, a) triple).
DiscreteGPChannel build_channel(double P, double c,
                                const FadingDistribution& fading, int nx,
                                int ns, int ny, double y_span = 0.0);

struct GPSolution {
  int u_size = 0;
  std::vector<double> p_u_given_s;  // row-major [s][u]
  std::vector<int> x_map;           // x index per (u, s), u-major
  double rate = 0.0;                // I(U;Y|A) - I(U;S), best found
  std::uint64_t evaluations = 0;
};

// Exhaustive enumeration of deterministic maps x(u,s) with a simplex grid
// over P(U|S) and coordinate-ascent refinement. The result is a certified
// lower bound for the discretized channel, not a guaranteed global optimum.
GPSolution gp_capacity_bruteforce(const DiscreteGPChannel& ch, int u_size,
                                  int simplex_steps,
                                  std::uint64_t budget = 50'000'000);

// Recomputes I(U;Y|A) - I(U;S) for a given solution from the joint tensor.
double gp_rate(const DiscreteGPChannel& ch, int u_size,
               const std::vector<double>& p_u_given_s,
               const std::vector<int>& x_map);

struct McCheck {
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  double quad_value = 0.0;
};

// Seeded Monte Carlo vs quadrature/summation for a registered integrand:
//   "const_one"            -> 1
//   "tin"    (P, c)        -> log2(1 + P/(1 + c^2 a^2))
//   "gm"     (m)           -> log2((1+mu^2)/(a-m)^2) off the mode, 0 at m
//   "rgamma" (rho_xs, rho_us, sign, P, c) -> R_Gamma(rho, a)
McCheck mc_expectation_check(const FadingDistribution& fading,
                             const std::string& integrand_id,
                             const std::vector<double>& params,
                             std::size_t n_samples, std::uint64_t seed);

double sample_fading(const FadingDistribution& fading, Rng& rng);

struct MonotoneReport {
  std::vector<double> c_values;
  std::vector<double> rates;
  bool nonincreasing = true;  // within the optimizer slack
  double worst_increase = 0.0;
};

// Runs the brute-force oracle along a c-ascending list with a fixed
// discretization and reports monotonicity within 2e-2 optimizer slack.
MonotoneReport capacity_monotone_in_c_check(
    double P, const FadingDistribution& fading, const std::vector<double>& c_list,
    int nx, int ns, int ny, int u_size, int simplex_steps);

}  // namespace wffd::gp
