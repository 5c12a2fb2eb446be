#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace wffd {

// Adaptive Gauss-Kronrod integration. Throws std::runtime_error with
// diagnostics if the error estimate does not reach abs_tol.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = 1e-10);

// Variant tolerant of integrable endpoint singularities (tanh-sinh).
double integrate_singular(const std::function<double(double)>& f, double lo,
                          double hi, double abs_tol = 1e-10);

// Gauss-Hermite rule in probabilists' normalization:
// E[f(Z)] for Z ~ N(0,1) is sum_i weights[i] * f(nodes[i]).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussHermiteRule& gauss_hermite(int order);

double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double p);

// Runs body(i) for i in [0, n). Thread count is capped by the WFFD_THREADS
// environment variable. Each index owns its output slot, so results are
// schedule-independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);
unsigned effective_threads();

// xoshiro256++ with splitmix64 seeding and explicit Box-Muller. Kept
// self-contained so that seeded runs are bit-identical across platforms
// (std::normal_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();   // N(0, 1)

 private:
  std::uint64_t s_[4];
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace wffd
