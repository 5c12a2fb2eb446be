#include "wffd/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/Dense>

namespace wffd {

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol) {
  if (!(lo < hi)) {
    if (lo == hi) return 0.0;
    throw std::runtime_error("integrate: empty interval");
  }
  double err = 0.0;
  const double target = std::max(abs_tol * 0.1, 1e-13);
  double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, 18, target, &err);
  if (!(err <= std::max(abs_tol, 1e-12 * std::abs(value)))) {
    std::ostringstream msg;
    msg << "integrate: error estimate " << err << " exceeds tolerance "
        << abs_tol << " on [" << lo << ", " << hi << "]";
    throw std::runtime_error(msg.str());
  }
  return value;
}

double integrate_singular(const std::function<double(double)>& f, double lo,
                          double hi, double abs_tol) {
  if (!(lo < hi)) {
    if (lo == hi) return 0.0;
    throw std::runtime_error("integrate_singular: empty interval");
  }
  boost::math::quadrature::tanh_sinh<double> quad;
  double err = 0.0, l1 = 0.0;
  double value = quad.integrate(f, lo, hi, 1e-12, &err, &l1);
  if (!(err * l1 <= std::max(abs_tol, 1e-11 * std::abs(value)))) {
    std::ostringstream msg;
    msg << "integrate_singular: error estimate " << err * l1
        << " exceeds tolerance " << abs_tol;
    throw std::runtime_error(msg.str());
  }
  return value;
}

const GaussHermiteRule& gauss_hermite(int order) {
  if (order < 2 || order > 512)
    throw std::domain_error("gauss_hermite: order must be in [2, 512]");
  static std::mutex mu;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  // Golub-Welsch on the probabilists' Hermite recurrence: off-diagonal
  // entries sqrt(k). Eigenvalues are N(0,1)-quadrature nodes, weights are
  // squared first eigenvector components.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    double b = std::sqrt(static_cast<double>(k));
    jac(k, k - 1) = b;
    jac(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
  GaussHermiteRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = solver.eigenvalues()[i];
    double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
  }
  auto res = cache.emplace(order, std::move(rule));
  return res.first->second;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile: p must be in (0,1)");
  static const boost::math::normal_distribution<double> dist(0.0, 1.0);
  return boost::math::quantile(dist, p);
}

unsigned effective_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WFFD_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  unsigned nthreads = std::min<std::size_t>(effective_threads(), n);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::exception_ptr eptr = nullptr;
  std::mutex emu;
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(emu);
          if (!eptr) eptr = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (eptr) std::rethrow_exception(eptr);
}

namespace {
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double two_pi_u2 = 2.0 * 3.14159265358979323846 * u2;
  cached_ = r * std::sin(two_pi_u2);
  has_cached_ = true;
  return r * std::cos(two_pi_u2);
}

}  // namespace wffd
