#include "wffd/gp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wffd/gauss_signaling.hpp"
#include "wffd/numerics.hpp"

namespace wffd::gp {

namespace {

double xlogx_ratio(double p, double q) {
  // p * log2(p/q) with the 0 log 0 convention.
  if (p <= 0.0) return 0.0;
  return p * std::log2(p / q);
}

}  // namespace

DiscreteGPChannel build_channel(double P, double c,
                                const FadingDistribution& fading, int nx,
                                int ns, int ny, double y_span) {
  if (!(P >= 0.0) || !(c >= 0.0))
    throw std::domain_error("build_channel: need P >= 0, c >= 0");
  if (nx < 1 || ns < 1) throw std::domain_error("build_channel: nx, ns >= 1");
  if (ny < 16) throw std::domain_error("build_channel: ny >= 16");
  if (!fading.is_discrete() || fading.points().size() > 8)
    throw std::domain_error("build_channel: fading must be discrete, <= 8 points");

  DiscreteGPChannel ch;
  ch.power_limit = P;

  // Hard per-symbol constraint: uniform grid on [-sqrt(P), sqrt(P)].
  const double xmax = std::sqrt(P);
  if (nx == 1 || xmax == 0.0) {
    ch.x_alphabet = {0.0};
  } else {
    for (int i = 0; i < nx; ++i)
      ch.x_alphabet.push_back(-xmax + 2.0 * xmax * i / (nx - 1));
  }
  ch.nx = static_cast<int>(ch.x_alphabet.size());

  // Equal-mass quantile cells of N(0,1) with conditional-mean values.
  for (int i = 0; i < ns; ++i) {
    const double pl = static_cast<double>(i) / ns;
    const double ph = static_cast<double>(i + 1) / ns;
    const double zl = (i == 0) ? -std::numeric_limits<double>::infinity()
                               : normal_quantile(pl);
    const double zh = (i == ns - 1) ? std::numeric_limits<double>::infinity()
                                    : normal_quantile(ph);
    const double pdf_l = std::isinf(zl) ? 0.0 : normal_pdf(zl);
    const double pdf_h = std::isinf(zh) ? 0.0 : normal_pdf(zh);
    ch.s_values.push_back((pdf_l - pdf_h) * ns);
    ch.s_prior.push_back(1.0 / ns);
  }
  ch.ns = ns;

  for (const auto& pt : fading.points()) {
    ch.a_values.push_back(pt.value);
    ch.a_prior.push_back(pt.prob);
  }
  ch.na = static_cast<int>(ch.a_values.size());

  double mmax = 0.0;
  for (double x : ch.x_alphabet)
    for (double s : ch.s_values)
      for (double a : ch.a_values)
        mmax = std::max(mmax, std::abs(x + c * a * s));
  if (y_span <= 0.0) y_span = mmax + 5.2;
  ch.y_span = y_span;
  ch.ny = ny;
  // Mass escaping the span would be silently absorbed by the edge bins;
  // refuse spans that distort more than 1e-6 of any conditional law.
  if (1.0 - (normal_cdf(y_span - mmax) - normal_cdf(-y_span - mmax)) > 1e-6) {
    std::ostringstream msg;
    msg << "build_channel: y_span " << y_span << " captures less than 1-1e-6 "
        << "of the output mass (max |mean| = " << mmax << ")";
    throw std::runtime_error(msg.str());
  }

  const double width = 2.0 * y_span / ny;
  for (int i = 0; i < ny; ++i)
    ch.y_centers.push_back(-y_span + width * (i + 0.5));

  ch.transition.resize(static_cast<std::size_t>(ch.nx) * ns * ch.na * ny);
  for (int xi = 0; xi < ch.nx; ++xi)
    for (int si = 0; si < ns; ++si)
      for (int ai = 0; ai < ch.na; ++ai) {
        const double mean = ch.x_alphabet[xi] + c * ch.a_values[ai] * ch.s_values[si];
        for (int yi = 0; yi < ny; ++yi) {
          const double lo = (yi == 0) ? -std::numeric_limits<double>::infinity()
                                      : -y_span + width * yi;
          const double hi = (yi == ny - 1)
                                ? std::numeric_limits<double>::infinity()
                                : -y_span + width * (yi + 1);
          const double pl = std::isinf(lo) ? 0.0 : normal_cdf(lo - mean);
          const double ph = std::isinf(hi) ? 1.0 : normal_cdf(hi - mean);
          ch.transition[((static_cast<std::size_t>(xi) * ns + si) * ch.na + ai) *
                            ny + yi] = ph - pl;
        }
      }
  return ch;
}

double gp_rate(const DiscreteGPChannel& ch, int u_size,
               const std::vector<double>& p_u_given_s,
               const std::vector<int>& x_map) {
  const int nu = u_size, ns = ch.ns, na = ch.na, ny = ch.ny;
  // p(u), I(U;S).
  std::vector<double> pu(nu, 0.0);
  for (int s = 0; s < ns; ++s)
    for (int u = 0; u < nu; ++u)
      pu[u] += ch.s_prior[s] * p_u_given_s[s * nu + u];
  double i_us = 0.0;
  for (int s = 0; s < ns; ++s)
    for (int u = 0; u < nu; ++u) {
      const double pus = p_u_given_s[s * nu + u];
      if (pus > 0.0 && pu[u] > 0.0)
        i_us += ch.s_prior[s] * xlogx_ratio(pus, pu[u]);
    }

  // I(U;Y|A) from the joint p(u, y | a); U is independent of A.
  double i_uya = 0.0;
  std::vector<double> joint(static_cast<std::size_t>(nu) * ny);
  std::vector<double> py(ny);
  for (int a = 0; a < na; ++a) {
    if (ch.a_prior[a] <= 0.0) continue;
    std::fill(joint.begin(), joint.end(), 0.0);
    std::fill(py.begin(), py.end(), 0.0);
    for (int s = 0; s < ns; ++s)
      for (int u = 0; u < nu; ++u) {
        const double w = ch.s_prior[s] * p_u_given_s[s * nu + u];
        if (w <= 0.0) continue;
        const int x = x_map[u * ns + s];
        const double* row =
            &ch.transition[((static_cast<std::size_t>(x) * ns + s) * na + a) * ny];
        double* out = &joint[static_cast<std::size_t>(u) * ny];
        for (int y = 0; y < ny; ++y) out[y] += w * row[y];
      }
    for (int u = 0; u < nu; ++u)
      for (int y = 0; y < ny; ++y) py[y] += joint[u * ny + y];
    double h = 0.0;
    for (int u = 0; u < nu; ++u) {
      if (pu[u] <= 0.0) continue;
      for (int y = 0; y < ny; ++y) {
        const double j = joint[u * ny + y];
        if (j > 0.0 && py[y] > 0.0) h += xlogx_ratio(j, pu[u] * py[y]);
      }
    }
    i_uya += ch.a_prior[a] * h;
  }
  return i_uya - i_us;
}

namespace {

// Enumerates compositions of `steps` into `parts` bins (simplex grid).
void enumerate_compositions(int steps, int parts,
                            std::vector<std::vector<double>>& out) {
  std::vector<int> comp(parts, 0);
  std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (idx == parts - 1) {
      comp[idx] = remaining;
      std::vector<double> row(parts);
      for (int i = 0; i < parts; ++i)
        row[i] = static_cast<double>(comp[i]) / steps;
      out.push_back(std::move(row));
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      comp[idx] = k;
      rec(idx + 1, remaining - k);
    }
  };
  rec(0, steps);
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (1ULL << 62) / std::max<std::uint64_t>(base, 1)) return 1ULL << 62;
    r *= base;
  }
  return r;
}

}  // namespace

GPSolution gp_capacity_bruteforce(const DiscreteGPChannel& ch, int u_size,
                                  int simplex_steps, std::uint64_t budget) {
  if (u_size < 1 || u_size > 4)
    throw std::domain_error("gp_capacity_bruteforce: u_size must be in [1,4]");
  if (simplex_steps < 1)
    throw std::domain_error("gp_capacity_bruteforce: simplex_steps >= 1");
  const int ns = ch.ns, nx = ch.nx, nu = u_size;

  std::vector<std::vector<double>> simplex;
  enumerate_compositions(simplex_steps, nu, simplex);
  const std::uint64_t n_maps = ipow(nx, nu * ns);
  std::uint64_t grid_combos = 1;
  for (int s = 0; s < ns; ++s) {
    grid_combos *= simplex.size();
    if (grid_combos > budget) break;
  }
  if (n_maps > budget || grid_combos > budget ||
      n_maps > budget / grid_combos) {
    std::ostringstream msg;
    msg << "gp_capacity_bruteforce: " << n_maps << " maps x " << grid_combos
        << " simplex points exceed the budget of " << budget;
    throw std::runtime_error(msg.str());
  }

  struct Candidate {
    double rate = -std::numeric_limits<double>::infinity();
    std::vector<double> pus;
    std::vector<int> map;
    std::uint64_t evals = 0;
  };

  std::vector<Candidate> per_map(n_maps);
  parallel_for(n_maps, [&](std::size_t mi) {
    std::vector<int> x_map(nu * ns);
    std::uint64_t rem = mi;
    for (int k = 0; k < nu * ns; ++k) {
      x_map[k] = static_cast<int>(rem % nx);
      rem /= nx;
    }
    Candidate cand;
    cand.map = x_map;
    std::vector<double> pus(ns * nu, 0.0);
    // Grid over P(U|S): independent simplex choice per state symbol.
    std::vector<std::size_t> idx(ns, 0);
    for (;;) {
      for (int s = 0; s < ns; ++s)
        for (int u = 0; u < nu; ++u) pus[s * nu + u] = simplex[idx[s]][u];
      const double r = gp_rate(ch, nu, pus, x_map);
      ++cand.evals;
      if (r > cand.rate) {
        cand.rate = r;
        cand.pus = pus;
      }
      int pos = 0;
      while (pos < ns && ++idx[pos] == simplex.size()) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos == ns) break;
    }
    // Coordinate ascent on the best grid point, step halving to 1e-4.
    double h = 1.0 / simplex_steps;
    pus = cand.pus;
    while (h > 1e-4) {
      bool improved = false;
      for (int s = 0; s < ns; ++s)
        for (int u = 0; u < nu; ++u)
          for (double dir : {h, -h}) {
            std::vector<double> trial = pus;
            trial[s * nu + u] += dir;
            if (trial[s * nu + u] < 0.0 || trial[s * nu + u] > 1.0) continue;
            // Renormalize the row by scaling the other entries.
            double rest = 0.0;
            for (int v = 0; v < nu; ++v)
              if (v != u) rest += trial[s * nu + v];
            const double target = 1.0 - trial[s * nu + u];
            if (target < 0.0) continue;
            if (rest > 0.0) {
              for (int v = 0; v < nu; ++v)
                if (v != u) trial[s * nu + v] *= target / rest;
            } else if (target > 1e-15) {
              continue;
            }
            const double r = gp_rate(ch, nu, trial, x_map);
            ++cand.evals;
            if (r > cand.rate + 1e-13) {
              cand.rate = r;
              cand.pus = trial;
              pus = trial;
              improved = true;
            }
          }
      if (!improved) h *= 0.5;
    }
    per_map[mi] = std::move(cand);
  });

  // Deterministic max-reduce: ties break toward the smaller map index.
  std::size_t best = 0;
  std::uint64_t total_evals = 0;
  for (std::size_t i = 0; i < per_map.size(); ++i) {
    total_evals += per_map[i].evals;
    if (per_map[i].rate > per_map[best].rate) best = i;
  }
  GPSolution sol;
  sol.u_size = nu;
  sol.p_u_given_s = per_map[best].pus;
  sol.x_map = per_map[best].map;
  sol.rate = per_map[best].rate;
  sol.evaluations = total_evals;
  return sol;
}

double sample_fading(const FadingDistribution& fading, Rng& rng) {
  switch (fading.family()) {
    case FadingFamily::Discrete: {
      const double u = rng.uniform();
      double acc = 0.0;
      const auto& pts = fading.points();
      for (const auto& pt : pts) {
        acc += pt.prob;
        if (u < acc) return pt.value;
      }
      return pts.back().value;
    }
    case FadingFamily::LogUniform: {
      const double l = fading.support_lo(), h = fading.support_hi();
      return l * std::exp(std::log(h / l) * rng.uniform());
    }
    case FadingFamily::TruncatedDensity: {
      if (fading.density_id() == DensityId::Uniform)
        return fading.support_lo() +
               (fading.support_hi() - fading.support_lo()) * rng.uniform();
      const auto& p = fading.density_params();
      for (int tries = 0; tries < 100000; ++tries) {
        const double a = p[0] + p[2] * rng.normal();
        if (a >= fading.support_lo() && a <= fading.support_hi()) return a;
      }
      throw std::runtime_error("sample_fading: truncation rejection stalled");
    }
  }
  throw std::logic_error("sample_fading: unknown family");
}

McCheck mc_expectation_check(const FadingDistribution& fading,
                             const std::string& integrand_id,
                             const std::vector<double>& params,
                             std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 10000)
    throw std::domain_error("mc_expectation_check: n_samples must be >= 1e4");

  std::function<double(double)> f;
  if (integrand_id == "const_one") {
    f = [](double) { return 1.0; };
  } else if (integrand_id == "tin") {
    if (params.size() != 2)
      throw std::domain_error("mc: tin integrand needs (P, c)");
    const double P = params[0], c2 = params[1] * params[1];
    f = [=](double a) { return std::log2(1.0 + P / (1.0 + c2 * a * a)); };
  } else if (integrand_id == "gm") {
    if (params.size() != 1)
      throw std::domain_error("mc: gm integrand needs (m)");
    const double m = params[0];
    const double mu = fading.mean();
    const double one_mu2 = 1.0 + mu * mu;
    const double tol = 1e-12 * std::max(1.0, std::abs(m));
    f = [=](double a) {
      const double d = a - m;
      if (std::abs(d) <= tol) return 0.0;
      return std::log2(one_mu2 / (d * d));
    };
  } else if (integrand_id == "rgamma") {
    if (params.size() != 5)
      throw std::domain_error("mc: rgamma integrand needs (xs, us, sign, P, c)");
    const auto rho = gauss::rho_from_pair(params[0], params[1],
                                          params[2] >= 0.0 ? +1 : -1);
    const double P = params[3], c = params[4];
    f = [=](double a) { return gauss::r_gamma(rho, a, P, c); };
  } else {
    throw std::domain_error("mc_expectation_check: unknown integrand '" +
                            integrand_id + "'");
  }

  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double v = f(sample_fading(fading, rng));
    const double delta = v - mean;
    mean += delta / (i + 1);
    m2 += delta * (v - mean);
  }
  McCheck out;
  out.mc_mean = mean;
  const double var = m2 / (n_samples - 1);
  out.mc_stderr = std::sqrt(std::max(0.0, var) / n_samples);
  out.quad_value = fading.expect(f);
  return out;
}

MonotoneReport capacity_monotone_in_c_check(
    double P, const FadingDistribution& fading, const std::vector<double>& c_list,
    int nx, int ns, int ny, int u_size, int simplex_steps) {
  MonotoneReport rep;
  rep.c_values = c_list;
  // Fixed discretization across the list: span chosen for the largest c.
  double cmax = 0.0;
  for (double c : c_list) cmax = std::max(cmax, c);
  double span_mean = 0.0;
  {
    const auto probe = build_channel(P, cmax, fading, nx, ns, ny);
    span_mean = probe.y_span;
  }
  for (double c : c_list) {
    const auto ch = build_channel(P, c, fading, nx, ns, ny, span_mean);
    const auto sol = gp_capacity_bruteforce(ch, u_size, simplex_steps);
    rep.rates.push_back(sol.rate);
  }
  for (std::size_t i = 0; i + 1 < rep.rates.size(); ++i) {
    const double increase = rep.rates[i + 1] - rep.rates[i];
    rep.worst_increase = std::max(rep.worst_increase, increase);
  }
  rep.nonincreasing = rep.worst_increase <= 2e-2;
  return rep;
}

}  // namespace wffd::gp
