#include "wffd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wffd::bounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp0(double x) { return x > 0.0 ? x : 0.0; }

double log2p(double x) { return std::log2(x); }

// log2((a-m)^2/a^2 + 1) without overflowing the intermediate ratio at
// tiny |a|; +inf only at a == 0 exactly.
double log2_penalty(double a, double m) {
  if (a == 0.0) return kInf;
  const double d = a - m;
  return std::log2(d * d + a * a) - 2.0 * std::log2(std::abs(a));
}

bool is_mode_value(double a, double m) {
  return std::abs(a - m) <= 1e-12 * std::max(1.0, std::abs(m));
}

// Unconditional expectation of f over {A != m}; pairs with the conditional
// form via division by qbar.
double expect_off_mode(const FadingDistribution& fading, double m,
                       const std::function<double(double)>& f) {
  if (fading.is_discrete()) {
    double acc = 0.0;
    for (const auto& pt : fading.points()) {
      if (pt.prob <= 0.0 || is_mode_value(pt.value, m)) continue;
      const double v = f(pt.value);
      if (std::isinf(v)) return v;
      acc += pt.prob * v;
    }
    return acc;
  }
  // Continuous laws put no mass on {A = m}.
  return fading.expect_split(f, {0.0, m});
}

}  // namespace

std::string theorem_name(Theorem t) {
  switch (t) {
    case Theorem::Antipodal: return "antipodal";
    case Theorem::Mode: return "mode";
    case Theorem::Strong: return "strong";
    case Theorem::SymmetricCont: return "symmetric";
    case Theorem::Narrow: return "narrow";
    case Theorem::FatTail: return "fat_tail";
    case Theorem::CCDP: return "ccdp";
  }
  return "?";
}

double claimed_gap(Theorem t, double g) {
  switch (t) {
    case Theorem::Antipodal: return 1.0;
    case Theorem::SymmetricCont: return 1.0;
    case Theorem::Mode: return g;          // G_m'
    case Theorem::Strong: return g + 1.0;  // G_s + 1
    case Theorem::Narrow: return g + 0.5;  // G_m + 1/2
    case Theorem::FatTail: return 3.0;
    case Theorem::CCDP: return 1.0;
  }
  return 0.0;
}

RateRegime outer_antipodal(double P, double c) {
  if (!(P >= 0.0)) throw std::domain_error("outer_antipodal: P must be >= 0");
  if (!(c > 0.0)) throw std::domain_error("outer_antipodal: c must be > 0");
  const double c2 = c * c;
  if (c2 <= 1.0) return {clamp0(0.5 * log2p(P + 1.0) + 0.5), 1};
  if (c2 < P + 1.0)
    return {clamp0(0.5 * log2p(P + c2 + 1.0) - 0.25 * log2p(c2) - 0.5), 2};
  return {clamp0(0.25 * log2p(P + 1.0) - 0.5), 3};
}

RateRegime inner_antipodal(double P, double c) {
  if (!(P >= 0.0)) throw std::domain_error("inner_antipodal: P must be >= 0");
  if (!(c > 0.0)) throw std::domain_error("inner_antipodal: c must be > 0");
  const double c2 = c * c;
  if (c2 <= 1.0) return {clamp0(0.5 * log2p(1.0 + P) - 0.5), 1};
  if (c2 < P + 1.0)
    return {clamp0(0.5 * log2p(1.0 + P + c2) - 0.25 * log2p(c2) - 1.0), 2};
  return {clamp0(0.25 * log2p(1.0 + P) - 1.0), 3};
}

RateRegime outer_symmetric_continuous(double P, double c) {
  return outer_antipodal(P, c);
}

RateRegime ccdp_outer(double P, double c) {
  if (!(P >= 0.0)) throw std::domain_error("ccdp_outer: P must be >= 0");
  if (!(c > 0.0)) throw std::domain_error("ccdp_outer: c must be > 0");
  const double c2 = c * c;
  if (c2 <= 2.0) return {clamp0(0.5 * log2p(1.0 + P) + 0.5), 1};
  if (c2 < 2.0 * (P + 1.0))
    return {clamp0(0.5 * log2p((P + 0.5 * c2 + 1.0) / c2) +
                   0.25 * log2p(0.5 * c2) + 0.5),
            2};
  return {clamp0(0.25 * log2p(P + 1.0)), 3};
}

double inner_superposition_alpha(double P, double c,
                                 const FadingDistribution& fading, double m,
                                 double alpha, PasForm form) {
  if (!(P >= 0.0) || !(c > 0.0))
    throw std::domain_error("inner_superposition_alpha: need P >= 0, c > 0");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::domain_error("inner_superposition_alpha: alpha must be in [0,1]");
  const double aP = alpha * P;        // layer decoded with state-as-noise
  const double abP = (1.0 - alpha) * P;  // layer pre-coded against c*m*S
  const double c2 = c * c;

  double san = 0.0;
  if (aP > 0.0)
    san = 0.5 * fading.expect([&](double a) {
      return log2p(1.0 + aP / (1.0 + c2 * a * a + abP));
    });

  double pas = 0.0;
  if (form == PasForm::Simplified) {
    const double q_m = fading.prob_at(m);
    double bracket = 0.0;
    if (abP > 0.0) bracket = 0.5 * q_m * log2p(1.0 + abP);
    const double penalty = expect_off_mode(
        fading, m, [&](double a) { return log2_penalty(a, m); });
    bracket -= 0.5 * penalty;  // -inf penalty clamps the layer to zero
    pas = std::isnan(bracket) ? 0.0 : clamp0(bracket);
  } else {
    if (abP > 0.0) {
      const double layer = fading.expect([&](double a) {
        const double d = a - m;
        const double num = (1.0 + c2 * a * a + abP) * (1.0 + abP);
        const double den = abP * c2 * d * d + abP + c2 * a * a + 1.0;
        return 0.5 * log2p(num / den);
      });
      pas = clamp0(layer);
    }
  }
  return clamp0(san + pas);
}

ModeInner inner_superposition_best(double P, double c,
                                   const FadingDistribution& fading, double m,
                                   PasForm form) {
  const double q_m = fading.prob_at(m);
  const double qbar = 1.0 - q_m;
  // Interference power seen by the split rule; equals c^2 (1 + mu_A^2) for
  // canonical fading.
  const double t = c * c * fading.second_moment();

  // abar*P = max{min{(Q_m/Qbar_m) t - 1, P}, 0}; Qbar -> 0 degenerates to
  // full pre-coding (the dirty-paper limit).
  double ab_star = P;
  if (qbar > 1e-15) ab_star = std::max(std::min(q_m / qbar * t - 1.0, P), 0.0);

  std::vector<double> alphas;
  if (P > 0.0) alphas.push_back(1.0 - ab_star / P);
  alphas.push_back(1.0);

  ModeInner best{0.0, 1.0};
  bool first = true;
  for (double a : alphas) {
    const double r = inner_superposition_alpha(P, c, fading, m, a, form);
    if (first || r > best.rate) {
      best = {r, a};
      first = false;
    }
  }
  return best;
}

ModeInner inner_mode(double P, double c, const FadingDistribution& fading,
                     double m) {
  const double q_m = fading.prob_at(m);
  if (!(q_m >= 0.5 - 1e-12))
    throw std::domain_error("inner_mode: P_A(m) = " + std::to_string(q_m) +
                            " violates the mode condition >= 1/2");
  return inner_superposition_best(P, c, fading, m, PasForm::Simplified);
}

GapTerms gap_terms_mode(const FadingDistribution& fading, double m,
                        double /*c*/) {
  GapTerms g;
  const double q_m = fading.prob_at(m);
  const double qbar = 1.0 - q_m;
  const double mu = fading.mean();
  const double one_mu2 = 1.0 + mu * mu;
  g.g_s = 0.5 * log2p(one_mu2) + 0.5;
  g.g_m_narrow = 0.5 * qbar * log2p(one_mu2) + 4.0;
  if (qbar <= 1e-15) {
    // Empty conditioning event: conditional-expectation terms are 0.
    g.g_m_outer = g.g_m_prime = g.g_m_inner = 0.0;
    return g;
  }
  const double inv_qbar = 1.0 / qbar;
  g.g_m_outer = 0.5 * inv_qbar * expect_off_mode(fading, m, [&](double a) {
    const double d = a - m;
    return log2p(one_mu2) - 2.0 * log2p(std::abs(d));
  }) + 3.0;
  g.g_m_prime = 0.5 * inv_qbar * expect_off_mode(fading, m, [&](double a) {
    const double d = a - m;
    if (a == 0.0) return kInf;
    // one_mu2 * (1/a^2 + 1/d^2) = one_mu2 (d^2 + a^2) / (a^2 d^2)
    return log2p(one_mu2) + log2p(d * d + a * a) -
           2.0 * log2p(std::abs(a)) - 2.0 * log2p(std::abs(d));
  }) + 3.0;
  g.g_m_inner = 0.5 * inv_qbar * expect_off_mode(fading, m, [&](double a) {
    return log2_penalty(a, m);
  }) + 1.0;
  return g;
}

namespace {

// Shared piecewise outer expression of the mode bound. The evaluator takes
// the minimum with the small-c constant: by the capacity-decreasing-in-c
// lemma any bound value at smaller c stays valid, which keeps the result
// nonincreasing across regime switches.
RateRegime mode_outer_piecewise(double P, double q_m, double t, double g_m) {
  const double qbar = 1.0 - q_m;
  const double v1 = 0.5 * log2p(1.0 + P) + 1.0;
  if (qbar >= q_m * t) return {clamp0(v1), 1};
  if (q_m * t <= qbar * (P + 1.0)) {
    const double v = 0.5 * log2p(1.0 + P) - 0.5 * qbar * log2p(t) + g_m;
    return {clamp0(std::min(v1, v)), 2};
  }
  const double v = 0.5 * q_m * log2p(1.0 + P) + g_m;
  return {clamp0(std::min(v1, v)), 3};
}

}  // namespace

RateRegime outer_mode(double P, double c, const FadingDistribution& fading,
                      double m) {
  if (!(P >= 0.0) || !(c > 0.0))
    throw std::domain_error("outer_mode: need P >= 0, c > 0");
  const double q_m = fading.prob_at(m);
  if (!(q_m >= 0.5 - 1e-12))
    throw std::domain_error("outer_mode: P_A(m) = " + std::to_string(q_m) +
                            " violates the mode condition >= 1/2");
  const double mu = fading.mean();
  const double t = c * c * (1.0 + mu * mu);
  const double g_m = gap_terms_mode(fading, m, c).g_m_outer;
  return mode_outer_piecewise(P, q_m, t, g_m);
}

std::pair<double, double> gap_lem3(const FadingDistribution& fading, double m,
                                   double delta, double c) {
  if (!(delta > 0.0)) throw std::domain_error("gap_lem3: delta must be > 0");
  if (!fading.is_discrete())
    throw std::domain_error("gap_lem3: discrete fading required");
  const double tol = delta * (1.0 - 1e-12);
  for (const auto& pt : fading.points()) {
    if (pt.prob <= 0.0 || is_mode_value(pt.value, m)) continue;
    if (std::abs(pt.value) < tol || std::abs(pt.value - m) < tol) {
      std::ostringstream msg;
      msg << "gap_lem3: support point " << pt.value
          << " violates the spacing condition for delta = " << delta;
      throw std::domain_error(msg.str());
    }
  }
  const double q_m = fading.prob_at(m);
  const double qbar = 1.0 - q_m;
  const double mu = fading.mean();
  const double bound_gm =
      0.5 * qbar * log2p((1.0 + mu * mu) / (delta * delta)) + 3.0;
  const double bound_gmp = bound_gm + 0.5;
  if (qbar > 1e-15) {
    const double exact_gm = gap_terms_mode(fading, m, c).g_m_outer;
    if (!(exact_gm <= bound_gm + 1e-9)) {
      std::ostringstream msg;
      msg << "gap_lem3: exact g_m " << exact_gm << " exceeds closed-form bound "
          << bound_gm;
      throw std::runtime_error(msg.str());
    }
  }
  return {bound_gm, bound_gmp};
}

namespace {

void check_strong_support(const FadingDistribution& fading, double c,
                          double kappa_spacing) {
  if (!fading.is_discrete())
    throw std::domain_error("strong fading: discrete support required");
  const auto& pts = fading.points();
  const std::size_t M = pts.size();
  if (M < 2) throw std::domain_error("strong fading: need at least 2 points");
  for (const auto& pt : pts)
    if (std::abs(pt.prob - 1.0 / M) > 1e-9)
      throw std::domain_error("strong fading: support must be uniform");
  for (std::size_t i = 0; i + 1 < M; ++i) {
    const double lhs = std::abs(pts[i + 1].value);
    const double rhs = kappa_spacing * c * std::abs(pts[i].value);
    if (lhs < rhs * (1.0 - 1e-9)) {
      std::ostringstream msg;
      msg << "strong fading: spacing |a_" << i + 2 << "| >= kappa*c*|a_"
          << i + 1 << "| fails (" << lhs << " < " << rhs << ") at index "
          << i + 1;
      throw std::domain_error(msg.str());
    }
  }
}

}  // namespace

double g_s(const FadingDistribution& fading, double kappa_spacing) {
  const double mu = fading.mean();
  return 0.5 * log2p(kappa_spacing * (1.0 + mu * mu)) + 0.5;
}

RateRegime outer_strong(double P, double c, const FadingDistribution& fading,
                        double kappa_spacing) {
  if (!(P >= 0.0)) throw std::domain_error("outer_strong: P must be >= 0");
  if (!(c > 2.0)) throw std::domain_error("outer_strong: c must be > 2");
  check_strong_support(fading, c, kappa_spacing);
  const std::size_t M = fading.points().size();
  const double mu = fading.mean();
  const double t = (1.0 + mu * mu) * c * c;
  const double gs = g_s(fading, kappa_spacing);
  if (t <= 1.0) return {clamp0(0.5 * log2p(1.0 + P) + gs), 1};
  if (t <= (M - 1.0) * (P + 1.0)) {
    const double v = 0.5 * log2p(1.0 + P + t) -
                     (M - 1.0) / (2.0 * M) * log2p(t) + gs;
    return {clamp0(v), 2};
  }
  return {clamp0(0.5 / M * log2p(1.0 + P) + gs), 3};
}

NarrowOuter outer_narrow(double P, double c, const FadingDistribution& fading,
                         double m, double kappa) {
  if (!(P >= 0.0)) throw std::domain_error("outer_narrow: P must be >= 0");
  if (!(c > 1.0)) throw std::domain_error("outer_narrow: c must be > 1");
  if (!(kappa > 0.0)) throw std::domain_error("outer_narrow: kappa must be > 0");
  if (fading.is_discrete())
    throw std::domain_error("outer_narrow: continuous fading required");
  const double q_m = fading.prob_window(m, kappa / c);
  if (!(q_m >= 0.5 - 1e-9)) {
    std::ostringstream msg;
    msg << "outer_narrow: Pr[|A - m| <= " << kappa / c << "] = " << q_m
        << " violates the narrowness condition >= 1/2";
    throw std::domain_error(msg.str());
  }
  // Normalize the fading variance; the window mass and c^2*E[A^2] are
  // invariant under the rescaling, so only the gap constant needs the
  // normalized mean.
  const double var = fading.variance();
  if (!(var > 0.0)) throw std::domain_error("outer_narrow: degenerate fading");
  const double mu_can = fading.mean() / std::sqrt(var);
  const double one_mu2 = 1.0 + mu_can * mu_can;
  const double t = c * c * fading.second_moment();  // == c_eff^2 * (1 + mu_can^2)
  const double qbar = 1.0 - q_m;
  const double g_m = 0.5 * qbar * log2p(one_mu2) + 4.0;
  const RateRegime rr = mode_outer_piecewise(P, q_m, t, g_m);
  return {rr.rate, rr.regime, q_m, g_m};
}

double outer_fat(double P, double c) {
  if (!(P >= 0.0)) throw std::domain_error("outer_fat: P must be >= 0");
  if (!(c > 2.0)) throw std::domain_error("outer_fat: c must be > 2");
  return clamp0(0.5 * log2p(1.0 + P / (1.0 + c * c)) + 2.0);
}

namespace {

// Mean of the unit-variance fat-tail law on [kappa*cf^-M, kappa], computed
// in a form stable for arbitrarily large M.
double fat_tail_mu_stable(double cf, int M) {
  const double lc = std::log(cf);
  const double cmM = std::pow(cf, -static_cast<double>(M));
  const double radicand =
      2.0 * M * lc * (1.0 - cmM * cmM) - 4.0 * (1.0 - cmM) * (1.0 - cmM);
  if (!(radicand > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double kappa = 2.0 * M * lc / std::sqrt(radicand);
  return kappa * (1.0 - cmM) / (M * lc);
}

}  // namespace

int choose_M_fat(double P, double c) {
  if (!(P >= 0.0)) throw std::domain_error("choose_M_fat: P must be >= 0");
  if (!(c > 2.0)) throw std::domain_error("choose_M_fat: c must be > 2");
  const double cf = std::floor(c);
  const double min_depth = 2.0 * std::log2(c);
  for (int M = 3; M <= 1000000; ++M) {
    if (M < min_depth) continue;
    const double mu = fat_tail_mu_stable(cf, M);
    if (!(mu < 1.0)) continue;
    if (!(c * c * (1.0 + mu * mu) <= (M - 1.0) * (P + 1.0))) continue;
    return M;
  }
  throw std::runtime_error("choose_M_fat: no M <= 1e6 satisfies the conditions");
}

double inner_tin_exact(double P, double c, const FadingDistribution& fading) {
  if (!(P >= 0.0) || !(c > 0.0))
    throw std::domain_error("inner_tin_exact: need P >= 0, c > 0");
  const double c2 = c * c;
  return clamp0(0.5 * fading.expect([&](double a) {
    return log2p(1.0 + P / (1.0 + c2 * a * a));
  }));
}

double inner_tin_closed(double P, double c, double mu_A) {
  if (!(P >= 0.0) || !(c > 0.0))
    throw std::domain_error("inner_tin_closed: need P >= 0, c > 0");
  return clamp0(0.5 * log2p(1.0 + P / (1.0 + c * c * (1.0 + mu_A * mu_A))));
}

double inner_tin_closed_literal(double P, double c, double mu_A) {
  if (!(P >= 0.0) || !(c > 0.0))
    throw std::domain_error("inner_tin_closed_literal: need P >= 0, c > 0");
  return clamp0(0.5 * log2p(1.0 + P / (1.0 + c * (1.0 + mu_A))));
}

}  // namespace wffd::bounds
