#pragma once

#include <string>
#include <utility>

#include "wffd/fading.hpp"

namespace wffd::bounds {

// All rates are base-2 (bits per channel use); additive constants in the
// bound expressions are bits. Every public evaluator clamps to >= 0.

enum class Theorem {
  Antipodal,
  Mode,
  Strong,
  SymmetricCont,
  Narrow,
  FatTail,
  CCDP,
};

std::string theorem_name(Theorem t);

struct RateRegime {
  double rate = 0.0;
  int regime = 0;  // 1-based index of the piecewise case
};

struct BoundReport {
  Theorem theorem = Theorem::Antipodal;
  int regime = 0;
  double inner_bpcu = 0.0;
  double outer_bpcu = 0.0;
  double gap_claimed_bpcu = 0.0;
  double gap_realized_bpcu = 0.0;
};

struct GapTerms {
  double g_m_outer = 0.0;   // conditional-mean gap of the mode outer bound
  double g_m_prime = 0.0;   // gap between the mode inner and outer bounds
  double g_m_inner = 0.0;   // achievability-side constant
  double g_s = 0.0;         // strong-fading gap (kappa = 1)
  double g_m_narrow = 0.0;  // narrow-fading gap with the quantization bit
};

// Antipodal fading (uniform on {-1, +1}).
RateRegime outer_antipodal(double P, double c);
RateRegime inner_antipodal(double P, double c);

// Symmetric continuous fading reuses the antipodal outer bound.
RateRegime outer_symmetric_continuous(double P, double c);

// 2-user carbon-copying reference outer bound.
RateRegime ccdp_outer(double P, double c);

// Form of the pre-coded layer: Simplified is the closed-form lower bound,
// Exact keeps the per-realization mutual-information expression it was
// derived from (never smaller).
enum class PasForm { Simplified, Exact };

// Superposition rate at split alpha (fraction of power on the layer that
// treats fading-times-state as noise); the remaining power is pre-coded
// against c*m*S. Works for discrete and continuous fading.
double inner_superposition_alpha(double P, double c,
                                 const FadingDistribution& fading, double m,
                                 double alpha,
                                 PasForm form = PasForm::Simplified);

struct ModeInner {
  double rate = 0.0;
  double alpha_star = 1.0;  // chosen noise-layer power fraction
};

// Best superposition split among the closed-form candidate and pure TIN.
// No mode-mass precondition; m may be any pre-coding point.
ModeInner inner_superposition_best(double P, double c,
                                   const FadingDistribution& fading, double m,
                                   PasForm form = PasForm::Simplified);

// Mode inner bound; requires P_A(m) >= 1/2.
ModeInner inner_mode(double P, double c, const FadingDistribution& fading,
                     double m);

// Mode outer bound; requires P_A(m) >= 1/2. Embeds the capacity-decreasing-
// in-c substitution (the piecewise value never exceeds the small-c constant).
RateRegime outer_mode(double P, double c, const FadingDistribution& fading,
                      double m);

GapTerms gap_terms_mode(const FadingDistribution& fading, double m, double c);

// Spacing-based closed-form bounds on (g_m_outer, g_m_prime); checks that the
// exact g_m does not exceed the bound.
std::pair<double, double> gap_lem3(const FadingDistribution& fading, double m,
                                   double delta, double c);

// Strong fading regime: uniform support with |a_{i+1}| >= kappa*c*|a_i|.
RateRegime outer_strong(double P, double c, const FadingDistribution& fading,
                        double kappa_spacing = 1.0);
double g_s(const FadingDistribution& fading, double kappa_spacing = 1.0);

struct NarrowOuter {
  double rate = 0.0;
  int regime = 0;
  double q_m = 0.0;  // realized window mass Pr[|A - m| <= kappa/c]
  double g_m = 0.0;  // gap constant including the quantization allowance
};

// Continuous fading concentrating near m: outer bound for the step-(1/c)
// quantized model with the quantization bit folded into g_m. Internally
// normalizes to unit fading variance (which leaves the expression invariant).
NarrowOuter outer_narrow(double P, double c, const FadingDistribution& fading,
                         double m, double kappa = 1.0);

// Fat-tailed construction: closed-form outer bound and the smallest depth M
// making the construction's side conditions hold.
double outer_fat(double P, double c);
int choose_M_fat(double P, double c);

// Treat-interference-as-noise rates: exact expectation and closed form.
double inner_tin_exact(double P, double c, const FadingDistribution& fading);
double inner_tin_closed(double P, double c, double mu_A);
// As printed in the source derivation (kept for audit; dimensionally odd).
double inner_tin_closed_literal(double P, double c, double mu_A);

// Per-theorem claimed gap in bpcu (g is the relevant gap constant where the
// claim depends on the distribution).
double claimed_gap(Theorem t, double g = 0.0);

}  // namespace wffd::bounds
