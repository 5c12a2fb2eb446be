#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracle_helpers.hpp"
#include "wffd/bounds.hpp"
#include "wffd/verify.hpp"

using namespace wffd;
namespace wb = wffd::bounds;

TEST_CASE("antipodal outer bound") {
  auto [r1, g1] = wb::outer_antipodal(3.0, 0.5);
  CHECK(r1 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(g1 == 1);
  auto [r2, g2] = wb::outer_antipodal(15.0, 2.0);
  CHECK(r2 == doctest::Approx(1.16096404744368117).epsilon(1e-13));
  CHECK(g2 == 2);
  auto [r3, g3] = wb::outer_antipodal(3.0, 2.0);  // exercises the clamp edge
  CHECK(r3 == 0.0);
  CHECK(g3 == 3);
}

TEST_CASE("antipodal inner bound") {
  CHECK(wb::inner_antipodal(3.0, 0.5).rate == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(wb::inner_antipodal(15.0, 2.0).rate ==
        doctest::Approx(0.66096404744368117).epsilon(1e-13));
  CHECK(wb::inner_antipodal(3.0, 2.0).rate == 0.0);  // negative raw, clamped
}

TEST_CASE("antipodal sandwich and regime boundaries") {
  const auto grid = verify::default_grid();
  for (double P : grid.p_values)
    for (double c : grid.c_values) {
      const double out = wb::outer_antipodal(P, c).rate;
      const double in = wb::inner_antipodal(P, c).rate;
      CHECK(in <= out + 1e-12);
      CHECK(out - in <= 1.0 + 1e-9);
      CHECK(out >= 0.0);
      CHECK(in >= 0.0);
    }
  // One-sided values at the regime boundaries. At c^2 = P+1 the drop is
  // exactly 1/2 bit; at c^2 = 1 it is 1 - 0.5*log2((P+2)/(P+1)), which
  // approaches 1 for large P (not 1/2; see the decisions ledger).
  for (double P : {0.1, 1.0, 10.0, 500.0}) {
    const double eps = 1e-9;
    const double at1_lo = wb::outer_antipodal(P, 1.0).rate;
    const double at1_hi = wb::outer_antipodal(P, 1.0 + eps).rate;
    CHECK(at1_hi <= at1_lo);
    CHECK(at1_lo - at1_hi <= 1.0 + 1e-6);
    const double cb = std::sqrt(P + 1.0);
    const double atb_lo = wb::outer_antipodal(P, cb * (1 - 1e-12)).rate;
    const double atb_hi = wb::outer_antipodal(P, cb).rate;
    // Half a bit, shaved when the regime-3 value clamps at zero.
    const double expected = std::min(0.5, atb_lo);
    CHECK(atb_lo - atb_hi == doctest::Approx(expected).epsilon(1e-5));
    CHECK(atb_lo - atb_hi <= 0.5 + 1e-9);
  }
}

TEST_CASE("symmetric continuous outer equals antipodal outer") {
  CHECK(wb::outer_symmetric_continuous(3.0, 0.5).rate ==
        wb::outer_antipodal(3.0, 0.5).rate);
  CHECK(wb::outer_symmetric_continuous(0.0, 1.0).rate <= 0.5 + 1e-15);
  CHECK(wb::outer_symmetric_continuous(3.0, 2.0).rate == 0.0);
}

TEST_CASE("ccdp reference outer bound") {
  CHECK(wb::ccdp_outer(3.0, 1.0).rate == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(wb::ccdp_outer(3.0, 1.0).regime == 1);
  CHECK(wb::ccdp_outer(3.0, 3.0).rate == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(wb::ccdp_outer(3.0, 3.0).regime == 3);
  CHECK(wb::ccdp_outer(0.0, 1.0).rate == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("superposition inner bound") {
  // Point mass at m with alpha = 0 is the clean dirty-paper rate.
  const auto pm = make_point_mass(0.7);
  for (double P : {0.1, 1.0, 10.0, 100.0})
    CHECK(wb::inner_superposition_alpha(P, 1.3, pm, 0.7, 0.0) ==
          doctest::Approx(0.5 * std::log2(1.0 + P)).epsilon(1e-15));

  // Antipodal, m=1, alpha=1: the pre-coded layer bracket is negative and
  // clamps to zero, leaving the state-as-noise term only.
  const auto anti = make_antipodal();
  CHECK(wb::inner_superposition_alpha(3.0, 0.5, anti, 1.0, 1.0) ==
        doctest::Approx(0.88276737318148853).epsilon(1e-12));

  // alpha = 0 with a zero bracket gives rate 0.
  CHECK(wb::inner_superposition_alpha(3.0, 0.5, anti, 1.0, 0.0) == 0.0);

  // A zero in the support away from m drives the penalty to +inf; the layer
  // contributes nothing instead of propagating -inf.
  const auto with_zero = make_discrete({0.0, 1.0}, {0.4, 0.6});
  const double r = wb::inner_superposition_alpha(10.0, 1.0, with_zero, 1.0, 0.5);
  CHECK(std::isfinite(r));
  CHECK(r >= 0.0);

  // Continuous fading with 0 inside the support: the simplified penalty
  // integrand has an integrable log singularity at the origin.
  const auto tg = make_truncated_gaussian(0.5, 1.0, 0.3);
  const double rc = wb::inner_superposition_alpha(10.0, 1.5, tg, 0.5, 0.5,
                                                  wb::PasForm::Simplified);
  CHECK(std::isfinite(rc));
  CHECK(rc >= 0.0);

  // The exact pre-coded-layer form never falls below the simplified one.
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double simple = wb::inner_superposition_alpha(
        10.0, 1.0, make_geometric(0.5), 0.0, alpha, wb::PasForm::Simplified);
    const double exact = wb::inner_superposition_alpha(
        10.0, 1.0, make_geometric(0.5), 0.0, alpha, wb::PasForm::Exact);
    CHECK(exact >= simple - 1e-12);
  }
}

TEST_CASE("mode inner bound") {
  const auto anti = make_antipodal();
  // abar* = max{min{(Q/Qbar) c^2 (1+mu^2) - 1, P}, 0} = 0 here, so the
  // alpha = 1 branch wins.
  const auto r = wb::inner_mode(3.0, 0.5, anti, 1.0);
  CHECK(r.rate == doctest::Approx(0.88276737318148853).epsilon(1e-12));
  CHECK(r.alpha_star == doctest::Approx(1.0));

  for (double P : {0.1, 1.0, 10.0, 100.0})
    CHECK(std::abs(wb::inner_mode(P, 2.0, make_point_mass(1.0), 1.0).rate -
                   0.5 * std::log2(1.0 + P)) <= 1e-12);

  const auto geo = make_geometric(0.9);
  CHECK(wb::inner_mode(10.0, 1.0, geo, 0.0).rate >=
        wb::inner_tin_exact(10.0, 1.0, geo) - 1e-12);

  CHECK_THROWS_AS(wb::inner_mode(1.0, 1.0, make_geometric(0.5), 0.70710678),
                  std::domain_error);
}

TEST_CASE("mode outer bound and gap terms") {
  const auto anti = make_antipodal();
  const auto g = wb::gap_terms_mode(anti, 1.0, 0.5);
  CHECK(g.g_m_outer == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(g.g_m_prime == doctest::Approx(3.0 + 0.5 * std::log2(1.25)).epsilon(1e-13));

  const auto out = wb::outer_mode(3.0, 0.5, anti, 1.0);
  CHECK(out.rate == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(out.regime == 1);

  // Geometric fixture: G_m and G_m' against the independently summed values.
  const auto geo = wb::gap_terms_mode(make_geometric(0.5), 0.0, 1.0);
  CHECK(geo.g_m_outer == doctest::Approx(3.0598317682430937).epsilon(1e-10));
  CHECK(geo.g_m_prime == doctest::Approx(3.5598317682430937).epsilon(1e-10));
  CHECK(geo.g_m_outer <= 3.15);
  CHECK(geo.g_m_prime <= 3.65);

  // Point mass: empty conditioning event, terms are zero by convention.
  const auto pm = wb::gap_terms_mode(make_point_mass(1.0), 1.0, 1.0);
  CHECK(pm.g_m_outer == 0.0);
  CHECK(pm.g_m_prime == 0.0);
  CHECK(pm.g_m_inner == 0.0);

  // Zero in the support away from the mode makes g_m_prime infinite.
  const auto z = wb::gap_terms_mode(make_discrete({0.0, 1.0}, {0.4, 0.6}), 1.0, 1.0);
  CHECK(std::isinf(z.g_m_prime));
}

TEST_CASE("mode sandwich over the default grid") {
  const auto grid = verify::default_grid();
  struct Inst {
    FadingDistribution d;
    double m;
  } insts[] = {{make_antipodal(), 1.0},
               {make_geometric(0.5), 0.0},
               {make_geometric(0.9), 0.0}};
  for (const auto& inst : insts) {
    const double claim = wb::gap_terms_mode(inst.d, inst.m, 1.0).g_m_prime;
    for (double P : grid.p_values)
      for (double c : grid.c_values) {
        const double out = wb::outer_mode(P, c, inst.d, inst.m).rate;
        const double in = wb::inner_mode(P, c, inst.d, inst.m).rate;
        CHECK(in <= out + 1e-12);
        CHECK(out - in <= claim + 1e-9);
      }
  }
}

TEST_CASE("gap_lem3 closed-form bounds") {
  const auto anti = make_antipodal();
  const auto [gm, gmp] = wb::gap_lem3(anti, 1.0, 1.0, 0.5);
  CHECK(gm == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(gmp == doctest::Approx(3.5).epsilon(1e-13));
  CHECK(wb::gap_terms_mode(anti, 1.0, 0.5).g_m_outer <= gm + 1e-9);

  // Point mass: empty conditioning, bound collapses to the constant 3.
  CHECK(wb::gap_lem3(make_point_mass(1.0), 1.0, 0.5, 1.0).first ==
        doctest::Approx(3.0));

  // Geometric with delta = q/sqrt(qbar): bound dominates the exact value.
  const auto geo = make_geometric(0.5);
  const double delta = 0.5 / std::sqrt(0.5);
  const auto [bg, bgp] = wb::gap_lem3(geo, 0.0, delta, 1.0);
  CHECK(bg == doctest::Approx(3.3962406251802890).epsilon(1e-11));
  CHECK(wb::gap_terms_mode(geo, 0.0, 1.0).g_m_outer <= bg + 1e-9);
  CHECK(bgp == doctest::Approx(bg + 0.5));

  // A support point inside the delta ball is reported.
  CHECK_THROWS_WITH_AS(wb::gap_lem3(geo, 0.0, 2.0 * delta, 1.0),
                       doctest::Contains("support point"), std::domain_error);
}

TEST_CASE("strong fading outer bound") {
  // mu = 0 would give G_s = 1/2 exactly.
  CHECK(wb::g_s(make_antipodal(), 1.0) == doctest::Approx(0.5).epsilon(1e-13));

  const auto s33 = make_strong_set(3.0, 3);
  CHECK(wb::g_s(s33, 1.0) == doctest::Approx(1.1961587113893801).epsilon(1e-11));
  CHECK(wb::g_s(s33, 1.0) <= 1.5 + 1e-9);

  // Middle-regime value against an independent re-evaluation of the formula.
  const double P = 100.0, c = 3.0;
  const double mu = s33.mean();
  const double t = (1.0 + mu * mu) * c * c;
  const double expected = 0.5 * std::log2(1.0 + P + t) -
                          (2.0 / 6.0) * std::log2(t) + wb::g_s(s33, 1.0);
  const auto out = wb::outer_strong(P, c, s33, 1.0);
  CHECK(out.rate == doctest::Approx(expected).epsilon(1e-12));
  CHECK(out.regime == 2);

  // Spacing violations name the failing index.
  const auto bad = make_discrete({1.0, 1.5, 9.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK_THROWS_WITH_AS(wb::outer_strong(10.0, 3.0, bad, 1.0),
                       doctest::Contains("index 1"), std::domain_error);
  CHECK_THROWS_AS(wb::outer_strong(10.0, 1.5, s33, 1.0), std::domain_error);
}

TEST_CASE("strong sandwich on a kappa-spaced set inside the theorem domain") {
  // Ratio-2 spacing at c = 3 (kappa = 2/3) keeps a_1 above 1/(c-1) with unit
  // variance, so the outer bound applies on its stated domain.
  const double c = 3.0, kappa = 2.0 / 3.0;
  double m1 = (1.0 + 2.0 + 4.0) / 3.0, m2 = (1.0 + 4.0 + 16.0) / 3.0;
  const double delta = 1.0 / std::sqrt(m2 - m1 * m1);
  const auto set = make_discrete({delta, 2.0 * delta, 4.0 * delta},
                                 {1.0 / 3, 1.0 / 3, 1.0 / 3});
  REQUIRE(set.points()[0].value >= 1.0 / (c - 1.0));
  const double claim = wb::g_s(set, kappa) + 1.0;
  for (double P : verify::log_space(0.01, 1000.0, 25)) {
    const double out = wb::outer_strong(P, c, set, kappa).rate;
    const double tin = wb::inner_tin_exact(P, c, set);
    const double sup =
        wb::inner_superposition_best(P, c, set, set.mean(), wb::PasForm::Exact)
            .rate;
    CHECK(tin <= out + 1e-12);
    CHECK(sup <= out + 1e-12);
    CHECK(out - std::max(tin, sup) <= claim + 1e-9);
  }
}

TEST_CASE("narrow fading outer bound") {
  // Full mass in the window: Q_m = 1, G_m = 4 regardless of sigma.
  const auto tg = make_truncated_gaussian(0.5, 0.4, 0.2);
  const auto no = wb::outer_narrow(10.0, 2.5, tg, tg.mean(), 1.0);
  CHECK(no.q_m == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(no.g_m == doctest::Approx(4.0).epsilon(1e-12));

  // Window mass by quadrature for a non-degenerate case.
  const auto tg2 = make_truncated_gaussian(1.0, 1.0, 0.2);
  const auto no2 = wb::outer_narrow(10.0, 2.0, tg2, tg2.mean(), 1.0);
  const double window = oracle::integrate_simpson(
      [&](double a) { return tg2.density(a); }, tg2.mean() - 0.5,
      tg2.mean() + 0.5);
  CHECK(no2.q_m == doctest::Approx(window).epsilon(1e-9));
  CHECK(no2.q_m >= 0.5);

  // The exact-layer inner bound stays under the narrow outer bound.
  for (double P : {0.1, 1.0, 10.0, 100.0, 1000.0})
    for (double c : {1.5, 2.0, 2.5}) {
      const double out = wb::outer_narrow(P, c, tg2, tg2.mean(), 1.0).rate;
      const double in = wb::inner_superposition_best(P, c, tg2, tg2.mean(),
                                                     wb::PasForm::Exact)
                            .rate;
      CHECK(in <= out + 1e-12);
    }

  // Narrowness violations report the measured probability.
  CHECK_THROWS_WITH_AS(wb::outer_narrow(10.0, 50.0, tg2, tg2.mean(), 1.0),
                       doctest::Contains("narrowness"), std::domain_error);
  CHECK_THROWS_AS(wb::outer_narrow(10.0, 0.5, tg2, tg2.mean(), 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(wb::outer_narrow(10.0, 2.0, make_antipodal(), 0.0, 1.0),
                  std::domain_error);
}

TEST_CASE("fat tail outer bound and depth selection") {
  CHECK(wb::outer_fat(10.0, 3.0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(wb::outer_fat(0.0, 3.0) == doctest::Approx(2.0).epsilon(1e-14));

  const int M = wb::choose_M_fat(10.0, 3.0);
  CHECK(M == 4);
  // Conditions hold at M and fail at M-1.
  const auto d4 = make_fat_tail(3.0, M);
  CHECK(d4.mean() < 1.0);
  CHECK(3.0 * 3.0 * d4.second_moment() <= (M - 1.0) * 11.0);
  CHECK(M >= 2.0 * std::log2(3.0));
  CHECK(M - 1 < 2.0 * std::log2(3.0));  // M=3 fails the depth condition

  CHECK_THROWS_AS(wb::choose_M_fat(10.0, 1.5), std::domain_error);
}

TEST_CASE("tin inner bounds") {
  const auto pm0 = make_point_mass(0.0);
  for (double P : {0.1, 1.0, 10.0}) {
    CHECK(wb::inner_tin_exact(P, 2.0, pm0) ==
          doctest::Approx(0.5 * std::log2(1.0 + P)).epsilon(1e-14));
    CHECK(wb::inner_tin_closed(P, 2.0, 0.0) <=
          wb::inner_tin_exact(P, 2.0, pm0) + 1e-12);
  }

  const auto anti = make_antipodal();
  CHECK(wb::inner_tin_exact(3.0, 0.5, anti) ==
        doctest::Approx(0.88276737318148853).epsilon(1e-13));
  // A^2 is constant for antipodal fading, so exact and closed coincide.
  CHECK(wb::inner_tin_closed(3.0, 0.5, 0.0) ==
        doctest::Approx(0.88276737318148853).epsilon(1e-13));

  // Jensen direction on every family in play.
  for (const auto& d : {make_geometric(0.5), make_fat_tail(3.0, 4),
                        make_strong_set(3.0, 3)}) {
    const double mu = d.mean();
    for (double P : {0.1, 1.0, 10.0, 100.0})
      for (double c : {0.5, 1.0, 3.0})
        CHECK(wb::inner_tin_closed(P, c, mu) <=
              wb::inner_tin_exact(P, c, d) + 1e-12);
  }

  // Fat-tail instance: exact dominates closed and the claimed outer gap
  // holds; the spread of exact over closed is checked by quadrature.
  const auto ft = make_fat_tail(3.0, 4);
  const double exact = wb::inner_tin_exact(100.0, 3.0, ft);
  const double closed = wb::inner_tin_closed(100.0, 3.0, ft.mean());
  CHECK(exact >= closed);
  CHECK(wb::outer_fat(100.0, 3.0) - exact <= 3.0);

  // The literal printed form underestimates the interference power
  // c^2 E[A^2] and therefore overshoots the corrected rate (audit hook).
  CHECK(wb::inner_tin_closed_literal(10.0, 3.0, 0.5) >
        wb::inner_tin_closed(10.0, 3.0, 0.5));
}

TEST_CASE("no evaluator returns a negative rate") {
  const auto grid = verify::log_space(0.01, 1000.0, 9);
  for (double P : grid)
    for (double c : verify::log_space(0.01, 100.0, 9)) {
      CHECK(wb::outer_antipodal(P, c).rate >= 0.0);
      CHECK(wb::inner_antipodal(P, c).rate >= 0.0);
      CHECK(wb::ccdp_outer(P, c).rate >= 0.0);
      if (c > 2.0) CHECK(wb::outer_fat(P, c) >= 0.0);
      CHECK(wb::inner_tin_exact(P, c, make_antipodal()) >= 0.0);
    }
}

TEST_CASE("claimed gaps per theorem") {
  CHECK(wb::claimed_gap(wb::Theorem::Antipodal) == 1.0);
  CHECK(wb::claimed_gap(wb::Theorem::Mode, 3.1) == 3.1);
  CHECK(wb::claimed_gap(wb::Theorem::Strong, 1.2) == doctest::Approx(2.2));
  CHECK(wb::claimed_gap(wb::Theorem::Narrow, 4.0) == doctest::Approx(4.5));
  CHECK(wb::claimed_gap(wb::Theorem::FatTail) == 3.0);
}
