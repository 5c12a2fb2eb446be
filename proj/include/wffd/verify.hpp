#pragma once

#include <string>
#include <vector>

#include "wffd/bounds.hpp"
#include "wffd/fading.hpp"

namespace wffd::verify {

struct SweepGrid {
  std::vector<double> p_values;
  std::vector<double> c_values;
};

std::vector<double> log_space(double lo, double hi, int n);
// P log-spaced 0.01..1000 (50 points), c log-spaced 0.01..100 (50 points).
SweepGrid default_grid();

struct WorstCase {
  double P = 0.0;
  double c = 0.0;
  std::string dist_id;
  double realized = 0.0;
  double allowed = 0.0;
};

struct Certificate {
  std::string claim_id;
  bool pass = true;
  WorstCase worst;
  double runtime_s = 0.0;
  long checked = 0;
  long skipped = 0;
  std::vector<std::string> notes;

  std::string summary() const;
};

// Instance of a theorem's bound pair on one distribution.
struct GapInstance {
  FadingDistribution fading = make_antipodal();
  double m = 0.0;            // pre-coding point / mode where applicable
  double kappa = 1.0;        // spacing or window parameter
  bool tie_c_to_dist = false;  // strong sets: evaluate only at their own c
  double own_c = 0.0;
};

// Default gap-suite instance lists per theorem.
std::vector<GapInstance> default_instances(bounds::Theorem t);

// max over the grid of (outer - inner) vs the claimed gap + 1e-9; instances
// violating a theorem precondition at a grid point are skipped and counted.
Certificate gap_suite(bounds::Theorem t, const SweepGrid& grid,
                      const std::vector<GapInstance>& instances);
Certificate gap_suite(bounds::Theorem t, const SweepGrid& grid);

// Outer evaluators must be nonincreasing along every c-ascending slice
// (tolerance 1e-12). evaluator_id one of: outer_antipodal, outer_symmetric,
// ccdp_outer, outer_fat, outer_mode, outer_strong, outer_narrow.
Certificate monotonicity_suite(const std::string& evaluator_id,
                               const SweepGrid& grid);

// Conditional-entropy increment of the recursive strong-fading converse:
// 0.5*log2(2 (c^2 sum_{j<=i} D_j^2 + 2) / (c^2 sum_{j<=i-1} D_j^2 + 2)),
// i is 1-based.
double recursion_term(const std::vector<double>& deltas, double c, int i);

struct StrongIndexCheck {
  int index = 0;
  bool spacing_ok = true;
  bool entropy_ok = true;
  double entropy_margin = 0.0;  // recursion term minus 0.5*log2(c^2/2)
};

struct StrongConditionReport {
  bool pass = true;  // spacing and entropy inequalities at every index
  bool threshold_ok = true;  // informational: a_1 >= 1/(c-1)
  double threshold_margin = 0.0;
  std::vector<StrongIndexCheck> indices;
};

// Checks, per index, the spacing condition a_{i+1} >= c a_i and the
// variance-ratio form of the converse's entropy inequality
// (increment >= 0.5*log2(c^2/2)). The a_1 >= 1/(c-1) threshold is reported
// but not fatal: the entropy inequality is what the converse consumes.
StrongConditionReport strong_condition_check(const FadingDistribution& fading,
                                             double c);

// 0.5*log2(c^2 step^2 + 2): capacity loss of replacing the fading by its
// step-quantized version.
double quantization_penalty(double c, double step);

// Monte Carlo vs quadrature for every registered integrand/distribution
// combination, seeds [0, n_seeds); each check must land within 3 stderr.
Certificate mc_suite(std::uint64_t base_seed = 0, int n_seeds = 5,
                     std::size_t n_samples = 100000);

// Tree-quantizer invariants for c in {2,3}, M in {2,3,4}: level masses,
// exact path ratios, mean preservation.
Certificate tree_suite();

// Strong-fading condition checks on the worked examples (pass, boundary
// pass, constructed violation detected).
Certificate strong_examples_suite();

// Everything: gap suites, monotonicity suites, mc, tree, strong examples.
std::vector<Certificate> run_all_suites(const SweepGrid& grid,
                                        std::uint64_t seed = 0);

}  // namespace wffd::verify
