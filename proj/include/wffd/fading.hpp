#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace wffd {

enum class FadingFamily { Discrete, LogUniform, TruncatedDensity };
enum class DensityId { TruncatedGaussian, Uniform };

struct FadingPoint {
  double value;
  double prob;
};

struct Moments {
  double mean;
  double second_moment;
  double variance;
};

// Immutable fading law A. Moments are computed once at construction
// (exact sums for Discrete, adaptive quadrature for continuous families)
// and cached.
class FadingDistribution {
 public:
  FadingFamily family() const { return family_; }
  bool is_discrete() const { return family_ == FadingFamily::Discrete; }

  const std::vector<FadingPoint>& points() const;  // Discrete only
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  DensityId density_id() const;  // TruncatedDensity only
  // TruncatedGaussian parameters (center, halfwidth, sigma).
  const std::vector<double>& density_params() const { return params_; }

  double mean() const { return mean_; }
  double second_moment() const { return second_moment_; }
  double variance() const { return variance_; }

  double density(double a) const;  // continuous families
  double cdf(double a) const;      // continuous families
  // Point mass at value m (Discrete: exact-match atom; continuous: 0).
  double prob_at(double m) const;
  // Pr[|A - m| <= halfwidth].
  double prob_window(double m, double halfwidth) const;

  // E[f(A)]. LogUniform integrates in log-coordinates so that very wide
  // supports stay well-conditioned.
  double expect(const std::function<double(double)>& f) const;
  // Same, with additional interior split points for integrands that have
  // integrable singularities (e.g. log|a| terms).
  double expect_split(const std::function<double(double)>& f,
                      const std::vector<double>& splits) const;

  std::string id() const { return id_; }

 private:
  FadingDistribution() = default;
  friend FadingDistribution make_discrete(const std::vector<double>&,
                                          const std::vector<double>&);
  friend FadingDistribution make_antipodal();
  friend FadingDistribution make_point_mass(double);
  friend FadingDistribution make_geometric(double);
  friend FadingDistribution make_strong_set(double, int);
  friend FadingDistribution make_log_uniform(double, double);
  friend FadingDistribution make_fat_tail(double, int);
  friend FadingDistribution make_truncated_gaussian(double, double, double);
  friend FadingDistribution make_uniform_density(double, double);
  friend FadingDistribution scale_fading(const FadingDistribution&, double);

  void finalize_moments();

  FadingFamily family_ = FadingFamily::Discrete;
  std::vector<FadingPoint> points_;
  double lo_ = 0.0, hi_ = 0.0;
  DensityId density_ = DensityId::Uniform;
  std::vector<double> params_;
  double mean_ = 0.0, second_moment_ = 0.0, variance_ = 0.0;
  std::string id_;
};

// Constructors for the fading families used by the bounds.
FadingDistribution make_antipodal();
FadingDistribution make_geometric(double q);        // q in [0.5, 1)
FadingDistribution make_strong_set(double c, int M);  // c > 1, M >= 2
FadingDistribution make_fat_tail(double c, int M);    // c > 1, M >= 2
FadingDistribution make_point_mass(double m);
FadingDistribution make_discrete(const std::vector<double>& values,
                                 const std::vector<double>& probs);
FadingDistribution make_log_uniform(double lo, double hi);
FadingDistribution make_truncated_gaussian(double center, double halfwidth,
                                           double sigma);
FadingDistribution make_uniform_density(double lo, double hi);

// A -> factor * A.
FadingDistribution scale_fading(const FadingDistribution& f, double factor);

// Unit-variance normalizer of the fat-tail support [kappa*c^-M, kappa].
double fat_tail_kappa(double c, int M);

struct ChannelParams {
  double power = 0.0;  // P >= 0
  double gain = 1.0;   // c > 0
  bool canonical = false;
};

// Recomputes moments from the definition (not from the cache).
Moments moments(const FadingDistribution& fading);

// Folds |gain|, sigma_A and sigma_S into a canonical gain c and rescales the
// fading to unit variance. The state is implicitly zero-mean unit-variance
// afterwards.
std::pair<double, FadingDistribution> canonicalize(
    double gain_raw, const FadingDistribution& fading, double state_mean,
    double state_var);

// Mean-preserving uniform quantization with width-`step` cells centered at
// mean + k*step; cell values are conditional means, cells with mass < 1e-14
// are dropped.
FadingDistribution quantize_uniform(const FadingDistribution& fading,
                                    double step);

struct TreeNode {
  long long label;  // level-k labels run over [c^(k-1), c^k - 1]
  double value;
  double prob;
};

struct QuantizationTree {
  int branching = 2;  // c
  int depth = 2;      // M
  double kappa = 0.0;
  std::vector<std::vector<TreeNode>> levels;   // levels[k-1] is level k
  std::vector<std::vector<double>> paths;      // root-to-leaf value sequences
  std::vector<std::vector<long long>> path_labels;

  FadingDistribution flatten() const;  // Discrete projection of all nodes
};

// Coarse/fine tree quantizer of the fat-tail law with integer branching.
// With per_cell_values = false every level-k node carries E[A | A in I_k]
// (the reading under which path entries have exact ratio c); with true each
// node gets the conditional mean of its own equal-probability fine cell.
QuantizationTree quantize_tree(int c, int M, bool per_cell_values = false);

}  // namespace wffd
