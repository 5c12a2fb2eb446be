#include "wffd/fading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wffd/numerics.hpp"

namespace wffd {

namespace {

constexpr double kSimplexTol = 1e-12;
constexpr double kDropMass = 1e-14;
constexpr double kGeomTailMass = 1e-12;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

const std::vector<FadingPoint>& FadingDistribution::points() const {
  if (family_ != FadingFamily::Discrete)
    throw std::logic_error("points(): distribution is not Discrete");
  return points_;
}

DensityId FadingDistribution::density_id() const {
  if (family_ != FadingFamily::TruncatedDensity)
    throw std::logic_error("density_id(): distribution is not TruncatedDensity");
  return density_;
}

double FadingDistribution::density(double a) const {
  switch (family_) {
    case FadingFamily::Discrete:
      throw std::logic_error("density(): distribution is Discrete");
    case FadingFamily::LogUniform: {
      if (a < lo_ || a > hi_) return 0.0;
      return 1.0 / (std::log(hi_ / lo_) * a);
    }
    case FadingFamily::TruncatedDensity: {
      if (a < lo_ || a > hi_) return 0.0;
      if (density_ == DensityId::Uniform) return 1.0 / (hi_ - lo_);
      const double center = params_[0], sigma = params_[2];
      const double z = (a - center) / sigma;
      const double zl = (lo_ - center) / sigma, zh = (hi_ - center) / sigma;
      const double mass = normal_cdf(zh) - normal_cdf(zl);
      return normal_pdf(z) / (sigma * mass);
    }
  }
  return 0.0;
}

double FadingDistribution::cdf(double a) const {
  if (family_ == FadingFamily::Discrete)
    throw std::logic_error("cdf(): closed-form cdf is for continuous families");
  if (a <= lo_) return 0.0;
  if (a >= hi_) return 1.0;
  if (family_ == FadingFamily::LogUniform)
    return std::log(a / lo_) / std::log(hi_ / lo_);
  if (density_ == DensityId::Uniform) return (a - lo_) / (hi_ - lo_);
  const double center = params_[0], sigma = params_[2];
  const double zl = (lo_ - center) / sigma, zh = (hi_ - center) / sigma;
  const double mass = normal_cdf(zh) - normal_cdf(zl);
  return (normal_cdf((a - center) / sigma) - normal_cdf(zl)) / mass;
}

double FadingDistribution::prob_at(double m) const {
  if (family_ != FadingFamily::Discrete) return 0.0;
  const double tol = 1e-12 * std::max(1.0, std::abs(m));
  double p = 0.0;
  for (const auto& pt : points_)
    if (std::abs(pt.value - m) <= tol) p += pt.prob;
  return p;
}

double FadingDistribution::prob_window(double m, double halfwidth) const {
  if (halfwidth < 0.0) throw std::domain_error("prob_window: halfwidth < 0");
  if (family_ == FadingFamily::Discrete) {
    double p = 0.0;
    const double w = halfwidth * (1.0 + 1e-12) + 1e-300;
    for (const auto& pt : points_)
      if (std::abs(pt.value - m) <= w) p += pt.prob;
    return p;
  }
  const double a = std::max(lo_, m - halfwidth);
  const double b = std::min(hi_, m + halfwidth);
  if (b <= a) return 0.0;
  return cdf(b) - cdf(a);
}

double FadingDistribution::expect(const std::function<double(double)>& f) const {
  return expect_split(f, {});
}

double FadingDistribution::expect_split(const std::function<double(double)>& f,
                                        const std::vector<double>& splits) const {
  if (family_ == FadingFamily::Discrete) {
    double acc = 0.0;
    for (const auto& pt : points_) {
      if (pt.prob <= 0.0) continue;
      const double v = f(pt.value);
      if (std::isinf(v)) return v;
      acc += pt.prob * v;
    }
    return acc;
  }
  std::vector<double> cuts{lo_, hi_};
  for (double s : splits)
    if (s > lo_ && s < hi_) cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    if (family_ == FadingFamily::LogUniform) {
      const double inv_len = 1.0 / std::log(hi_ / lo_);
      acc += integrate([&](double t) { return f(std::exp(t)) * inv_len; },
                       std::log(a), std::log(b));
    } else if (splits.empty()) {
      acc += integrate([&](double x) { return f(x) * density(x); }, a, b);
    } else {
      acc += integrate_singular([&](double x) { return f(x) * density(x); }, a, b);
    }
  }
  return acc;
}

void FadingDistribution::finalize_moments() {
  if (family_ == FadingFamily::Discrete) {
    double m1 = 0.0, m2 = 0.0;
    for (const auto& pt : points_) {
      m1 += pt.prob * pt.value;
      m2 += pt.prob * pt.value * pt.value;
    }
    mean_ = m1;
    second_moment_ = m2;
  } else {
    mean_ = expect([](double a) { return a; });
    second_moment_ = expect([](double a) { return a * a; });
  }
  variance_ = second_moment_ - mean_ * mean_;
}

Moments moments(const FadingDistribution& fading) {
  double m1, m2;
  if (fading.is_discrete()) {
    m1 = m2 = 0.0;
    for (const auto& pt : fading.points()) {
      m1 += pt.prob * pt.value;
      m2 += pt.prob * pt.value * pt.value;
    }
  } else {
    m1 = fading.expect([](double a) { return a; });
    m2 = fading.expect([](double a) { return a * a; });
  }
  return Moments{m1, m2, m2 - m1 * m1};
}

FadingDistribution make_discrete(const std::vector<double>& values,
                                 const std::vector<double>& probs) {
  if (values.empty() || values.size() != probs.size())
    throw std::domain_error("make_discrete: empty support or size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw std::domain_error("make_discrete: non-finite support value");
    if (probs[i] < 0.0)
      throw std::domain_error("make_discrete: negative probability");
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw std::domain_error("make_discrete: probabilities sum to " + fmt(sum));

  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  FadingDistribution d;
  d.family_ = FadingFamily::Discrete;
  for (std::size_t i : order) {
    if (!d.points_.empty() && values[i] == d.points_.back().value)
      d.points_.back().prob += probs[i];
    else
      d.points_.push_back({values[i], probs[i]});
  }
  d.lo_ = d.points_.front().value;
  d.hi_ = d.points_.back().value;
  d.finalize_moments();
  d.id_ = "discrete(n=" + std::to_string(d.points_.size()) + ")";
  return d;
}

FadingDistribution make_antipodal() {
  auto d = make_discrete({-1.0, 1.0}, {0.5, 0.5});
  d.id_ = "antipodal";
  return d;
}

FadingDistribution make_point_mass(double m) {
  auto d = make_discrete({m}, {1.0});
  d.id_ = "point_mass(" + fmt(m) + ")";
  return d;
}

FadingDistribution make_geometric(double q) {
  if (!(q >= 0.5 && q < 1.0))
    throw std::domain_error("make_geometric: q must be in [0.5, 1)");
  const double qbar = 1.0 - q;
  const double step = q / std::sqrt(qbar);
  // Truncate at the smallest K with tail mass qbar^(K+1) < 1e-12 and fold the
  // tail into the last atom.
  int K = 0;
  double tail = qbar;  // mass of {k > K}
  while (tail >= kGeomTailMass) {
    ++K;
    tail *= qbar;
    if (K > 100000)
      throw std::runtime_error("make_geometric: truncation did not converge");
  }
  std::vector<double> values(K + 1), probs(K + 1);
  double acc = 0.0;
  double pk = q;
  for (int k = 0; k < K; ++k) {
    values[k] = k * step;
    probs[k] = pk;
    acc += pk;
    pk *= qbar;
  }
  values[K] = K * step;
  probs[K] = 1.0 - acc;  // q*qbar^K plus the folded tail
  auto d = make_discrete(values, probs);
  d.id_ = "geometric(q=" + fmt(q) + ")";
  return d;
}

FadingDistribution make_strong_set(double c, int M) {
  if (!(c > 1.0)) throw std::domain_error("make_strong_set: c must be > 1");
  if (M < 2) throw std::domain_error("make_strong_set: M must be >= 2");
  if (M > 64) throw std::domain_error("make_strong_set: M too large");
  // Unit-variance normalizer Delta = 1/sqrt(V) for the set {Delta*c^k}.
  double m1 = 0.0, m2 = 0.0, pw = 1.0;
  for (int k = 0; k < M; ++k) {
    m1 += pw;
    m2 += pw * pw;
    pw *= c;
  }
  m1 /= M;
  m2 /= M;
  const double V = m2 - m1 * m1;
  if (!(V > 0.0) || !std::isfinite(V))
    throw std::runtime_error("make_strong_set: degenerate variance");
  const double delta = 1.0 / std::sqrt(V);
  std::vector<double> values(M), probs(M, 1.0 / M);
  double v = delta;
  for (int k = 0; k < M; ++k) {
    values[k] = v;
    v *= c;
  }
  probs[M - 1] = 1.0 - (M - 1) * (1.0 / M);
  auto d = make_discrete(values, probs);
  d.id_ = "strong_set(c=" + fmt(c) + ",M=" + std::to_string(M) + ")";
  return d;
}

double fat_tail_kappa(double c, int M) {
  if (!(c > 1.0)) throw std::domain_error("fat_tail_kappa: c must be > 1");
  if (M < 2) throw std::domain_error("fat_tail_kappa: M must be >= 2");
  // kappa = 2 M log(c) c^M / sqrt(2 M log(c)(c^(2M)-1) - 4 (c^M-1)^2),
  // evaluated with numerator and denominator divided by c^M so that large
  // c^M never overflows.
  const double lc = std::log(c);
  const double cmM = std::pow(c, -static_cast<double>(M));       // c^-M
  const double cm2M = cmM * cmM;                                 // c^-2M
  const double one_minus = 1.0 - cmM;
  const double radicand = 2.0 * M * lc * (1.0 - cm2M) - 4.0 * one_minus * one_minus;
  if (!(radicand > 0.0))
    throw std::runtime_error("make_fat_tail: kappa radicand nonpositive (" +
                             fmt(radicand) + ")");
  return 2.0 * M * lc / std::sqrt(radicand);
}

FadingDistribution make_log_uniform(double lo, double hi) {
  if (!(lo > 0.0 && hi > lo))
    throw std::domain_error("make_log_uniform: need 0 < lo < hi");
  FadingDistribution d;
  d.family_ = FadingFamily::LogUniform;
  d.lo_ = lo;
  d.hi_ = hi;
  d.finalize_moments();
  d.id_ = "log_uniform(" + fmt(lo) + "," + fmt(hi) + ")";
  return d;
}

FadingDistribution make_fat_tail(double c, int M) {
  const double kappa = fat_tail_kappa(c, M);
  const double lo = kappa * std::pow(c, -static_cast<double>(M));
  if (!(lo > 1e-290))
    throw std::runtime_error(
        "make_fat_tail: support lower edge underflows for c=" + fmt(c) +
        ", M=" + std::to_string(M));
  auto d = make_log_uniform(lo, kappa);
  d.id_ = "fat_tail(c=" + fmt(c) + ",M=" + std::to_string(M) + ")";
  return d;
}

FadingDistribution make_truncated_gaussian(double center, double halfwidth,
                                           double sigma) {
  if (!(halfwidth > 0.0))
    throw std::domain_error("make_truncated_gaussian: halfwidth must be > 0");
  if (!(sigma > 0.0))
    throw std::domain_error("make_truncated_gaussian: sigma must be > 0");
  FadingDistribution d;
  d.family_ = FadingFamily::TruncatedDensity;
  d.density_ = DensityId::TruncatedGaussian;
  d.params_ = {center, halfwidth, sigma};
  d.lo_ = center - halfwidth;
  d.hi_ = center + halfwidth;
  d.finalize_moments();
  d.id_ = "truncated_gaussian(" + fmt(center) + "," + fmt(halfwidth) + "," +
          fmt(sigma) + ")";
  return d;
}

FadingDistribution make_uniform_density(double lo, double hi) {
  if (!(hi > lo)) throw std::domain_error("make_uniform_density: need lo < hi");
  FadingDistribution d;
  d.family_ = FadingFamily::TruncatedDensity;
  d.density_ = DensityId::Uniform;
  d.params_ = {0.5 * (lo + hi), 0.5 * (hi - lo)};
  d.lo_ = lo;
  d.hi_ = hi;
  d.finalize_moments();
  d.id_ = "uniform(" + fmt(lo) + "," + fmt(hi) + ")";
  return d;
}

FadingDistribution scale_fading(const FadingDistribution& f, double factor) {
  if (!(factor > 0.0)) throw std::domain_error("scale_fading: factor must be > 0");
  if (f.is_discrete()) {
    std::vector<double> values, probs;
    values.reserve(f.points().size());
    for (const auto& pt : f.points()) {
      values.push_back(pt.value * factor);
      probs.push_back(pt.prob);
    }
    return make_discrete(values, probs);
  }
  if (f.family() == FadingFamily::LogUniform)
    return make_log_uniform(f.support_lo() * factor, f.support_hi() * factor);
  if (f.density_id() == DensityId::Uniform)
    return make_uniform_density(f.support_lo() * factor, f.support_hi() * factor);
  const auto& p = f.density_params();
  return make_truncated_gaussian(p[0] * factor, p[1] * factor, p[2] * factor);
}

std::pair<double, FadingDistribution> canonicalize(
    double gain_raw, const FadingDistribution& fading, double /*state_mean*/,
    double state_var) {
  if (!(state_var > 0.0))
    throw std::domain_error("canonicalize: state variance must be > 0");
  const double var_a = fading.variance();
  if (!(var_a > 0.0))
    throw std::domain_error(
        "canonicalize: degenerate fading (zero variance); treat as the "
        "no-fading case");
  const double sigma_a = std::sqrt(var_a);
  const double c = std::abs(gain_raw) * sigma_a * std::sqrt(state_var);
  return {c, scale_fading(fading, 1.0 / sigma_a)};
}

namespace {

// Closed-form partial mean over [a, b] per family (numerator of E[A | a,b]).
double partial_mean(const FadingDistribution& f, double a, double b) {
  switch (f.family()) {
    case FadingFamily::Discrete:
      throw std::logic_error("partial_mean: continuous families only");
    case FadingFamily::LogUniform:
      return (b - a) / std::log(f.support_hi() / f.support_lo());
    case FadingFamily::TruncatedDensity: {
      if (f.density_id() == DensityId::Uniform)
        return 0.5 * (b * b - a * a) / (f.support_hi() - f.support_lo());
      const auto& p = f.density_params();
      const double center = p[0], sigma = p[2];
      const double zl = (f.support_lo() - center) / sigma;
      const double zh = (f.support_hi() - center) / sigma;
      const double mass = normal_cdf(zh) - normal_cdf(zl);
      const double za = (a - center) / sigma, zb = (b - center) / sigma;
      return (center * (normal_cdf(zb) - normal_cdf(za)) +
              sigma * (normal_pdf(za) - normal_pdf(zb))) /
             mass;
    }
  }
  return 0.0;
}

}  // namespace

FadingDistribution quantize_uniform(const FadingDistribution& fading,
                                    double step) {
  if (fading.is_discrete())
    throw std::domain_error("quantize_uniform: fading must be continuous");
  if (!(step > 0.0)) throw std::domain_error("quantize_uniform: step must be > 0");
  const double mu = fading.mean();
  const double lo = fading.support_lo(), hi = fading.support_hi();
  const long long kmin = static_cast<long long>(std::floor((lo - mu) / step + 0.5));
  const long long kmax = static_cast<long long>(std::floor((hi - mu) / step + 0.5));
  std::vector<double> values, probs;
  double kept = 0.0;
  for (long long k = kmin; k <= kmax; ++k) {
    const double a = std::max(lo, mu + k * step - 0.5 * step);
    const double b = std::min(hi, mu + k * step + 0.5 * step);
    if (!(b > a)) continue;
    const double mass = fading.cdf(b) - fading.cdf(a);
    if (mass < kDropMass) continue;
    values.push_back(partial_mean(fading, a, b) / mass);
    probs.push_back(mass);
    kept += mass;
  }
  if (values.empty())
    throw std::runtime_error("quantize_uniform: all cells below mass threshold");
  // Dropped cells hold < 1e-14 each; fold the residual into the heaviest cell
  // so the simplex stays exact without disturbing the mean beyond 1e-12.
  std::size_t heaviest = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[heaviest]) heaviest = i;
  probs[heaviest] += 1.0 - kept;
  return make_discrete(values, probs);
}

QuantizationTree quantize_tree(int c, int M, bool per_cell_values) {
  if (c < 2) throw std::domain_error("quantize_tree: integer c must be >= 2");
  if (M < 2) throw std::domain_error("quantize_tree: M must be >= 2");
  const double leaves = (c - 1.0) * std::pow(static_cast<double>(c), M - 1);
  if (leaves > 1e6) throw std::domain_error("quantize_tree: tree too large");

  QuantizationTree tree;
  tree.branching = c;
  tree.depth = M;
  tree.kappa = fat_tail_kappa(static_cast<double>(c), M);
  const double lc = std::log(static_cast<double>(c));

  // Level k covers the coarse interval I_k = [kappa/c^k, kappa/c^(k-1)) and
  // holds (c-1)c^(k-1) nodes of probability 1/(M c^(k-1)(c-1)) each.
  tree.levels.resize(M);
  long long level_count = c - 1;
  long long first_label = 1;
  for (int k = 1; k <= M; ++k) {
    const double cell_lo = tree.kappa * std::pow(static_cast<double>(c), -k);
    const double level_value = cell_lo * (c - 1.0) / lc;  // E[A | A in I_k]
    const double node_prob = 1.0 / (static_cast<double>(M) * level_count);
    auto& nodes = tree.levels[k - 1];
    nodes.resize(level_count);
    const double rho = std::pow(static_cast<double>(c),
                                1.0 / static_cast<double>(level_count));
    for (long long j = 0; j < level_count; ++j) {
      double value = level_value;
      if (per_cell_values) {
        // Equal-probability fine cells of I_k are geometric slices; the
        // conditional mean of slice j is (b - a)/log(b/a).
        const double a = cell_lo * std::pow(rho, static_cast<double>(j));
        const double b = a * rho;
        value = (b - a) / std::log(b / a);
      }
      nodes[j] = TreeNode{first_label + j, value, node_prob};
    }
    first_label *= c;
    level_count *= c;
  }
  // first_label is now c^M; leaves are labelled [c^(M-1), c^M - 1] and the
  // ancestor of leaf m at level k is m / c^(M-k).
  const long long leaf_lo = first_label / c;
  const long long leaf_hi = first_label - 1;
  tree.paths.reserve(leaf_hi - leaf_lo + 1);
  tree.path_labels.reserve(leaf_hi - leaf_lo + 1);
  for (long long m = leaf_lo; m <= leaf_hi; ++m) {
    std::vector<double> vals(M);
    std::vector<long long> labels(M);
    long long node = m;
    for (int k = M; k >= 1; --k) {
      long long level_first = 1;
      for (int i = 1; i < k; ++i) level_first *= c;
      vals[k - 1] = tree.levels[k - 1][node - level_first].value;
      labels[k - 1] = node;
      node /= c;
    }
    tree.paths.push_back(std::move(vals));
    tree.path_labels.push_back(std::move(labels));
  }
  return tree;
}

FadingDistribution QuantizationTree::flatten() const {
  std::vector<double> values, probs;
  for (const auto& level : levels)
    for (const auto& node : level) {
      values.push_back(node.value);
      probs.push_back(node.prob);
    }
  return make_discrete(values, probs);
}

}  // namespace wffd
