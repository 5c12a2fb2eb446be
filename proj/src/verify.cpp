#include "wffd/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "wffd/gp_oracle.hpp"
#include "wffd/numerics.hpp"

namespace wffd::verify {

namespace {

constexpr double kGapSlack = 1e-9;
constexpr double kMonoTol = 1e-12;

using bounds::Theorem;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

}  // namespace

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo && n >= 1))
    throw std::domain_error("log_space: need 0 < lo < hi, n >= 1");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
  return out;
}

SweepGrid default_grid() {
  SweepGrid g;
  g.p_values = log_space(0.01, 1000.0, 50);
  g.c_values = log_space(0.01, 100.0, 50);
  return g;
}

std::string Certificate::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << claim_id << ": " << (pass ? "PASS" : "FAIL") << " worst realized "
     << worst.realized << " vs allowed " << worst.allowed << " at (P="
     << worst.P << ", c=" << worst.c << ", dist=" << worst.dist_id
     << "); checked=" << checked << " skipped=" << skipped << " runtime="
     << runtime_s << "s";
  for (const auto& n : notes) os << "\n  note: " << n;
  return os.str();
}

std::vector<GapInstance> default_instances(Theorem t) {
  std::vector<GapInstance> out;
  switch (t) {
    case Theorem::Antipodal:
    case Theorem::SymmetricCont:
    case Theorem::CCDP: {
      GapInstance gi;
      gi.fading = make_antipodal();
      gi.m = 1.0;
      out.push_back(gi);
      break;
    }
    case Theorem::Mode: {
      for (double q : {0.5, 0.75, 0.9}) {
        GapInstance gi;
        gi.fading = make_geometric(q);
        gi.m = 0.0;
        out.push_back(gi);
      }
      GapInstance gi;
      gi.fading = make_antipodal();
      gi.m = 1.0;
      out.push_back(gi);
      break;
    }
    case Theorem::Strong: {
      for (double c : log_space(2.0, 10.0, 9)) {
        if (c <= 2.0) continue;  // open interval (2, 10]
        for (int M = 3; M <= 8; ++M) {
          GapInstance gi;
          gi.fading = make_strong_set(c, M);
          gi.m = gi.fading.mean();
          gi.tie_c_to_dist = true;
          gi.own_c = c;
          out.push_back(gi);
        }
      }
      break;
    }
    case Theorem::Narrow: {
      const double params[][3] = {
          {0.5, 0.4, 0.2}, {1.0, 1.0, 0.15}, {1.0, 1.0, 0.2}, {2.0, 0.6, 0.25},
          {0.0, 0.3, 0.15}};
      for (const auto& p : params) {
        GapInstance gi;
        gi.fading = make_truncated_gaussian(p[0], p[1], p[2]);
        gi.m = gi.fading.mean();
        out.push_back(gi);
      }
      break;
    }
    case Theorem::FatTail:
      break;  // instances are built per grid point from choose_M_fat
  }
  return out;
}

namespace {

struct GapPoint {
  bool valid = false;
  double inner = 0.0, outer = 0.0, claim = 0.0;
  std::string dist_id;
};

GapPoint eval_gap_point(Theorem t, double P, double c, const GapInstance& inst,
                        std::map<std::pair<double, int>, FadingDistribution>*
                            fat_cache) {
  GapPoint pt;
  switch (t) {
    case Theorem::Antipodal: {
      pt.outer = bounds::outer_antipodal(P, c).rate;
      pt.inner = bounds::inner_antipodal(P, c).rate;
      pt.claim = 1.0;
      pt.dist_id = "antipodal";
      pt.valid = true;
      break;
    }
    case Theorem::Mode: {
      const double q = inst.fading.prob_at(inst.m);
      if (!(q >= 0.5 - 1e-12)) break;
      pt.outer = bounds::outer_mode(P, c, inst.fading, inst.m).rate;
      pt.inner = bounds::inner_mode(P, c, inst.fading, inst.m).rate;
      pt.claim = bounds::gap_terms_mode(inst.fading, inst.m, c).g_m_prime;
      pt.dist_id = inst.fading.id();
      pt.valid = std::isfinite(pt.claim);
      break;
    }
    case Theorem::Strong: {
      const double cc = inst.tie_c_to_dist ? inst.own_c : c;
      if (!(cc > 2.0)) break;
      try {
        pt.outer = bounds::outer_strong(P, cc, inst.fading, 1.0).rate;
      } catch (const std::domain_error&) {
        break;  // spacing precondition fails at this c
      }
      pt.inner = bounds::inner_superposition_best(P, cc, inst.fading, inst.m,
                                                  bounds::PasForm::Simplified)
                     .rate;
      pt.claim = bounds::g_s(inst.fading, 1.0) + 1.0;
      pt.dist_id = inst.fading.id();
      pt.valid = true;
      break;
    }
    case Theorem::Narrow: {
      if (!(c > 1.0)) break;
      const double window = inst.kappa / c;
      if (!(inst.fading.prob_window(inst.m, window) >= 0.5)) break;
      const auto no = bounds::outer_narrow(P, c, inst.fading, inst.m, inst.kappa);
      pt.outer = no.rate;
      pt.inner = bounds::inner_superposition_best(P, c, inst.fading, inst.m,
                                                  bounds::PasForm::Exact)
                     .rate;
      pt.claim = no.g_m + 0.5;
      pt.dist_id = inst.fading.id();
      pt.valid = true;
      break;
    }
    case Theorem::FatTail: {
      if (!(c > 2.0)) break;
      int M = 0;
      try {
        M = bounds::choose_M_fat(P, c);
      } catch (const std::runtime_error&) {
        break;
      }
      try {
        auto key = std::make_pair(c, M);
        auto it = fat_cache->find(key);
        if (it == fat_cache->end())
          it = fat_cache->emplace(key, make_fat_tail(c, M)).first;
        pt.inner = bounds::inner_tin_exact(P, c, it->second);
        pt.dist_id = it->second.id();
      } catch (const std::runtime_error&) {
        break;  // support underflow at extreme (P, c) corners
      }
      pt.outer = bounds::outer_fat(P, c);
      pt.claim = 3.0;
      pt.valid = true;
      break;
    }
    default:
      throw std::domain_error("gap_suite: no gap certificate for theorem " +
                              bounds::theorem_name(t));
  }
  return pt;
}

}  // namespace

Certificate gap_suite(Theorem t, const SweepGrid& grid,
                      const std::vector<GapInstance>& instances) {
  if (t == Theorem::CCDP || t == Theorem::SymmetricCont)
    throw std::domain_error("gap_suite: no gap certificate for theorem " +
                            bounds::theorem_name(t));
  if (grid.p_values.empty() || grid.c_values.empty())
    throw std::domain_error("gap_suite: empty grid");
  if (instances.empty() && t != Theorem::FatTail && t != Theorem::Antipodal)
    throw std::domain_error("gap_suite: no applicable instances");

  const double t0 = now_seconds();
  Certificate cert;
  cert.claim_id = "gap/" + bounds::theorem_name(t);

  std::vector<GapInstance> insts = instances;
  if (insts.empty()) insts.push_back(GapInstance{});  // FatTail/Antipodal

  std::map<std::pair<double, int>, FadingDistribution> fat_cache;
  double worst_excess = -1e300;
  long sandwich_violations = 0;
  double worst_sandwich = 0.0;
  bool have_point = false;
  for (const auto& inst : insts) {
    for (double c : grid.c_values) {
      if (inst.tie_c_to_dist && c != grid.c_values.front()) continue;
      for (double P : grid.p_values) {
        GapPoint pt;
        try {
          pt = eval_gap_point(t, P, c, inst, &fat_cache);
        } catch (const std::domain_error&) {
          pt.valid = false;
        }
        if (!pt.valid) {
          ++cert.skipped;
          continue;
        }
        ++cert.checked;
        const double gap = pt.outer - pt.inner;
        if (gap < -1e-12) {
          ++sandwich_violations;
          worst_sandwich = std::min(worst_sandwich, gap);
        }
        const double excess = gap - pt.claim;
        if (!have_point || excess > worst_excess) {
          worst_excess = excess;
          cert.worst = {P, inst.tie_c_to_dist ? inst.own_c : c, pt.dist_id,
                        gap, pt.claim};
          have_point = true;
        }
      }
    }
  }
  if (!have_point) {
    cert.pass = false;
    cert.notes.push_back("no applicable grid point");
  } else {
    cert.pass = worst_excess <= kGapSlack;
  }
  if (sandwich_violations > 0) {
    std::ostringstream os;
    os << sandwich_violations
       << " grid points have inner > outer (worst by " << -worst_sandwich
       << " bpcu); the claimed outer bound is exceeded by an achievable rate "
          "there";
    cert.notes.push_back(os.str());
  }
  cert.runtime_s = now_seconds() - t0;
  return cert;
}

Certificate gap_suite(Theorem t, const SweepGrid& grid) {
  return gap_suite(t, grid, default_instances(t));
}

namespace {

struct Slice {
  std::string dist_id;
  std::vector<double> c_values;
  std::function<double(double P, double c)> outer;
};

std::vector<Slice> monotonicity_slices(const std::string& id,
                                       const SweepGrid& grid) {
  std::vector<Slice> slices;
  if (id == "outer_antipodal" || id == "outer_symmetric") {
    Slice s;
    s.dist_id = id;
    s.c_values = grid.c_values;
    s.outer = [](double P, double c) {
      return bounds::outer_antipodal(P, c).rate;
    };
    slices.push_back(std::move(s));
  } else if (id == "ccdp_outer") {
    Slice s;
    s.dist_id = id;
    s.c_values = grid.c_values;
    s.outer = [](double P, double c) { return bounds::ccdp_outer(P, c).rate; };
    slices.push_back(std::move(s));
  } else if (id == "outer_fat") {
    Slice s;
    s.dist_id = id;
    for (double c : grid.c_values)
      if (c > 2.0) s.c_values.push_back(c);
    s.outer = [](double P, double c) { return bounds::outer_fat(P, c); };
    if (s.c_values.size() >= 2) slices.push_back(std::move(s));
  } else if (id == "outer_mode") {
    for (const auto& inst : default_instances(Theorem::Mode)) {
      Slice s;
      s.dist_id = inst.fading.id();
      s.c_values = grid.c_values;
      auto fading = inst.fading;
      const double m = inst.m;
      s.outer = [fading, m](double P, double c) {
        return bounds::outer_mode(P, c, fading, m).rate;
      };
      slices.push_back(std::move(s));
    }
  } else if (id == "outer_strong") {
    for (int M : {3, 5, 8}) {
      auto fading = make_strong_set(10.0, M);
      Slice s;
      s.dist_id = fading.id();
      // Exact-ratio-10 sets satisfy the spacing condition for any c <= 10.
      for (double c : grid.c_values)
        if (c > 2.0 && c <= 10.0) s.c_values.push_back(c);
      s.outer = [fading](double P, double c) {
        return bounds::outer_strong(P, c, fading, 1.0).rate;
      };
      if (s.c_values.size() >= 2) slices.push_back(std::move(s));
    }
  } else if (id == "outer_narrow") {
    for (const auto& inst : default_instances(Theorem::Narrow)) {
      Slice s;
      s.dist_id = inst.fading.id();
      auto fading = inst.fading;
      const double m = inst.m;
      for (double c : grid.c_values)
        if (c > 1.0 && fading.prob_window(m, 1.0 / c) >= 0.5)
          s.c_values.push_back(c);
      s.outer = [fading, m](double P, double c) {
        return bounds::outer_narrow(P, c, fading, m, 1.0).rate;
      };
      if (s.c_values.size() >= 2) slices.push_back(std::move(s));
    }
  } else {
    throw std::domain_error("monotonicity_suite: unknown evaluator '" + id +
                            "'");
  }
  return slices;
}

}  // namespace

Certificate monotonicity_suite(const std::string& evaluator_id,
                               const SweepGrid& grid) {
  const double t0 = now_seconds();
  Certificate cert;
  cert.claim_id = "monotone/" + evaluator_id;
  double worst_increase = -1e300;
  for (const auto& slice : monotonicity_slices(evaluator_id, grid)) {
    for (double P : grid.p_values) {
      double prev = 0.0;
      bool first = true;
      for (double c : slice.c_values) {
        const double v = slice.outer(P, c);
        ++cert.checked;
        if (!first) {
          const double increase = v - prev;
          if (increase > worst_increase) {
            worst_increase = increase;
            cert.worst = {P, c, slice.dist_id, increase, kMonoTol};
          }
        }
        prev = v;
        first = false;
      }
    }
  }
  cert.pass = worst_increase <= kMonoTol;
  cert.runtime_s = now_seconds() - t0;
  return cert;
}

double recursion_term(const std::vector<double>& deltas, double c, int i) {
  if (i < 1 || static_cast<std::size_t>(i) > deltas.size())
    throw std::domain_error("recursion_term: index out of range");
  for (double d : deltas)
    if (!(d > 0.0)) throw std::domain_error("recursion_term: deltas must be > 0");
  double upto_i = 0.0;
  for (int j = 0; j < i; ++j) upto_i += deltas[j] * deltas[j];
  const double upto_prev = upto_i - deltas[i - 1] * deltas[i - 1];
  const double c2 = c * c;
  return 0.5 * std::log2(2.0 * (c2 * upto_i + 2.0) / (c2 * upto_prev + 2.0));
}

StrongConditionReport strong_condition_check(const FadingDistribution& fading,
                                             double c) {
  if (!(c > 2.0))
    throw std::domain_error("strong_condition_check: c must be > 2");
  if (!fading.is_discrete())
    throw std::domain_error("strong_condition_check: discrete fading required");
  const auto& pts = fading.points();
  const std::size_t M = pts.size();
  if (M < 2)
    throw std::domain_error("strong_condition_check: need at least 2 points");

  StrongConditionReport rep;
  const double a1 = std::abs(pts.front().value);
  rep.threshold_margin = a1 - 1.0 / (c - 1.0);
  rep.threshold_ok = rep.threshold_margin >= -1e-9;

  std::vector<double> deltas;
  for (std::size_t i = 1; i < M; ++i)
    deltas.push_back(std::abs(pts[i].value - pts.front().value));

  const double entropy_floor = 0.5 * std::log2(0.5 * c * c);
  for (std::size_t i = 1; i < M; ++i) {
    StrongIndexCheck chk;
    chk.index = static_cast<int>(i);
    const double lhs = std::abs(pts[i].value);
    const double rhs = c * std::abs(pts[i - 1].value);
    chk.spacing_ok = lhs >= rhs * (1.0 - 1e-9);
    const double term = recursion_term(deltas, c, static_cast<int>(i));
    chk.entropy_margin = term - entropy_floor;
    chk.entropy_ok = chk.entropy_margin >= -1e-9;
    if (!chk.spacing_ok || !chk.entropy_ok) rep.pass = false;
    rep.indices.push_back(chk);
  }
  return rep;
}

double quantization_penalty(double c, double step) {
  if (!(c > 0.0 && step > 0.0))
    throw std::domain_error("quantization_penalty: need c > 0, step > 0");
  return 0.5 * std::log2(c * c * step * step + 2.0);
}

Certificate mc_suite(std::uint64_t base_seed, int n_seeds,
                     std::size_t n_samples) {
  const double t0 = now_seconds();
  Certificate cert;
  cert.claim_id = "mc/quadrature-agreement";

  struct Case {
    FadingDistribution dist;
    std::string integrand;
    std::vector<double> params;
  };
  std::vector<Case> cases;
  cases.push_back({make_antipodal(), "const_one", {}});
  cases.push_back({make_antipodal(), "tin", {3.0, 0.5}});
  cases.push_back({make_geometric(0.5), "tin", {10.0, 1.0}});
  cases.push_back({make_fat_tail(3.0, 4), "tin", {10.0, 3.0}});
  cases.push_back({make_geometric(0.5), "gm", {0.0}});
  cases.push_back({make_antipodal(), "gm", {1.0}});
  // theta ~ N(0,1) realized as a wide truncated Gaussian (mass 1 - 2e-15).
  // The rho pair keeps both log arguments positive over the sampled range;
  // most manifold points drive the denominator negative at moderate |theta|.
  cases.push_back(
      {make_truncated_gaussian(0.0, 8.0, 1.0), "rgamma", {0.0, 0.1, 1.0, 1.0, 1.0}});

  double worst_ratio = -1e300;
  for (const auto& cs : cases) {
    for (int seed = 0; seed < n_seeds; ++seed) {
      const auto chk = gp::mc_expectation_check(
          cs.dist, cs.integrand, cs.params, n_samples, base_seed + seed);
      ++cert.checked;
      const double allowed = 3.0 * chk.mc_stderr + 1e-13;
      const double dev = std::abs(chk.mc_mean - chk.quad_value);
      const double ratio = dev - allowed;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        cert.worst = {0.0, static_cast<double>(seed),
                      cs.dist.id() + "/" + cs.integrand, dev, allowed};
      }
    }
  }
  cert.pass = worst_ratio <= 0.0;
  cert.runtime_s = now_seconds() - t0;
  return cert;
}

Certificate tree_suite() {
  const double t0 = now_seconds();
  Certificate cert;
  cert.claim_id = "tree/quantizer-invariants";
  double worst = -1e300;
  for (int c : {2, 3}) {
    for (int M : {2, 3, 4}) {
      const auto tree = quantize_tree(c, M);
      const auto reference = make_fat_tail(static_cast<double>(c), M);
      const std::string id =
          "tree(c=" + std::to_string(c) + ",M=" + std::to_string(M) + ")";
      auto record = [&](double dev, double allowed) {
        ++cert.checked;
        if (dev - allowed > worst) {
          worst = dev - allowed;
          cert.worst = {0.0, static_cast<double>(c), id, dev, allowed};
        }
      };
      // Level structure: (c-1)c^(k-1) nodes of equal probability, 1/M mass.
      long long expect_count = c - 1;
      for (int k = 1; k <= M; ++k) {
        const auto& level = tree.levels[k - 1];
        record(std::abs(static_cast<double>(level.size()) - expect_count), 0.0);
        double mass = 0.0;
        for (const auto& node : level) {
          mass += node.prob;
          record(std::abs(node.prob - 1.0 / (M * static_cast<double>(expect_count))),
                 1e-12);
        }
        record(std::abs(mass - 1.0 / M), 1e-12);
        expect_count *= c;
      }
      // Paths: M entries, exact ratio c between consecutive entries.
      record(std::abs(static_cast<double>(tree.paths.size()) -
                      (std::pow(c, M) - std::pow(c, M - 1))),
             0.0);
      for (const auto& path : tree.paths) {
        record(static_cast<double>(path.size() != static_cast<std::size_t>(M)),
               0.0);
        for (std::size_t k = 0; k + 1 < path.size(); ++k)
          record(std::abs(path[k] / path[k + 1] - c), 1e-9);
      }
      // Mean preservation against the continuous law.
      double node_mean = 0.0;
      for (const auto& level : tree.levels)
        for (const auto& node : level) node_mean += node.value * node.prob;
      record(std::abs(node_mean - reference.mean()), 1e-9);
      record(std::abs(tree.flatten().mean() - reference.mean()), 1e-9);
    }
  }
  cert.pass = worst <= 0.0;
  cert.runtime_s = now_seconds() - t0;
  return cert;
}

Certificate strong_examples_suite() {
  const double t0 = now_seconds();
  Certificate cert;
  cert.claim_id = "strong/condition-checks";
  bool ok = true;

  // Paper example set: the entropy inequalities hold even though the raw
  // a_1 >= 1/(c-1) threshold does not.
  {
    const auto rep = strong_condition_check(make_strong_set(3.0, 3), 3.0);
    ++cert.checked;
    if (!rep.pass) {
      ok = false;
      cert.notes.push_back("strong_set(3,3) failed the entropy inequalities");
    }
    if (rep.threshold_ok)
      cert.notes.push_back("strong_set(3,3): threshold unexpectedly holds");
  }
  // Boundary instance with a_1 = 1/(c-1) exactly.
  {
    const double c = 2.01;
    const double a1 = 1.0 / (c - 1.0);
    const auto fading =
        make_discrete({a1, c * a1, c * c * a1}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const auto rep = strong_condition_check(fading, c);
    ++cert.checked;
    if (!rep.pass || !(rep.threshold_margin >= -1e-9)) {
      ok = false;
      cert.notes.push_back("boundary instance at a_1 = 1/(c-1) did not pass");
    }
  }
  // Constructed spacing violation must be flagged at index 1.
  {
    const auto fading = make_discrete({1.0, 1.5, 9.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const auto rep = strong_condition_check(fading, 3.0);
    ++cert.checked;
    if (rep.pass || rep.indices.empty() || rep.indices[0].spacing_ok) {
      ok = false;
      cert.notes.push_back("constructed violation was not detected at index 1");
    }
  }
  cert.pass = ok;
  cert.worst.dist_id = "strong-condition examples";
  cert.runtime_s = now_seconds() - t0;
  return cert;
}

std::vector<Certificate> run_all_suites(const SweepGrid& grid,
                                        std::uint64_t seed) {
  std::vector<Certificate> out;
  for (auto t : {Theorem::Antipodal, Theorem::Mode, Theorem::Strong,
                 Theorem::Narrow, Theorem::FatTail})
    out.push_back(gap_suite(t, grid));
  for (const char* id :
       {"outer_antipodal", "outer_symmetric", "ccdp_outer", "outer_fat",
        "outer_mode", "outer_strong", "outer_narrow"})
    out.push_back(monotonicity_suite(id, grid));
  out.push_back(mc_suite(seed));
  out.push_back(tree_suite());
  out.push_back(strong_examples_suite());
  return out;
}

}  // namespace wffd::verify
