// Command-line front end: evaluate bounds, sweep grids, run verification
// suites, query the brute-force oracle, and inspect distribution specs.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wffd/bounds.hpp"
#include "wffd/gauss_signaling.hpp"
#include "wffd/gp_oracle.hpp"
#include "wffd/spec_json.hpp"
#include "wffd/verify.hpp"

namespace {

using nlohmann::json;
using wffd::bounds::BoundReport;
using wffd::bounds::Theorem;

constexpr const char* kCsvHeader =
    "theorem,regime,P,c,dist_id,inner_bpcu,outer_bpcu,gap_claimed,gap_realized";

std::optional<Theorem> theorem_from_name(const std::string& name) {
  for (auto t : {Theorem::Antipodal, Theorem::Mode, Theorem::Strong,
                 Theorem::SymmetricCont, Theorem::Narrow, Theorem::FatTail,
                 Theorem::CCDP})
    if (wffd::bounds::theorem_name(t) == name) return t;
  return std::nullopt;
}

struct ReportRow {
  BoundReport report;
  double P = 0.0, c = 0.0;
  std::string dist_id;
};

std::string csv_row(const ReportRow& row) {
  std::ostringstream os;
  os.precision(12);
  os << wffd::bounds::theorem_name(row.report.theorem) << ','
     << row.report.regime << ',' << row.P << ',' << row.c << ',' << row.dist_id
     << ',' << row.report.inner_bpcu << ',' << row.report.outer_bpcu << ','
     << row.report.gap_claimed_bpcu << ',' << row.report.gap_realized_bpcu;
  return os.str();
}

json json_row(const ReportRow& row) {
  json j;
  j["theorem"] = wffd::bounds::theorem_name(row.report.theorem);
  j["regime"] = row.report.regime;
  j["P"] = row.P;
  j["c"] = row.c;
  j["dist_id"] = row.dist_id;
  j["inner_bpcu"] = row.report.inner_bpcu;
  j["outer_bpcu"] = row.report.outer_bpcu;
  j["gap_claimed"] = row.report.gap_claimed_bpcu;
  j["gap_realized"] = row.report.gap_realized_bpcu;
  return j;
}

// Evaluates one theorem's bound pair at (P, c). Distribution-dependent
// theorems take the parsed spec and a pre-coding point m.
ReportRow evaluate(Theorem t, double P, double c,
                   const std::optional<wffd::FadingDistribution>& dist,
                   std::optional<double> m_opt, double kappa) {
  namespace wb = wffd::bounds;
  ReportRow row;
  row.P = P;
  row.c = c;
  BoundReport& rep = row.report;
  rep.theorem = t;

  auto need_dist = [&]() -> const wffd::FadingDistribution& {
    if (!dist)
      throw std::invalid_argument("this theorem needs --spec with a distribution");
    return *dist;
  };
  auto mode_point = [&](const wffd::FadingDistribution& d) {
    if (m_opt) return *m_opt;
    if (!d.is_discrete()) return d.mean();
    double best = d.points().front().value, p = -1.0;
    for (const auto& pt : d.points())
      if (pt.prob > p) {
        p = pt.prob;
        best = pt.value;
      }
    return best;
  };

  switch (t) {
    case Theorem::Antipodal: {
      const auto out = wb::outer_antipodal(P, c);
      const auto in = wb::inner_antipodal(P, c);
      rep.regime = out.regime;
      rep.inner_bpcu = in.rate;
      rep.outer_bpcu = out.rate;
      rep.gap_claimed_bpcu = wb::claimed_gap(t);
      row.dist_id = "antipodal";
      break;
    }
    case Theorem::SymmetricCont: {
      const auto out = wb::outer_symmetric_continuous(P, c);
      rep.regime = out.regime;
      rep.outer_bpcu = out.rate;
      if (dist) {
        rep.inner_bpcu = wb::inner_tin_exact(P, c, *dist);
        row.dist_id = dist->id();
      } else {
        rep.inner_bpcu = 0.0;
        row.dist_id = "symmetric";
      }
      rep.gap_claimed_bpcu = std::nan("");
      break;
    }
    case Theorem::Mode: {
      const auto& d = need_dist();
      const double m = mode_point(d);
      const auto out = wb::outer_mode(P, c, d, m);
      const auto in = wb::inner_mode(P, c, d, m);
      rep.regime = out.regime;
      rep.inner_bpcu = in.rate;
      rep.outer_bpcu = out.rate;
      rep.gap_claimed_bpcu =
          wb::claimed_gap(t, wb::gap_terms_mode(d, m, c).g_m_prime);
      row.dist_id = d.id();
      break;
    }
    case Theorem::Strong: {
      const auto& d = need_dist();
      const auto out = wb::outer_strong(P, c, d, kappa);
      const auto in = wb::inner_superposition_best(P, c, d, d.mean());
      rep.regime = out.regime;
      rep.inner_bpcu = in.rate;
      rep.outer_bpcu = out.rate;
      rep.gap_claimed_bpcu = wb::claimed_gap(t, wb::g_s(d, kappa));
      row.dist_id = d.id();
      break;
    }
    case Theorem::Narrow: {
      const auto& d = need_dist();
      const double m = m_opt ? *m_opt : d.mean();
      const auto out = wb::outer_narrow(P, c, d, m, kappa);
      const auto in =
          wb::inner_superposition_best(P, c, d, m, wb::PasForm::Exact);
      rep.regime = out.regime;
      rep.inner_bpcu = in.rate;
      rep.outer_bpcu = out.rate;
      rep.gap_claimed_bpcu = wb::claimed_gap(t, out.g_m);
      row.dist_id = d.id();
      break;
    }
    case Theorem::FatTail: {
      const int M = wb::choose_M_fat(P, c);
      const auto d = wffd::make_fat_tail(c, M);
      rep.regime = 1;
      rep.inner_bpcu = wb::inner_tin_exact(P, c, d);
      rep.outer_bpcu = wb::outer_fat(P, c);
      rep.gap_claimed_bpcu = wb::claimed_gap(t);
      row.dist_id = d.id();
      break;
    }
    case Theorem::CCDP: {
      const auto out = wb::ccdp_outer(P, c);
      rep.regime = out.regime;
      rep.inner_bpcu = 0.0;  // reference outer bound; no paired inner here
      rep.outer_bpcu = out.rate;
      rep.gap_claimed_bpcu = wb::claimed_gap(t);
      rep.gap_realized_bpcu = std::nan("");
      row.dist_id = "ccdp";
      return row;
    }
  }
  rep.gap_realized_bpcu = rep.outer_bpcu - rep.inner_bpcu;
  return row;
}

void write_rows(const std::vector<ReportRow>& rows, const std::string& out_path) {
  if (out_path.empty()) return;
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open --out file " + out_path);
  if (out_path.size() >= 5 &&
      out_path.compare(out_path.size() - 5, 5, ".json") == 0) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(json_row(r));
    out << arr.dump(2) << '\n';
  } else {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) out << csv_row(r) << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Capacity bounds for the writing-onto-fast-fading-dirt channel"};
  app.require_subcommand(1);

  std::string theorem_name = "antipodal", spec_text, out_path, suite = "all";
  std::string method;
  double power = 1.0, gain = 1.0, kappa = 1.0;
  std::optional<double> m_opt;
  std::vector<double> grid_p, grid_c;
  std::uint64_t seed = 0, budget = 50'000'000;
  int quad_order = 48;
  bool show_moments = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", spec_text, "distribution spec (JSON)");
    cmd->add_option("--out", out_path, "output file (.csv or .json)");
    cmd->add_option("--seed", seed, "base seed (default 0)");
  };

  auto* cmd_bounds = app.add_subcommand("bounds", "evaluate one bound pair");
  cmd_bounds->add_option("--theorem", theorem_name, "theorem id");
  cmd_bounds->add_option("--method", method, "gauss: jointly Gaussian signaling");
  cmd_bounds->add_option("--power", power, "transmit power P")->required();
  cmd_bounds->add_option("--gain", gain, "state gain c")->required();
  cmd_bounds->add_option("--m", m_opt, "pre-coding point (default: mode/mean)");
  cmd_bounds->add_option("--kappa", kappa, "spacing/window parameter");
  cmd_bounds->add_option("--quad-order", quad_order, "Gauss-Hermite order");
  add_common(cmd_bounds);

  auto* cmd_sweep = app.add_subcommand("sweep", "evaluate a bound pair on a grid");
  cmd_sweep->add_option("--theorem", theorem_name, "theorem id")->required();
  cmd_sweep->add_option("--grid-p", grid_p, "P grid (default log 0.01..1000, 50)");
  cmd_sweep->add_option("--grid-c", grid_c, "c grid (default log 0.01..100, 50)");
  cmd_sweep->add_option("--m", m_opt, "pre-coding point");
  cmd_sweep->add_option("--kappa", kappa, "spacing/window parameter");
  add_common(cmd_sweep);

  auto* cmd_verify = app.add_subcommand("verify", "run verification suites");
  cmd_verify->add_option("--suite", suite,
                         "all|gap|monotone|mc|tree|strong (default all)");
  cmd_verify->add_option("--grid-p", grid_p, "P grid override");
  cmd_verify->add_option("--grid-c", grid_c, "c grid override");
  add_common(cmd_verify);

  int nx = 5, ns = 2, ny = 64, u_size = 2, simplex_steps = 8;
  double y_span = 0.0;
  auto* cmd_oracle = app.add_subcommand("oracle", "brute-force GP capacity");
  cmd_oracle->add_option("--power", power, "transmit power P")->required();
  cmd_oracle->add_option("--gain", gain, "state gain c")->required();
  cmd_oracle->add_option("--nx", nx, "input grid size");
  cmd_oracle->add_option("--ns", ns, "state quantization cells");
  cmd_oracle->add_option("--ny", ny, "output bins");
  cmd_oracle->add_option("--u", u_size, "auxiliary alphabet size (<= 4)");
  cmd_oracle->add_option("--simplex-steps", simplex_steps, "P(U|S) grid steps");
  cmd_oracle->add_option("--y-span", y_span, "output bin span (0 = auto)");
  cmd_oracle->add_option("--budget", budget, "evaluation budget");
  add_common(cmd_oracle);

  auto* cmd_dist = app.add_subcommand("dist", "inspect a distribution spec");
  cmd_dist->add_flag("--show-moments", show_moments, "print recomputed moments");
  add_common(cmd_dist);
  cmd_dist->get_option("--spec")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  std::optional<wffd::FadingDistribution> dist;
  std::optional<wffd::DistSpec> dist_spec;
  if (!spec_text.empty()) {
    dist_spec = wffd::parse_spec(spec_text);
    dist = wffd::build_distribution(*dist_spec);
  }

  std::cout.precision(12);
  if (cmd_bounds->parsed()) {
    if (method == "gauss") {
      const auto res = wffd::gauss::optimize_rho(power, gain, quad_order);
      std::cout << "gauss signaling: rate " << res.rate << " bpcu at rho=("
                << res.rho.rho_xs << ", " << res.rho.rho_us << ", "
                << res.rho.rho_ux << "), manifold residual "
                << res.rho.manifold_residual() << "\n";
      return 0;
    }
    const auto t = theorem_from_name(theorem_name);
    if (!t) throw std::invalid_argument("unknown theorem '" + theorem_name + "'");
    const auto row = evaluate(*t, power, gain, dist, m_opt, kappa);
    std::cout << "theorem " << theorem_name << " regime " << row.report.regime
              << ": inner " << row.report.inner_bpcu << ", outer "
              << row.report.outer_bpcu << ", gap "
              << row.report.gap_realized_bpcu << " (claimed "
              << row.report.gap_claimed_bpcu << ") bpcu\n";
    write_rows({row}, out_path);
    return 0;
  }

  if (cmd_sweep->parsed()) {
    const auto t = theorem_from_name(theorem_name);
    if (!t) throw std::invalid_argument("unknown theorem '" + theorem_name + "'");
    auto grid = wffd::verify::default_grid();
    if (!grid_p.empty()) grid.p_values = grid_p;
    if (!grid_c.empty()) grid.c_values = grid_c;
    std::vector<ReportRow> rows;
    for (double c : grid.c_values)
      for (double P : grid.p_values) {
        try {
          rows.push_back(evaluate(*t, P, c, dist, m_opt, kappa));
        } catch (const std::exception&) {
          // outside the theorem's validity region; skip the grid point
        }
      }
    std::cout << kCsvHeader << '\n';
    for (const auto& r : rows) std::cout << csv_row(r) << '\n';
    write_rows(rows, out_path);
    return 0;
  }

  if (cmd_verify->parsed()) {
    auto grid = wffd::verify::default_grid();
    if (!grid_p.empty()) grid.p_values = grid_p;
    if (!grid_c.empty()) grid.c_values = grid_c;
    std::vector<wffd::verify::Certificate> certs;
    if (suite == "all") {
      certs = wffd::verify::run_all_suites(grid, seed);
    } else if (suite == "gap") {
      for (auto t : {Theorem::Antipodal, Theorem::Mode, Theorem::Strong,
                     Theorem::Narrow, Theorem::FatTail})
        certs.push_back(wffd::verify::gap_suite(t, grid));
    } else if (suite == "monotone") {
      for (const char* id :
           {"outer_antipodal", "outer_symmetric", "ccdp_outer", "outer_fat",
            "outer_mode", "outer_strong", "outer_narrow"})
        certs.push_back(wffd::verify::monotonicity_suite(id, grid));
    } else if (suite == "mc") {
      certs.push_back(wffd::verify::mc_suite(seed));
    } else if (suite == "tree") {
      certs.push_back(wffd::verify::tree_suite());
    } else if (suite == "strong") {
      certs.push_back(wffd::verify::strong_examples_suite());
    } else {
      throw std::invalid_argument("unknown suite '" + suite + "'");
    }
    bool all_pass = true;
    json jcerts = json::array();
    for (const auto& cert : certs) {
      std::cout << cert.summary() << '\n';
      all_pass = all_pass && cert.pass;
      json jc;
      jc["claim_id"] = cert.claim_id;
      jc["pass"] = cert.pass;
      jc["checked"] = cert.checked;
      jc["skipped"] = cert.skipped;
      jc["worst"] = {{"P", cert.worst.P},
                     {"c", cert.worst.c},
                     {"dist", cert.worst.dist_id},
                     {"realized", cert.worst.realized},
                     {"allowed", cert.worst.allowed}};
      jc["runtime_s"] = cert.runtime_s;
      jcerts.push_back(jc);
    }
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << jcerts.dump(2) << '\n';
    }
    std::cout << (all_pass ? "ALL SUITES PASS" : "SUITE FAILURES PRESENT")
              << '\n';
    return all_pass ? 0 : 1;
  }

  if (cmd_oracle->parsed()) {
    const auto fading = dist ? *dist : wffd::make_antipodal();
    const auto ch = wffd::gp::build_channel(power, gain, fading, nx, ns, ny, y_span);
    const auto sol = wffd::gp::gp_capacity_bruteforce(ch, u_size, simplex_steps, budget);
    std::cout << "oracle rate " << sol.rate << " bpcu (|U|=" << sol.u_size
              << ", evaluations " << sol.evaluations << ")\n";
    std::cout << "x_map:";
    for (int xi : sol.x_map) std::cout << ' ' << ch.x_alphabet[xi];
    std::cout << "\np(u|s):";
    for (double p : sol.p_u_given_s) std::cout << ' ' << p;
    std::cout << '\n';
    return 0;
  }

  if (cmd_dist->parsed()) {
    std::cout << wffd::render_spec(*dist_spec) << '\n';
    if (show_moments) {
      const auto mo = wffd::moments(*dist);
      std::cout << "mean " << mo.mean << ", second_moment " << mo.second_moment
                << ", variance " << mo.variance << '\n';
    }
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
