#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wffd/bounds.hpp"
#include "wffd/gauss_signaling.hpp"
#include "wffd/gp_oracle.hpp"
#include "wffd/spec_json.hpp"
#include "wffd/verify.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_wffd, m) {
  m.doc() = "Capacity bounds for the writing-onto-fast-fading-dirt channel";

  using wffd::FadingDistribution;
  namespace wb = wffd::bounds;

  py::class_<wffd::Moments>(m, "Moments")
      .def_readonly("mean", &wffd::Moments::mean)
      .def_readonly("second_moment", &wffd::Moments::second_moment)
      .def_readonly("variance", &wffd::Moments::variance);

  py::class_<FadingDistribution>(m, "FadingDistribution")
      .def_property_readonly("mean", &FadingDistribution::mean)
      .def_property_readonly("second_moment", &FadingDistribution::second_moment)
      .def_property_readonly("variance", &FadingDistribution::variance)
      .def_property_readonly("is_discrete", &FadingDistribution::is_discrete)
      .def("prob_at", &FadingDistribution::prob_at)
      .def("prob_window", &FadingDistribution::prob_window)
      .def("points",
           [](const FadingDistribution& d) {
             std::vector<std::pair<double, double>> out;
             for (const auto& pt : d.points())
               out.emplace_back(pt.value, pt.prob);
             return out;
           })
      .def("__repr__", [](const FadingDistribution& d) {
        return "<FadingDistribution " + d.id() + ">";
      });

  m.def("make_antipodal", &wffd::make_antipodal);
  m.def("make_geometric", &wffd::make_geometric, py::arg("q"));
  m.def("make_strong_set", &wffd::make_strong_set, py::arg("c"), py::arg("M"));
  m.def("make_fat_tail", &wffd::make_fat_tail, py::arg("c"), py::arg("M"));
  m.def("make_point_mass", &wffd::make_point_mass, py::arg("m"));
  m.def("make_discrete", &wffd::make_discrete, py::arg("values"), py::arg("probs"));
  m.def("make_log_uniform", &wffd::make_log_uniform, py::arg("lo"), py::arg("hi"));
  m.def("make_truncated_gaussian", &wffd::make_truncated_gaussian,
        py::arg("center"), py::arg("halfwidth"), py::arg("sigma"));
  m.def("moments", &wffd::moments);
  m.def("canonicalize", &wffd::canonicalize, py::arg("gain_raw"),
        py::arg("fading"), py::arg("state_mean") = 0.0, py::arg("state_var") = 1.0);
  m.def("quantize_uniform", &wffd::quantize_uniform, py::arg("fading"),
        py::arg("step"));
  m.def("fat_tail_kappa", &wffd::fat_tail_kappa, py::arg("c"), py::arg("M"));
  m.def("parse_distribution_spec", &wffd::parse_distribution_spec);

  py::class_<wffd::QuantizationTree>(m, "QuantizationTree")
      .def_readonly("branching", &wffd::QuantizationTree::branching)
      .def_readonly("depth", &wffd::QuantizationTree::depth)
      .def_readonly("kappa", &wffd::QuantizationTree::kappa)
      .def_readonly("paths", &wffd::QuantizationTree::paths)
      .def("flatten", &wffd::QuantizationTree::flatten)
      .def("level_nodes", [](const wffd::QuantizationTree& t, int k) {
        std::vector<std::pair<double, double>> out;
        for (const auto& node : t.levels.at(k - 1))
          out.emplace_back(node.value, node.prob);
        return out;
      });
  m.def("quantize_tree", &wffd::quantize_tree, py::arg("c"), py::arg("M"),
        py::arg("per_cell_values") = false);

  auto pair_out = [](const wb::RateRegime& rr) {
    return py::make_tuple(rr.rate, rr.regime);
  };
  m.def("outer_antipodal", [=](double P, double c) {
    return pair_out(wb::outer_antipodal(P, c));
  });
  m.def("inner_antipodal", [=](double P, double c) {
    return pair_out(wb::inner_antipodal(P, c));
  });
  m.def("outer_symmetric_continuous", [=](double P, double c) {
    return pair_out(wb::outer_symmetric_continuous(P, c));
  });
  m.def("ccdp_outer", [=](double P, double c) {
    return pair_out(wb::ccdp_outer(P, c));
  });
  m.def("outer_mode", [=](double P, double c, const FadingDistribution& f,
                          double mode) {
    return pair_out(wb::outer_mode(P, c, f, mode));
  });
  m.def("inner_mode", [](double P, double c, const FadingDistribution& f,
                         double mode) {
    const auto r = wb::inner_mode(P, c, f, mode);
    return py::make_tuple(r.rate, r.alpha_star);
  });
  m.def("outer_strong", [=](double P, double c, const FadingDistribution& f,
                            double kappa) {
    return pair_out(wb::outer_strong(P, c, f, kappa));
  }, py::arg("P"), py::arg("c"), py::arg("fading"), py::arg("kappa") = 1.0);
  m.def("g_s", &wb::g_s, py::arg("fading"), py::arg("kappa") = 1.0);
  m.def("outer_narrow", [](double P, double c, const FadingDistribution& f,
                           double mode, double kappa) {
    const auto r = wb::outer_narrow(P, c, f, mode, kappa);
    return py::make_tuple(r.rate, r.regime, r.q_m, r.g_m);
  }, py::arg("P"), py::arg("c"), py::arg("fading"), py::arg("m"),
     py::arg("kappa") = 1.0);
  m.def("outer_fat", &wb::outer_fat);
  m.def("choose_M_fat", &wb::choose_M_fat);
  m.def("inner_tin_exact", &wb::inner_tin_exact);
  m.def("inner_tin_closed", &wb::inner_tin_closed);
  m.def("gap_terms_mode", [](const FadingDistribution& f, double mode, double c) {
    const auto g = wb::gap_terms_mode(f, mode, c);
    py::dict out;
    out["g_m_outer"] = g.g_m_outer;
    out["g_m_prime"] = g.g_m_prime;
    out["g_m_inner"] = g.g_m_inner;
    out["g_s"] = g.g_s;
    out["g_m_narrow"] = g.g_m_narrow;
    return out;
  });

  m.def("optimize_rho", [](double P, double c, int quad_order) {
    const auto r = wffd::gauss::optimize_rho(P, c, quad_order);
    return py::make_tuple(r.rate, r.rho.rho_xs, r.rho.rho_us, r.rho.rho_ux);
  }, py::arg("P"), py::arg("c"), py::arg("quad_order") = 48);
  m.def("expected_r_gamma", [](double rho_xs, double rho_us, int sign, double P,
                               double c, int quad_order) {
    return wffd::gauss::expected_r_gamma(
        wffd::gauss::rho_from_pair(rho_xs, rho_us, sign), P, c, quad_order);
  });

  m.def("quantization_penalty", &wffd::verify::quantization_penalty);
  m.def("recursion_term", &wffd::verify::recursion_term);
  m.def("gp_capacity", [](double P, double c, const FadingDistribution& f,
                          int nx, int ns, int ny, int u, int steps) {
    const auto ch = wffd::gp::build_channel(P, c, f, nx, ns, ny);
    return wffd::gp::gp_capacity_bruteforce(ch, u, steps).rate;
  }, py::arg("P"), py::arg("c"), py::arg("fading"), py::arg("nx") = 5,
     py::arg("ns") = 2, py::arg("ny") = 64, py::arg("u") = 2,
     py::arg("steps") = 8);
}
