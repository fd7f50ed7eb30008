#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

#include "gbflow/curve_solver.hpp"
#include "gbflow/diagnostics.hpp"
#include "gbflow/errors.hpp"
#include "gbflow/geometry.hpp"
#include "gbflow/graph_solver.hpp"
#include "gbflow/kernel.hpp"
#include "gbflow/sigma.hpp"
#include "gbflow/version.hpp"

namespace py = pybind11;
using namespace gbflow;

namespace {

std::vector<double> trajectory_column(const Trajectory& traj, const std::string& name) {
  static const std::map<std::string, double DiagnosticsRow::*> columns = {
      {"t", &DiagnosticsRow::t},
      {"alpha", &DiagnosticsRow::alpha},
      {"E", &DiagnosticsRow::energy},
      {"length", &DiagnosticsRow::length},
      {"sup_v", &DiagnosticsRow::sup_v},
      {"sup_u", &DiagnosticsRow::sup_u},
      {"h1", &DiagnosticsRow::h1},
      {"h2", &DiagnosticsRow::h2},
      {"h3", &DiagnosticsRow::h3},
      {"sup_kappa", &DiagnosticsRow::sup_kappa},
      {"dissipation_residual", &DiagnosticsRow::dissipation_residual},
  };
  const auto it = columns.find(name);
  if (it == columns.end()) throw ConfigError("unknown diagnostics column: " + name);
  std::vector<double> out;
  out.reserve(traj.rows.size());
  for (const DiagnosticsRow& row : traj.rows) out.push_back(row.*(it->second));
  return out;
}

std::vector<std::pair<double, double>> as_pairs(const std::vector<Vec2>& pts) {
  std::vector<std::pair<double, double>> out;
  out.reserve(pts.size());
  for (const Vec2& p : pts) out.emplace_back(p.x, p.y);
  return out;
}

std::vector<Vec2> from_pairs(const std::vector<std::pair<double, double>>& pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& [x, y] : pts) out.push_back({x, y});
  return out;
}

}  // namespace

PYBIND11_MODULE(_gbflow, m) {
  m.doc() =
      "Coupled grain-boundary curve shortening with an evolving misorientation: "
      "solvers, backward heat kernel, and identity/bound diagnostics.";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<GeometryError>(m, "GeometryError");
  py::register_exception<DivergenceError>(m, "DivergenceError");
  py::register_exception<DomainError>(m, "KernelDomainError");
  py::register_exception<FitError>(m, "FitError");

  py::class_<SigmaModel>(m, "SigmaModel")
      .def_static("quadratic_shifted", &SigmaModel::quadratic_shifted)
      .def_static("quadratic", &SigmaModel::quadratic)
      .def_static("custom", &SigmaModel::custom, py::arg("value"),
                  py::arg("derivative"), py::arg("c_lower"), py::arg("a1"),
                  py::arg("a2"))
      .def_static("from_name", &SigmaModel::from_name)
      .def("eval", &SigmaModel::eval)
      .def("deriv", &SigmaModel::deriv)
      .def_readonly("c_lower", &SigmaModel::c_lower)
      .def_readonly("satisfies_A1", &SigmaModel::satisfies_A1)
      .def_readonly("satisfies_A2", &SigmaModel::satisfies_A2);

  py::class_<Params>(m, "Params")
      .def(py::init<>())
      .def_readwrite("mu", &Params::mu)
      .def_readwrite("gamma", &Params::gamma)
      .def_readwrite("dt", &Params::dt)
      .def_readwrite("t_end", &Params::t_end)
      .def_readwrite("cfl_safety", &Params::cfl_safety)
      .def_readwrite("force_dt", &Params::force_dt);

  // Periodic-graph geometry operators on the unit circle.
  m.def("d1", [](const std::vector<double>& u) { return d1(u, Grid1D(u.size())); });
  m.def("area_element", [](const std::vector<double>& u) {
    return area_element(u, Grid1D(u.size()));
  });
  m.def("curvature", [](const std::vector<double>& u) {
    return curvature(u, Grid1D(u.size()));
  });
  m.def("curve_length", [](const std::vector<double>& u) {
    return curve_length(u, Grid1D(u.size()));
  });
  m.def("energy", [](const std::vector<double>& u, double alpha,
                     const SigmaModel& model) {
    return energy({Grid1D(static_cast<int>(u.size())), u, alpha, 0.0}, model);
  });
  m.def("sobolev_norms", [](const std::vector<double>& u) {
    const SobolevNorms s = sobolev_norms(u, Grid1D(u.size()));
    return py::make_tuple(s.h1, s.h2, s.h3);
  });

  py::class_<GraphSnapshot>(m, "GraphSnapshot")
      .def_readonly("step", &GraphSnapshot::step)
      .def_readonly("t", &GraphSnapshot::t)
      .def_readonly("alpha", &GraphSnapshot::alpha)
      .def_readonly("u", &GraphSnapshot::u);

  py::class_<Trajectory>(m, "Trajectory")
      .def("column", &trajectory_column, py::arg("name"),
           "Per-step series: t, alpha, E, length, sup_v, sup_u, h1, h2, h3, "
           "sup_kappa, dissipation_residual")
      .def_readonly("snapshots", &Trajectory::snapshots)
      .def_property_readonly("final_u",
                             [](const Trajectory& t) { return t.back().u; })
      .def_property_readonly("final_alpha",
                             [](const Trajectory& t) { return t.back().alpha; })
      .def_property_readonly("t_end", &Trajectory::t_end)
      .def_property_readonly("steps",
                             [](const Trajectory& t) { return t.rows.size() - 1; });

  m.def(
      "stable_dt",
      [](const std::vector<double>& u, double alpha, const Params& p,
         const SigmaModel& model) {
        const Grid1D grid(static_cast<int>(u.size()));
        return stable_dt({grid, u, alpha, 0.0}, p, model);
      },
      py::arg("u"), py::arg("alpha"), py::arg("params"), py::arg("model"));

  m.def(
      "run_graph",
      [](const std::vector<double>& u0, double alpha0, const Params& p,
         const SigmaModel& model, std::size_t snapshot_every) {
        return run(u0, alpha0, Grid1D(static_cast<int>(u0.size())), p, model,
                   snapshot_every);
      },
      py::arg("u0"), py::arg("alpha0"), py::arg("params"), py::arg("model"),
      py::arg("snapshot_every") = 1,
      "Time-step the coupled graph system to params.t_end.");

  // Curve solver.
  py::class_<CurveDiagnosticsRow>(m, "CurveDiagnosticsRow")
      .def_readonly("t", &CurveDiagnosticsRow::t)
      .def_readonly("alpha", &CurveDiagnosticsRow::alpha)
      .def_readonly("energy", &CurveDiagnosticsRow::energy)
      .def_readonly("perimeter", &CurveDiagnosticsRow::perimeter)
      .def_readonly("r_origin", &CurveDiagnosticsRow::r_origin)
      .def_readonly("r_centroid", &CurveDiagnosticsRow::r_centroid)
      .def_readonly("min_segment", &CurveDiagnosticsRow::min_segment)
      .def_readonly("sup_kappa", &CurveDiagnosticsRow::sup_kappa);

  py::class_<CurveTrajectory>(m, "CurveTrajectory")
      .def_readonly("rows", &CurveTrajectory::rows)
      .def_property_readonly("final_points", [](const CurveTrajectory& t) {
        return as_pairs(t.snapshots.back().pts);
      });

  py::class_<ExtinctionReport>(m, "ExtinctionReport")
      .def_property_readonly(
          "status", [](const ExtinctionReport& r) { return to_string(r.status); })
      .def_readonly("time", &ExtinctionReport::time)
      .def_readonly("final_perimeter", &ExtinctionReport::final_perimeter)
      .def_readonly("extinction_threshold", &ExtinctionReport::extinction_threshold);

  m.def("make_circle", [](double radius, int m_pts, double alpha) {
    return as_pairs(make_circle(radius, m_pts, {0, 0}, alpha).pts);
  }, py::arg("radius"), py::arg("m"), py::arg("alpha") = 0.0);
  m.def("make_ellipse", [](double a, double b, int m_pts, double alpha) {
    return as_pairs(make_ellipse(a, b, m_pts, {0, 0}, alpha).pts);
  }, py::arg("a"), py::arg("b"), py::arg("m"), py::arg("alpha") = 0.0);

  m.def(
      "run_curve",
      [](const std::vector<std::pair<double, double>>& pts, double alpha0,
         const Params& p, const SigmaModel& model, std::size_t reparam_every,
         std::size_t snapshot_every) {
        const CurveRunResult result =
            run_curve(CurveState::make(from_pairs(pts), alpha0), p, model,
                      reparam_every, snapshot_every);
        return py::make_tuple(result.trajectory, result.report);
      },
      py::arg("points"), py::arg("alpha0"), py::arg("params"), py::arg("model"),
      py::arg("reparam_every") = 50, py::arg("snapshot_every") = 1,
      "Front-track a closed polygon until t_end or extinction.");

  m.def(
      "polygon_curvature",
      [](const std::vector<std::pair<double, double>>& pts) {
        return polygon_geometry(CurveState::make(from_pairs(pts), 0.0, 0.0, false))
            .curvature;
      },
      "Turning-angle vertex curvatures of a closed polygon.");

  m.def(
      "line_tension_residual",
      [](const std::vector<std::pair<double, double>>& pts,
         const SigmaModel& model, double alpha) {
        return line_tension_residual(
            CurveState::make(from_pairs(pts), alpha, 0.0, false),
            AnisotropicSigma::lift(model), alpha);
      },
      py::arg("points"), py::arg("model"), py::arg("alpha"));

  // Backward heat kernel.
  py::class_<SigmaSchedule>(m, "SigmaSchedule")
      .def_static("from_samples", &SigmaSchedule::from_samples)
      .def_static("from_trajectory", &SigmaSchedule::from_trajectory)
      .def_static("constant", &SigmaSchedule::constant, py::arg("sigma"),
                  py::arg("t_begin"), py::arg("t_end"), py::arg("samples") = 2)
      .def("sigma_at", &SigmaSchedule::sigma_at)
      .def("integral_at", &SigmaSchedule::integral_at);

  py::class_<BackwardKernel>(m, "BackwardKernel")
      .def(py::init([](std::pair<double, double> x0, double t0,
                       const SigmaSchedule& schedule, double mu) {
             return BackwardKernel({x0.first, x0.second}, t0, schedule, mu);
           }),
           py::arg("x0"), py::arg("t0"), py::arg("schedule"), py::arg("mu"))
      .def("sigma_accum", &BackwardKernel::sigma_accum)
      .def("rho",
           [](const BackwardKernel& k, std::pair<double, double> x, double t) {
             return k.rho({x.first, x.second}, t);
           })
      .def("grad_rho",
           [](const BackwardKernel& k, std::pair<double, double> x, double t) {
             const Vec2 g = k.grad_rho({x.first, x.second}, t);
             return std::make_pair(g.x, g.y);
           })
      .def("identity_residual",
           [](const BackwardKernel& k, std::pair<double, double> x, double t,
              std::pair<double, double> a) {
             return k.identity_residual({x.first, x.second}, t,
                                        {a.first, a.second});
           });

  // Diagnostics.
  py::class_<CheckReport>(m, "CheckReport")
      .def_readonly("name", &CheckReport::name)
      .def_readonly("applicable", &CheckReport::applicable)
      .def_readonly("passed", &CheckReport::passed)
      .def_readonly("worst_violation", &CheckReport::worst_violation)
      .def_readonly("tolerance", &CheckReport::tolerance)
      .def_readonly("location", &CheckReport::location)
      .def_readonly("note", &CheckReport::note)
      .def("__repr__", [](const CheckReport& r) {
        return "<CheckReport " + r.name + " " +
               (r.applicable ? (r.passed ? "pass" : "FAIL") : "n/a") + ">";
      });

  py::class_<SeriesCheck>(m, "SeriesCheck")
      .def_readonly("t", &SeriesCheck::t)
      .def_readonly("value", &SeriesCheck::value)
      .def_readonly("report", &SeriesCheck::report);

  m.def("dissipation_residual", &dissipation_residual, py::arg("trajectory"),
        py::arg("model"), py::arg("params"));
  m.def(
      "monotonicity_series",
      [](const Trajectory& traj, const SigmaModel& model, const Params& p,
         double x0, double t0, const std::string& weight) {
        const WeightFunction f =
            weight == "one" ? WeightFunction::One : WeightFunction::AreaElement;
        return monotonicity_series(traj, model, p, x0, t0, f);
      },
      py::arg("trajectory"), py::arg("model"), py::arg("params"), py::arg("x0"),
      py::arg("t0"), py::arg("weight") = "area_element");
  m.def("bound_checks", &bound_checks, py::arg("trajectory"), py::arg("model"));
  m.def("length_dissipation_check", &length_dissipation_check,
        py::arg("trajectory"), py::arg("model"), py::arg("params"));
  m.def(
      "decay_fit",
      [](const std::vector<double>& t, const std::vector<double>& y, double t_a,
         double t_b) {
        const DecayFit fit = decay_fit(t, y, t_a, t_b);
        return py::make_tuple(fit.rate, fit.r_squared);
      },
      py::arg("t"), py::arg("y"), py::arg("t_a"), py::arg("t_b"),
      "Least-squares rate of log y against t; returns (rate, r_squared).");
  m.def("asymptotics_report", [](const Trajectory& traj) {
    const AsymptoticsReport rep = asymptotics_report(traj);
    py::dict d;
    d["status"] = rep.status;
    d["u_infinity"] = rep.u_infinity;
    d["final_spread"] = rep.final_spread;
    d["final_sup_ux"] = rep.final_sup_ux;
    d["final_sup_kappa"] = rep.final_sup_kappa;
    d["rate_deviation"] = rep.rate_deviation.rate;
    d["rate_ux"] = rep.rate_ux.rate;
    d["rate_kappa"] = rep.rate_kappa.rate;
    return d;
  });
}
