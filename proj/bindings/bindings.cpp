// Python surface: grids, fields, the nonlocal solves, both integrators,
// diagnostics, and the sweep harness.
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

#include "pulselab/config.hpp"
#include "pulselab/diagnostics.hpp"
#include "pulselab/dispersive.hpp"
#include "pulselab/fv.hpp"
#include "pulselab/harness.hpp"
#include "pulselab/io.hpp"
#include "pulselab/nonlocal.hpp"
#include "pulselab/transfer.hpp"

namespace py = pybind11;
using namespace pulselab;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<double> to_vector(const DoubleArray& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
    return {a.data(), a.data() + a.size()};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "pulselab core: dispersive regularization laboratory for the "
              "short pulse limit equation";

    // grids and fields
    py::class_<Grid1D>(m, "Grid1D")
        .def(py::init<>())
        .def_readonly("n", &Grid1D::n)
        .def_readonly("length", &Grid1D::length)
        .def_readonly("x_left", &Grid1D::x_left)
        .def_readonly("dx", &Grid1D::dx)
        .def("node", &Grid1D::node, py::arg("j"))
        .def("nodes", [](const Grid1D& g) { return to_array(g.nodes()); })
        .def(py::self == py::self)
        .def("__repr__", [](const Grid1D& g) {
            return "Grid1D(n=" + std::to_string(g.n) + ", length=" + std::to_string(g.length) +
                   ", x_left=" + std::to_string(g.x_left) + ")";
        });
    m.def("make_grid", &make_grid, py::arg("n"), py::arg("length"), py::arg("x_left"));

    py::class_<Field>(m, "Field")
        .def(py::init([](const Grid1D& g) {
                 return Field{g, std::vector<double>(g.n, 0.0)};
             }),
             py::arg("grid"))
        .def(py::init([](const Grid1D& g, const DoubleArray& a) {
                 auto v = to_vector(a);
                 if (v.size() != g.n)
                     throw std::invalid_argument("values size does not match grid.n");
                 return Field{g, std::move(v)};
             }),
             py::arg("grid"), py::arg("values"))
        .def_readonly("grid", &Field::grid)
        .def_property(
            "values", [](const Field& f) { return to_array(f.values); },
            [](Field& f, const DoubleArray& a) {
                auto v = to_vector(a);
                if (v.size() != f.grid.n)
                    throw std::invalid_argument("values size does not match grid.n");
                f.values = std::move(v);
            })
        .def("__len__", [](const Field& f) { return f.values.size(); });

    m.def("ricker_ic", &ricker_ic, py::arg("grid"), py::arg("amplitude"), py::arg("center"),
          py::arg("width"));
    m.def("mean", &mean, py::arg("f"));
    m.def("project_zero_mean", &project_zero_mean, py::arg("f"));
    m.def("derivative", py::overload_cast<const Field&, int>(&derivative), py::arg("f"),
          py::arg("order"));
    m.def("cubic", &cubic, py::arg("f"));
    m.def("lp_norm", &lp_norm, py::arg("f"), py::arg("p"));
    m.def("lp_norm_local", &lp_norm_local, py::arg("f"), py::arg("p"), py::arg("a"),
          py::arg("b"));

    // nonlocal source
    py::class_<NonlocalSolution>(m, "NonlocalSolution")
        .def_readonly("p", &NonlocalSolution::p)
        .def_readonly("boundary_value", &NonlocalSolution::boundary_value)
        .def_readonly("mean_p", &NonlocalSolution::mean_p)
        .def_readonly("p_at_origin", &NonlocalSolution::p_at_origin);
    m.def("solve_p_regularized", &solve_p_regularized, py::arg("u"), py::arg("epsilon"));
    m.def("primitive", &primitive, py::arg("u"));
    m.def("second_primitive", &second_primitive, py::arg("p"));

    // trajectories and diagnostics records
    py::enum_<SolverKind>(m, "SolverKind")
        .value("dispersive", SolverKind::dispersive)
        .value("finite_volume", SolverKind::finite_volume);

    py::class_<TrajectoryMeta>(m, "TrajectoryMeta")
        .def(py::init<>())
        .def_readwrite("kind", &TrajectoryMeta::kind)
        .def_readwrite("epsilon", &TrajectoryMeta::epsilon)
        .def_readwrite("beta", &TrajectoryMeta::beta)
        .def_readwrite("gamma", &TrajectoryMeta::gamma)
        .def_readwrite("dt", &TrajectoryMeta::dt)
        .def_readwrite("cfl", &TrajectoryMeta::cfl)
        .def_readwrite("flux", &TrajectoryMeta::flux);

    py::class_<DiagnosticsRecord>(m, "DiagnosticsRecord")
        .def_readonly("t", &DiagnosticsRecord::t)
        .def_readonly("l2_u", &DiagnosticsRecord::l2_u)
        .def_readonly("l6_u", &DiagnosticsRecord::l6_u)
        .def_readonly("linf_u", &DiagnosticsRecord::linf_u)
        .def_readonly("mean_u", &DiagnosticsRecord::mean_u)
        .def_readonly("mean_P", &DiagnosticsRecord::mean_P)
        .def_readonly("linf_P", &DiagnosticsRecord::linf_P)
        .def_readonly("l2_P", &DiagnosticsRecord::l2_P)
        .def_readonly("l2_dxP", &DiagnosticsRecord::l2_dxP)
        .def_readonly("l2_dxxP", &DiagnosticsRecord::l2_dxxP)
        .def_readonly("l2_dxu", &DiagnosticsRecord::l2_dxu)
        .def_readonly("l2_dxxu", &DiagnosticsRecord::l2_dxxu)
        .def_readonly("l1_dxu_dxxu", &DiagnosticsRecord::l1_dxu_dxxu)
        .def_readonly("G1", &DiagnosticsRecord::G1)
        .def_readonly("G2", &DiagnosticsRecord::G2)
        .def_readonly("energy_margin", &DiagnosticsRecord::energy_margin)
        .def_readonly("p_identity_residual", &DiagnosticsRecord::p_identity_residual)
        .def_readonly("up_identity_residual", &DiagnosticsRecord::up_identity_residual)
        .def_readonly("F_right_edge", &DiagnosticsRecord::F_right_edge);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("grid", &Trajectory::grid)
        .def_readonly("meta", &Trajectory::meta)
        .def_readonly("times", &Trajectory::times)
        .def_readonly("records", &Trajectory::records)
        .def_readonly("completed", &Trajectory::completed)
        .def_readonly("failure_reason", &Trajectory::failure_reason)
        .def_property_readonly("n_snapshots",
                               [](const Trajectory& t) { return t.snapshots.size(); })
        .def("snapshot", &Trajectory::snapshot, py::arg("i"))
        .def("p_of_snapshot", &Trajectory::p_of_snapshot, py::arg("i"))
        .def("nearest_snapshot", &Trajectory::nearest_snapshot, py::arg("t"), py::arg("tol"));

    m.def("record", &record, py::arg("u"), py::arg("P"), py::arg("epsilon"), py::arg("beta"),
          py::arg("gamma"), py::arg("t"));
    m.def("diagnostics_columns", &diagnostics_columns);

    py::class_<DiagnosticsAccumulator>(m, "DiagnosticsAccumulator")
        .def(py::init<double, double, double, const Field&>(), py::arg("epsilon"),
             py::arg("beta"), py::arg("gamma"), py::arg("u0"))
        .def("record", &DiagnosticsAccumulator::record, py::arg("u"), py::arg("P"),
             py::arg("t"))
        .def("initial_l2_sq", &DiagnosticsAccumulator::initial_l2_sq);

    // entropy pairs and the weak-form residual
    py::class_<EntropyPair>(m, "EntropyPair")
        .def_readonly("name", &EntropyPair::name)
        .def_readonly("eta", &EntropyPair::eta)
        .def_readonly("eta_prime", &EntropyPair::eta_prime)
        .def_readonly("q", &EntropyPair::q);
    m.def("make_entropy_pair",
          py::overload_cast<const std::string&, double, double>(&make_entropy_pair),
          py::arg("kind"), py::arg("k"), py::arg("delta") = 0.0);
    m.def("make_custom_entropy_pair",
          py::overload_cast<std::function<double(double)>, std::function<double(double)>,
                            double, const std::string&>(&make_entropy_pair),
          py::arg("eta"), py::arg("eta_prime"), py::arg("range"),
          py::arg("name") = "custom");

    py::class_<BumpTest>(m, "BumpTest")
        .def(py::init<>())
        .def_readwrite("x_center", &BumpTest::x_center)
        .def_readwrite("x_radius", &BumpTest::x_radius)
        .def_readwrite("t_center", &BumpTest::t_center)
        .def_readwrite("t_radius", &BumpTest::t_radius);
    py::class_<TestBattery>(m, "TestBattery")
        .def(py::init<>())
        .def_readwrite("bumps", &TestBattery::bumps);
    m.def("make_battery", &make_battery, py::arg("xa"), py::arg("xb"), py::arg("ta"),
          py::arg("tb"), py::arg("nx") = 6, py::arg("nt") = 6);
    m.def("entropy_residual", &entropy_residual, py::arg("traj"), py::arg("pair"),
          py::arg("battery"));
    m.def("loglog_slope", &loglog_slope, py::arg("x"), py::arg("y"));

    // dispersive solver
    py::class_<DispersiveParams>(m, "DispersiveParams")
        .def(py::init<>())
        .def_readwrite("epsilon", &DispersiveParams::epsilon)
        .def_readwrite("beta", &DispersiveParams::beta)
        .def_readwrite("gamma", &DispersiveParams::gamma)
        .def_readwrite("dt", &DispersiveParams::dt)
        .def_readwrite("t_final", &DispersiveParams::t_final)
        .def_readwrite("snapshot_interval", &DispersiveParams::snapshot_interval)
        .def_readwrite("diagnostics_interval", &DispersiveParams::diagnostics_interval)
        .def_readwrite("forced_times", &DispersiveParams::forced_times)
        .def_readwrite("linear_only", &DispersiveParams::linear_only);
    m.def("linear_symbol", &linear_symbol, py::arg("k"), py::arg("epsilon"), py::arg("beta"));
    m.def("nonlinear_rhs", &nonlinear_rhs, py::arg("u"), py::arg("p"));
    m.def("step", &step, py::arg("u"), py::arg("p"), py::arg("dt"));
    m.def("integrate", &integrate, py::arg("u0"), py::arg("p"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<ManufacturedSpec>(m, "ManufacturedSpec")
        .def(py::init<>())
        .def_readwrite("amplitude", &ManufacturedSpec::amplitude)
        .def_readwrite("center", &ManufacturedSpec::center)
        .def_readwrite("width", &ManufacturedSpec::width);
    py::class_<MmsErrorSample>(m, "MmsErrorSample")
        .def_readonly("t", &MmsErrorSample::t)
        .def_readonly("sup_error", &MmsErrorSample::sup_error)
        .def_readonly("l2_error", &MmsErrorSample::l2_error);
    py::class_<MmsResult>(m, "MmsResult")
        .def_readonly("traj", &MmsResult::traj)
        .def_readonly("errors", &MmsResult::errors)
        .def_readonly("final_sup_error", &MmsResult::final_sup_error)
        .def_readonly("final_l2_error", &MmsResult::final_l2_error);
    m.def("integrate_manufactured", &integrate_manufactured, py::arg("grid"), py::arg("p"),
          py::arg("exact"), py::call_guard<py::gil_scoped_release>());

    // finite-volume reference solver
    py::enum_<FluxKind>(m, "FluxKind")
        .value("godunov", FluxKind::godunov)
        .value("rusanov", FluxKind::rusanov);
    py::class_<FVParams>(m, "FVParams")
        .def(py::init<>())
        .def_readwrite("gamma", &FVParams::gamma)
        .def_readwrite("cfl", &FVParams::cfl)
        .def_readwrite("flux", &FVParams::flux)
        .def_readwrite("t_final", &FVParams::t_final)
        .def_readwrite("snapshot_interval", &FVParams::snapshot_interval)
        .def_readwrite("diagnostics_interval", &FVParams::diagnostics_interval)
        .def_readwrite("forced_times", &FVParams::forced_times)
        .def_readwrite("source_enabled", &FVParams::source_enabled);
    m.def("flux", &flux, py::arg("u"));
    m.def("godunov_flux", &godunov_flux, py::arg("ul"), py::arg("ur"));
    m.def("rusanov_flux", &rusanov_flux, py::arg("ul"), py::arg("ur"));
    m.def("max_wave_speed", &max_wave_speed, py::arg("u"));
    m.def("fv_step", &fv_step, py::arg("u"), py::arg("p"), py::arg("dt"));
    m.def("fv_integrate", &fv_integrate, py::arg("u0"), py::arg("p"),
          py::call_guard<py::gil_scoped_release>());
    m.def("total_variation", &total_variation, py::arg("u"));

    // transfer between grids
    m.def("restrict_conservative", &restrict_conservative, py::arg("fine"), py::arg("coarse"));
    m.def("lp_distance", &lp_distance, py::arg("a"), py::arg("b"), py::arg("p"),
          py::arg("xa"), py::arg("xb"));
    m.def("compare_at", &compare_at, py::arg("a"), py::arg("b"), py::arg("t"), py::arg("p"),
          py::arg("xa"), py::arg("xb"), py::arg("time_tol"));

    // sweep harness
    py::class_<RickerSpec>(m, "RickerSpec")
        .def(py::init<>())
        .def_readwrite("amplitude", &RickerSpec::amplitude)
        .def_readwrite("center", &RickerSpec::center)
        .def_readwrite("width", &RickerSpec::width);
    py::class_<Window>(m, "Window")
        .def(py::init<>())
        .def(py::init([](double a, double b) { return Window{a, b}; }), py::arg("a"),
             py::arg("b"))
        .def_readwrite("a", &Window::a)
        .def_readwrite("b", &Window::b);

    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("n_points", &SweepConfig::n_points)
        .def_readwrite("length", &SweepConfig::length)
        .def_readwrite("x_left", &SweepConfig::x_left)
        .def_readwrite("ic", &SweepConfig::ic)
        .def_readwrite("gamma", &SweepConfig::gamma)
        .def_readwrite("epsilons", &SweepConfig::epsilons)
        .def_readwrite("scaling_c", &SweepConfig::scaling_c)
        .def_readwrite("scaling_p", &SweepConfig::scaling_p)
        .def_readwrite("t_final", &SweepConfig::t_final)
        .def_readwrite("comparison_times", &SweepConfig::comparison_times)
        .def_readwrite("windows", &SweepConfig::windows)
        .def_readwrite("p_norms", &SweepConfig::p_norms)
        .def_readwrite("dt", &SweepConfig::dt)
        .def_readwrite("snapshot_interval", &SweepConfig::snapshot_interval)
        .def_readwrite("diagnostics_interval", &SweepConfig::diagnostics_interval)
        .def_readwrite("reference_refine", &SweepConfig::reference_refine)
        .def_readwrite("fv_cfl", &SweepConfig::fv_cfl)
        .def_readwrite("flux", &SweepConfig::flux)
        .def_readwrite("battery_nx", &SweepConfig::battery_nx)
        .def_readwrite("battery_nt", &SweepConfig::battery_nt);
    m.def("default_sweep_config", &default_sweep_config);
    m.def("validate_sweep_config",
          py::overload_cast<const SweepConfig&, bool>(&validate), py::arg("c"),
          py::arg("for_sweep"));

    py::class_<DistanceEntry>(m, "DistanceEntry")
        .def_readonly("time", &DistanceEntry::time)
        .def_readonly("window", &DistanceEntry::window)
        .def_readonly("p", &DistanceEntry::p)
        .def_readonly("value", &DistanceEntry::value);
    py::class_<ScalingRun>(m, "ScalingRun")
        .def_readonly("epsilon", &ScalingRun::epsilon)
        .def_readonly("beta", &ScalingRun::beta)
        .def_readonly("sup_linf_u", &ScalingRun::sup_linf_u)
        .def_readonly("sup_linf_P", &ScalingRun::sup_linf_P)
        .def_readonly("sup_l6_u", &ScalingRun::sup_l6_u)
        .def_readonly("sup_eps_l2_dxu", &ScalingRun::sup_eps_l2_dxu)
        .def_readonly("int_beta_l1_dxu_dxxu", &ScalingRun::int_beta_l1_dxu_dxxu)
        .def_readonly("int_beta2_l2_dxxu_over_eps", &ScalingRun::int_beta2_l2_dxxu_over_eps);
    py::class_<ScalingReport>(m, "ScalingReport")
        .def_readonly("runs", &ScalingReport::runs)
        .def_readonly("slope_linf_u_vs_beta", &ScalingReport::slope_linf_u_vs_beta)
        .def_readonly("sup_linf_P_coarsest", &ScalingReport::sup_linf_P_coarsest)
        .def_readonly("linf_P_bounded", &ScalingReport::linf_P_bounded);
    m.def("scaling_suite", &scaling_suite, py::arg("runs"));

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("epsilon", &RunResult::epsilon)
        .def_readonly("beta", &RunResult::beta)
        .def_readonly("completed", &RunResult::completed)
        .def_readonly("failure_reason", &RunResult::failure_reason)
        .def_readonly("distances", &RunResult::distances)
        .def_readonly("entropy_violation", &RunResult::entropy_violation)
        .def_readonly("sup_linf_P", &RunResult::sup_linf_P)
        .def_readonly("sup_linf_dxP", &RunResult::sup_linf_dxP)
        .def_readonly("scaling", &RunResult::scaling);
    py::class_<MetricTrend>(m, "MetricTrend")
        .def_readonly("time", &MetricTrend::time)
        .def_readonly("window", &MetricTrend::window)
        .def_readonly("p", &MetricTrend::p)
        .def_readonly("values", &MetricTrend::values)
        .def_readonly("non_increasing", &MetricTrend::non_increasing)
        .def_readonly("halved", &MetricTrend::halved);
    py::class_<SweepVerdicts>(m, "SweepVerdicts")
        .def_readonly("all_completed", &SweepVerdicts::all_completed)
        .def_readonly("distances_non_increasing", &SweepVerdicts::distances_non_increasing)
        .def_readonly("final_half_of_first", &SweepVerdicts::final_half_of_first)
        .def_readonly("entropy_trend_ok", &SweepVerdicts::entropy_trend_ok)
        .def_readonly("reference_converged", &SweepVerdicts::reference_converged);
    py::class_<PConvergence>(m, "PConvergence")
        .def_readonly("eps_linf_dxP", &PConvergence::eps_linf_dxP)
        .def_readonly("slope", &PConvergence::slope)
        .def_readonly("slope_ok", &PConvergence::slope_ok)
        .def_readonly("calibration", &PConvergence::calibration)
        .def_readonly("bound_ok", &PConvergence::bound_ok)
        .def_readonly("p_gap_sup", &PConvergence::p_gap_sup)
        .def_readonly("dxp_gap_sup", &PConvergence::dxp_gap_sup)
        .def_readonly("gaps_non_increasing", &PConvergence::gaps_non_increasing);
    py::class_<ConvergenceReport>(m, "ConvergenceReport")
        .def_readonly("config", &ConvergenceReport::config)
        .def_readonly("provenance", &ConvergenceReport::provenance)
        .def_readonly("runs", &ConvergenceReport::runs)
        .def_readonly("trends", &ConvergenceReport::trends)
        .def_readonly("verdicts", &ConvergenceReport::verdicts)
        .def_readonly("scaling", &ConvergenceReport::scaling)
        .def_readonly("p_convergence", &ConvergenceReport::p_convergence)
        .def_readonly("reference_doubling_max_change",
                      &ConvergenceReport::reference_doubling_max_change);
    py::class_<SweepOutput>(m, "SweepOutput")
        .def_readonly("report", &SweepOutput::report)
        .def_readonly("runs", &SweepOutput::runs)
        .def_readonly("reference", &SweepOutput::reference)
        .def_readonly("reference_doubled", &SweepOutput::reference_doubled);

    m.def("run_reference", &run_reference, py::arg("c"), py::arg("refine_override") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("run_sweep", &run_sweep, py::arg("c"), py::arg("jobs") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("assemble_report", &assemble_report, py::arg("c"), py::arg("runs"),
          py::arg("reference"), py::arg("reference_doubled"),
          py::call_guard<py::gil_scoped_release>());
    m.def("check_p_convergence", &check_p_convergence, py::arg("report"));

    // persistence
    m.def(
        "write_trajectory",
        [](const std::filesystem::path& dir, const Trajectory& t) {
            io::write_trajectory(dir, t);
        },
        py::arg("dir"), py::arg("traj"));
    m.def("read_trajectory", &io::read_trajectory, py::arg("dir"));
    m.def("serialize_diagnostics", &io::serialize_diagnostics, py::arg("records"));
    m.def("parse_diagnostics", &io::parse_diagnostics, py::arg("csv"));
    m.def(
        "report_json",
        [](const ConvergenceReport& r) { return report_to_json(r).dump(2); },
        py::arg("report"));
    m.def(
        "sweep_config_json",
        [](const SweepConfig& c) { return sweep_config_to_json(c).dump(2); }, py::arg("c"));
    m.def(
        "sweep_config_from_json",
        [](const std::string& text) {
            return sweep_config_from_json(nlohmann::json::parse(text), "<string>");
        },
        py::arg("text"));
    m.def("load_sweep_config", &load_sweep_config, py::arg("path"));

    m.attr("__all__") = py::make_tuple(
        "Grid1D", "make_grid", "Field", "ricker_ic", "mean", "project_zero_mean",
        "derivative", "cubic", "lp_norm", "lp_norm_local", "NonlocalSolution",
        "solve_p_regularized", "primitive", "second_primitive", "SolverKind",
        "TrajectoryMeta", "DiagnosticsRecord", "Trajectory", "record",
        "diagnostics_columns", "DiagnosticsAccumulator", "EntropyPair",
        "make_entropy_pair", "make_custom_entropy_pair", "BumpTest", "TestBattery",
        "make_battery", "entropy_residual", "loglog_slope", "DispersiveParams",
        "linear_symbol", "nonlinear_rhs", "step", "integrate", "ManufacturedSpec",
        "MmsErrorSample", "MmsResult", "integrate_manufactured", "FluxKind", "FVParams",
        "flux", "godunov_flux", "rusanov_flux", "max_wave_speed", "fv_step",
        "fv_integrate", "total_variation", "restrict_conservative", "lp_distance",
        "compare_at", "RickerSpec", "Window", "SweepConfig", "default_sweep_config",
        "validate_sweep_config", "DistanceEntry", "ScalingRun", "ScalingReport",
        "scaling_suite", "RunResult", "MetricTrend", "SweepVerdicts", "PConvergence",
        "ConvergenceReport", "SweepOutput", "run_reference", "run_sweep",
        "assemble_report", "check_p_convergence", "write_trajectory", "read_trajectory",
        "serialize_diagnostics", "parse_diagnostics", "report_json", "sweep_config_json",
        "sweep_config_from_json", "load_sweep_config");
}
