#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "pulselab/config.hpp"

namespace fs = std::filesystem;
using namespace pulselab;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "pulselab_config") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path file(const std::string& name, const std::string& body) const {
        fs::path p = path / name;
        std::ofstream(p) << body;
        return p;
    }
};

template <typename F> std::string error_of(F&& f) {
    try {
        f();
    } catch (const std::exception& ex) {
        return ex.what();
    }
    return "";
}

} // namespace

TEST_CASE("run config loads every field") {
    TempDir td;
    const fs::path p = td.file("run.json", R"({
      "solver": "dispersive",
      "grid": {"n_points": 512, "length": 30.0, "x_left": -15.0},
      "ic": {"amplitude": 0.8, "center": 1.0, "width": 1.25},
      "dispersive": {"epsilon": 0.2, "beta": 0.02, "gamma": 0.7, "dt": 0.001,
                     "t_final": 1.5, "snapshot_interval": 0.25,
                     "diagnostics_interval": 0.125, "forced_times": [0.8]},
      "fv": {"gamma": 0.7, "cfl": 0.4, "flux": "rusanov", "t_final": 1.5,
             "snapshot_interval": 0.25, "diagnostics_interval": 0.125,
             "forced_times": [0.8]}
    })");
    RunJob job = load_run_config(p);
    CHECK(job.kind == SolverKind::dispersive);
    CHECK(job.n_points == 512);
    CHECK(job.length == 30.0);
    CHECK(job.x_left == -15.0);
    CHECK(job.ic.amplitude == 0.8);
    CHECK(job.ic.center == 1.0);
    CHECK(job.ic.width == 1.25);
    CHECK(job.dispersive.epsilon == 0.2);
    CHECK(job.dispersive.beta == 0.02);
    CHECK(job.dispersive.gamma == 0.7);
    CHECK(job.dispersive.dt == 0.001);
    CHECK(job.dispersive.t_final == 1.5);
    CHECK(job.dispersive.snapshot_interval == 0.25);
    CHECK(job.dispersive.diagnostics_interval == 0.125);
    REQUIRE(job.dispersive.forced_times.size() == 1);
    CHECK(job.dispersive.forced_times[0] == 0.8);
    CHECK(job.fv.gamma == 0.7);
    CHECK(job.fv.cfl == 0.4);
    CHECK(job.fv.flux == FluxKind::rusanov);
    REQUIRE(job.fv.forced_times.size() == 1);
}

TEST_CASE("run config applies defaults for missing sections") {
    TempDir td;
    RunJob job = load_run_config(td.file("min.json", R"({"solver": "finite_volume"})"));
    CHECK(job.kind == SolverKind::finite_volume);
    CHECK(job.n_points == 1024);
    CHECK(job.length == 40.0);
    CHECK(job.x_left == -20.0);
    CHECK(job.ic.amplitude == 1.0);
    CHECK(job.fv.flux == FluxKind::godunov);
    CHECK(job.dispersive.epsilon == 0.1);
}

TEST_CASE("run config rejects malformed input with located messages") {
    TempDir td;
    CHECK_THROWS_AS(load_run_config(td.path / "absent.json"), std::runtime_error);

    const fs::path bad = td.file("bad.json", "{oops");
    const std::string parse_msg = error_of([&] { load_run_config(bad); });
    CHECK(parse_msg.find("line") != std::string::npos);

    const fs::path typo = td.file("typo.json", R"({"solver": "dispersive", "grd": {}})");
    CHECK(error_of([&] { load_run_config(typo); }).find("grd") != std::string::npos);

    const fs::path nosolver = td.file("nosolver.json", R"({"grid": {}})");
    CHECK(error_of([&] { load_run_config(nosolver); }).find("solver") != std::string::npos);

    const fs::path badkind = td.file("kind.json", R"({"solver": "spectral"})");
    CHECK_THROWS_AS(load_run_config(badkind), std::runtime_error);

    const fs::path badtype = td.file("type.json",
                                     R"({"solver": "dispersive", "grid": {"n_points": "big"}})");
    CHECK(error_of([&] { load_run_config(badtype); }).find("n_points") != std::string::npos);

    const fs::path badflux =
        td.file("flux.json", R"({"solver": "finite_volume", "fv": {"flux": "upwind"}})");
    CHECK_THROWS_AS(load_run_config(badflux), std::runtime_error);

    const fs::path badwidth =
        td.file("width.json", R"({"solver": "dispersive", "ic": {"width": -1.0}})");
    CHECK_THROWS_AS(load_run_config(badwidth), std::invalid_argument);
}

TEST_CASE("sweep config round-trips through json") {
    SweepConfig c = default_sweep_config();
    c.n_points = 256;
    c.epsilons = {0.2, 0.1, 0.05};
    c.scaling_c = 0.5;
    c.scaling_p = 3.0;
    c.comparison_times = {0.5, 1.0};
    c.windows = {{-10.0, 10.0}, {-5.0, 5.0}};
    c.p_norms = {1.0, 2.0};
    c.reference_refine = 4;
    c.flux = FluxKind::rusanov;
    c.battery_nx = 4;
    c.battery_nt = 5;

    TempDir td;
    const fs::path p = td.file("sweep.json", sweep_config_to_json(c).dump(2));
    SweepConfig b = load_sweep_config(p);
    CHECK(b.n_points == c.n_points);
    CHECK(b.length == c.length);
    CHECK(b.x_left == c.x_left);
    CHECK(b.ic.amplitude == c.ic.amplitude);
    CHECK(b.ic.width == c.ic.width);
    CHECK(b.gamma == c.gamma);
    CHECK(b.epsilons == c.epsilons);
    CHECK(b.scaling_c == c.scaling_c);
    CHECK(b.scaling_p == c.scaling_p);
    CHECK(b.t_final == c.t_final);
    CHECK(b.comparison_times == c.comparison_times);
    REQUIRE(b.windows.size() == 2);
    CHECK(b.windows[1].a == -5.0);
    CHECK(b.windows[1].b == 5.0);
    CHECK(b.p_norms == c.p_norms);
    CHECK(b.dt == c.dt);
    CHECK(b.snapshot_interval == c.snapshot_interval);
    CHECK(b.diagnostics_interval == c.diagnostics_interval);
    CHECK(b.reference_refine == 4);
    CHECK(b.fv_cfl == c.fv_cfl);
    CHECK(b.flux == FluxKind::rusanov);
    CHECK(b.battery_nx == 4);
    CHECK(b.battery_nt == 5);
}

TEST_CASE("sweep config validation") {
    SweepConfig c = default_sweep_config();
    CHECK_NOTHROW(validate(c, true));

    SweepConfig inc = c;
    inc.epsilons = {0.05, 0.1, 0.2};
    CHECK_THROWS_AS(validate(inc, false), std::invalid_argument);

    SweepConfig two = c;
    two.epsilons = {0.1, 0.05};
    CHECK_NOTHROW(validate(two, false));
    CHECK_THROWS_AS(validate(two, true), std::invalid_argument);

    SweepConfig badp = c;
    badp.scaling_p = 1.5; // p >= 2 separates the scaling regimes
    CHECK_THROWS_AS(validate(badp, false), std::invalid_argument);

    SweepConfig badnorm = c;
    badnorm.p_norms = {1.0, 6.0}; // norms live in [1, 6)
    CHECK_THROWS_AS(validate(badnorm, false), std::invalid_argument);

    SweepConfig badwin = c;
    badwin.windows = {{3.0, -3.0}};
    CHECK_THROWS_AS(validate(badwin, false), std::invalid_argument);

    SweepConfig late = c;
    late.comparison_times = {c.t_final + 1.0};
    CHECK_THROWS_AS(validate(late, false), std::invalid_argument);

    SweepConfig badc = c;
    badc.scaling_c = 0.0;
    CHECK_THROWS_AS(validate(badc, false), std::invalid_argument);
}

TEST_CASE("mms config loads and validates") {
    TempDir td;
    const fs::path p = td.file("mms.json", R"({
      "grid": {"n_points": 128, "length": 20.0, "x_left": -10.0},
      "exact": {"amplitude": 0.5, "center": 0.0, "width": 1.3},
      "dispersive": {"epsilon": 0.1, "beta": 0.01, "gamma": 0.5, "dt": 0.002,
                     "t_final": 0.5, "snapshot_interval": 0.25,
                     "diagnostics_interval": 0.25},
      "dts": [0.008, 0.004, 0.002]
    })");
    MmsJob job = load_mms_config(p);
    CHECK(job.n_points == 128);
    CHECK(job.exact.width == 1.3);
    CHECK(job.dts == std::vector<double>{0.008, 0.004, 0.002});

    MmsJob defaults = load_mms_config(td.file("mmsmin.json", "{}"));
    CHECK(defaults.n_points == 256);
    CHECK(defaults.dts == std::vector<double>{4e-3, 2e-3, 1e-3});

    const fs::path rising = td.file("rising.json", R"({"dts": [0.001, 0.002]})");
    CHECK_THROWS_AS(load_mms_config(rising), std::invalid_argument);
    const fs::path empty = td.file("empty.json", R"({"dts": []})");
    CHECK_THROWS_AS(load_mms_config(empty), std::invalid_argument);
}

TEST_CASE("schema keys are optional, emitted, and version-checked") {
    TempDir td;
    const fs::path ok = td.file("ok.json", R"({"schema": "pulselab-run-v1", "solver": "dispersive"})");
    CHECK_NOTHROW(load_run_config(ok));
    const fs::path wrong =
        td.file("wrong.json", R"({"schema": "pulselab-run-v9", "solver": "dispersive"})");
    CHECK(error_of([&] { load_run_config(wrong); }).find("pulselab-run-v9") !=
          std::string::npos);

    const json sj = sweep_config_to_json(default_sweep_config());
    CHECK(sj.at("schema") == kSweepConfigSchema);
    const fs::path sweep_wrong =
        td.file("sweep.json", R"({"schema": "pulselab-run-v1"})");
    CHECK_THROWS_AS(load_sweep_config(sweep_wrong), std::runtime_error);

    const fs::path mms_ok =
        td.file("mms.json", R"({"schema": "pulselab-mms-v1"})");
    CHECK_NOTHROW(load_mms_config(mms_ok));
}

TEST_CASE("report serialization carries the verdicts and runs") {
    ConvergenceReport r;
    r.config = default_sweep_config();
    r.provenance = "defaults chosen by the tool";
    RunResult run;
    run.epsilon = 0.1;
    run.beta = 0.01;
    run.distances.push_back({1.0, {-10.0, 10.0}, 1.0, 0.25});
    run.entropy_violation = 0.0;
    r.runs.push_back(run);
    MetricTrend tr;
    tr.time = 1.0;
    tr.window = {-10.0, 10.0};
    tr.p = 1.0;
    tr.values = {0.25};
    r.trends.push_back(tr);
    r.verdicts.distances_non_increasing = true;
    r.verdicts.final_half_of_first = false;
    r.p_convergence.eps_linf_dxP = {0.3};
    r.p_convergence.slope = 0.55;
    r.reference_doubling_max_change = 0.04;

    const json j = report_to_json(r);
    CHECK(j.at("schema") == kReportSchema);
    CHECK(j.at("provenance") == "defaults chosen by the tool");
    CHECK(j.at("config").at("epsilons").size() == 4);
    REQUIRE(j.at("runs").size() == 1);
    CHECK(j.at("runs")[0].at("epsilon") == 0.1);
    CHECK(j.at("runs")[0].at("distances")[0].at("value") == 0.25);
    CHECK(j.at("runs")[0].at("distances")[0].at("window")[0] == -10.0);
    CHECK(j.at("trends")[0].at("values")[0] == 0.25);
    CHECK(j.at("verdicts").at("final_half_of_first") == false);
    CHECK(j.at("verdicts").at("distances_non_increasing") == true);
    CHECK(j.at("p_convergence").at("slope") == 0.55);
    CHECK(j.at("reference_doubling_max_change") == 0.04);
    CHECK(j.at("scaling").contains("slope_linf_u_vs_beta"));
}
