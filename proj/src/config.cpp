#include "pulselab/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

namespace pulselab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& file, const std::string& what) {
    throw std::runtime_error(file + ": " + what);
}

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in.good()) bad(path.string(), "cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::exception& ex) {
        bad(path.string(), ex.what()); // parse errors carry line and column
    }
}

struct Ctx {
    std::string file;

    void expect_keys(const json& j, const std::string& path,
                     std::initializer_list<const char*> allowed) const {
        if (!j.is_object()) bad(file, path + ": expected an object");
        for (const auto& item : j.items()) {
            bool known = false;
            for (const char* k : allowed) known = known || item.key() == k;
            if (!known) bad(file, path + ": unknown key '" + item.key() + "'");
        }
    }

    double num(const json& j, const std::string& path, const char* key, double dflt) const {
        if (!j.contains(key)) return dflt;
        const auto& v = j.at(key);
        if (!v.is_number()) bad(file, path + "." + key + ": expected a number");
        return v.get<double>();
    }

    std::size_t count(const json& j, const std::string& path, const char* key,
                      std::size_t dflt) const {
        if (!j.contains(key)) return dflt;
        const auto& v = j.at(key);
        if (!v.is_number_unsigned())
            bad(file, path + "." + key + ": expected a nonnegative integer");
        return v.get<std::size_t>();
    }

    std::string text(const json& j, const std::string& path, const char* key,
                     const std::string& dflt) const {
        if (!j.contains(key)) return dflt;
        const auto& v = j.at(key);
        if (!v.is_string()) bad(file, path + "." + key + ": expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const json& j, const std::string& path, const char* key,
                                std::vector<double> dflt) const {
        if (!j.contains(key)) return dflt;
        const auto& v = j.at(key);
        if (!v.is_array()) bad(file, path + "." + key + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) bad(file, path + "." + key + ": expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    void fill_grid(const json& j, std::size_t& n, double& length, double& x_left) const {
        if (!j.contains("grid")) return;
        const auto& g = j.at("grid");
        expect_keys(g, "grid", {"n_points", "length", "x_left"});
        n = count(g, "grid", "n_points", n);
        length = num(g, "grid", "length", length);
        x_left = num(g, "grid", "x_left", x_left);
    }

    RickerSpec ricker(const json& j, const char* key, RickerSpec spec) const {
        if (!j.contains(key)) return spec;
        const auto& r = j.at(key);
        expect_keys(r, key, {"amplitude", "center", "width"});
        spec.amplitude = num(r, key, "amplitude", spec.amplitude);
        spec.center = num(r, key, "center", spec.center);
        spec.width = num(r, key, "width", spec.width);
        if (!(spec.width > 0.0))
            throw std::invalid_argument(file + ": " + key + ".width must be positive");
        return spec;
    }

    FluxKind flux(const json& j, const std::string& path, const char* key,
                  FluxKind dflt) const {
        const std::string name =
            text(j, path, key, dflt == FluxKind::godunov ? "godunov" : "rusanov");
        if (name == "godunov") return FluxKind::godunov;
        if (name == "rusanov") return FluxKind::rusanov;
        bad(file, path + "." + key + ": unknown flux '" + name + "'");
    }

    DispersiveParams dispersive(const json& j, DispersiveParams p) const {
        if (!j.contains("dispersive")) return p;
        const auto& d = j.at("dispersive");
        expect_keys(d, "dispersive",
                    {"epsilon", "beta", "gamma", "dt", "t_final", "snapshot_interval",
                     "diagnostics_interval", "forced_times"});
        p.epsilon = num(d, "dispersive", "epsilon", p.epsilon);
        p.beta = num(d, "dispersive", "beta", p.beta);
        p.gamma = num(d, "dispersive", "gamma", p.gamma);
        p.dt = num(d, "dispersive", "dt", p.dt);
        p.t_final = num(d, "dispersive", "t_final", p.t_final);
        p.snapshot_interval = num(d, "dispersive", "snapshot_interval", p.snapshot_interval);
        p.diagnostics_interval =
            num(d, "dispersive", "diagnostics_interval", p.diagnostics_interval);
        p.forced_times = numbers(d, "dispersive", "forced_times", p.forced_times);
        return p;
    }

    FVParams fv(const json& j, FVParams p) const {
        if (!j.contains("fv")) return p;
        const auto& f = j.at("fv");
        expect_keys(f, "fv",
                    {"gamma", "cfl", "flux", "t_final", "snapshot_interval",
                     "diagnostics_interval", "forced_times"});
        p.gamma = num(f, "fv", "gamma", p.gamma);
        p.cfl = num(f, "fv", "cfl", p.cfl);
        p.flux = flux(f, "fv", "flux", p.flux);
        p.t_final = num(f, "fv", "t_final", p.t_final);
        p.snapshot_interval = num(f, "fv", "snapshot_interval", p.snapshot_interval);
        p.diagnostics_interval = num(f, "fv", "diagnostics_interval", p.diagnostics_interval);
        p.forced_times = numbers(f, "fv", "forced_times", p.forced_times);
        return p;
    }
};

} // namespace

const char* const kRunConfigSchema = "pulselab-run-v1";
const char* const kSweepConfigSchema = "pulselab-sweep-v1";
const char* const kMmsConfigSchema = "pulselab-mms-v1";
const char* const kReportSchema = "pulselab-report-v1";

namespace {

// "schema" is optional in configs; when present it must name this version
void check_schema(const Ctx& ctx, const json& j, const char* expected) {
    if (!j.contains("schema")) return;
    const std::string got = ctx.text(j, "config", "schema", expected);
    if (got != expected)
        bad(ctx.file, "schema: expected '" + std::string(expected) + "', got '" + got + "'");
}

} // namespace

RunJob load_run_config(const fs::path& path) {
    const json j = load_json(path);
    const Ctx ctx{path.string()};
    ctx.expect_keys(j, "config", {"schema", "solver", "grid", "ic", "dispersive", "fv"});
    check_schema(ctx, j, kRunConfigSchema);
    if (!j.contains("solver")) bad(ctx.file, "missing required key 'solver'");

    RunJob job;
    const std::string kind = ctx.text(j, "config", "solver", "");
    if (kind == "dispersive")
        job.kind = SolverKind::dispersive;
    else if (kind == "finite_volume")
        job.kind = SolverKind::finite_volume;
    else
        bad(ctx.file, "solver: expected 'dispersive' or 'finite_volume', got '" + kind + "'");

    ctx.fill_grid(j, job.n_points, job.length, job.x_left);
    job.ic = ctx.ricker(j, "ic", job.ic);
    job.dispersive = ctx.dispersive(j, job.dispersive);
    job.fv = ctx.fv(j, job.fv);
    return job;
}

SweepConfig load_sweep_config(const fs::path& path) {
    return sweep_config_from_json(load_json(path), path.string());
}

SweepConfig sweep_config_from_json(const json& j, const std::string& label) {
    const Ctx ctx{label};
    ctx.expect_keys(j, "config",
                    {"schema", "grid", "ic", "gamma", "epsilons", "scaling", "t_final",
                     "comparison_times", "windows", "p_norms", "dt", "snapshot_interval",
                     "diagnostics_interval", "reference_refine", "fv_cfl", "flux", "battery"});
    check_schema(ctx, j, kSweepConfigSchema);

    SweepConfig c;
    ctx.fill_grid(j, c.n_points, c.length, c.x_left);
    c.ic = ctx.ricker(j, "ic", c.ic);
    c.gamma = ctx.num(j, "config", "gamma", c.gamma);
    c.epsilons = ctx.numbers(j, "config", "epsilons", c.epsilons);
    if (j.contains("scaling")) {
        const auto& s = j.at("scaling");
        ctx.expect_keys(s, "scaling", {"c", "p"});
        c.scaling_c = ctx.num(s, "scaling", "c", c.scaling_c);
        c.scaling_p = ctx.num(s, "scaling", "p", c.scaling_p);
    }
    c.t_final = ctx.num(j, "config", "t_final", c.t_final);
    c.comparison_times = ctx.numbers(j, "config", "comparison_times", c.comparison_times);
    if (j.contains("windows")) {
        const auto& w = j.at("windows");
        if (!w.is_array()) bad(ctx.file, "windows: expected an array of [a, b] pairs");
        c.windows.clear();
        for (const auto& e : w) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                bad(ctx.file, "windows: expected an array of [a, b] pairs");
            c.windows.push_back({e[0].get<double>(), e[1].get<double>()});
        }
    }
    c.p_norms = ctx.numbers(j, "config", "p_norms", c.p_norms);
    c.dt = ctx.num(j, "config", "dt", c.dt);
    c.snapshot_interval = ctx.num(j, "config", "snapshot_interval", c.snapshot_interval);
    c.diagnostics_interval =
        ctx.num(j, "config", "diagnostics_interval", c.diagnostics_interval);
    c.reference_refine = ctx.count(j, "config", "reference_refine", c.reference_refine);
    c.fv_cfl = ctx.num(j, "config", "fv_cfl", c.fv_cfl);
    c.flux = ctx.flux(j, "config", "flux", c.flux);
    if (j.contains("battery")) {
        const auto& b = j.at("battery");
        ctx.expect_keys(b, "battery", {"nx", "nt"});
        c.battery_nx = ctx.count(b, "battery", "nx", c.battery_nx);
        c.battery_nt = ctx.count(b, "battery", "nt", c.battery_nt);
    }
    validate(c, false);
    return c;
}

MmsJob load_mms_config(const fs::path& path) {
    const json j = load_json(path);
    const Ctx ctx{path.string()};
    ctx.expect_keys(j, "config", {"schema", "grid", "exact", "dispersive", "dts"});
    check_schema(ctx, j, kMmsConfigSchema);

    MmsJob job;
    ctx.fill_grid(j, job.n_points, job.length, job.x_left);
    RickerSpec spec{job.exact.amplitude, job.exact.center, job.exact.width};
    spec = ctx.ricker(j, "exact", spec);
    job.exact = {spec.amplitude, spec.center, spec.width};
    job.dispersive = ctx.dispersive(j, job.dispersive);
    job.dts = ctx.numbers(j, "config", "dts", job.dts);
    if (job.dts.empty()) throw std::invalid_argument(ctx.file + ": dts must be nonempty");
    for (std::size_t i = 0; i < job.dts.size(); ++i) {
        if (!(job.dts[i] > 0.0))
            throw std::invalid_argument(ctx.file + ": dts must be positive");
        if (i > 0 && !(job.dts[i] < job.dts[i - 1]))
            throw std::invalid_argument(ctx.file + ": dts must be strictly decreasing");
    }
    return job;
}

json sweep_config_to_json(const SweepConfig& c) {
    json windows = json::array();
    for (const auto& w : c.windows) windows.push_back({w.a, w.b});
    return {{"schema", kSweepConfigSchema},
            {"grid",
             {{"n_points", c.n_points}, {"length", c.length}, {"x_left", c.x_left}}},
            {"ic",
             {{"amplitude", c.ic.amplitude},
              {"center", c.ic.center},
              {"width", c.ic.width}}},
            {"gamma", c.gamma},
            {"epsilons", c.epsilons},
            {"scaling", {{"c", c.scaling_c}, {"p", c.scaling_p}}},
            {"t_final", c.t_final},
            {"comparison_times", c.comparison_times},
            {"windows", windows},
            {"p_norms", c.p_norms},
            {"dt", c.dt},
            {"snapshot_interval", c.snapshot_interval},
            {"diagnostics_interval", c.diagnostics_interval},
            {"reference_refine", c.reference_refine},
            {"fv_cfl", c.fv_cfl},
            {"flux", flux_name(c.flux)},
            {"battery", {{"nx", c.battery_nx}, {"nt", c.battery_nt}}}};
}

json report_to_json(const ConvergenceReport& r) {
    auto window_pair = [](const Window& w) { return json::array({w.a, w.b}); };
    auto scaling_run = [](const ScalingRun& s) {
        return json{{"epsilon", s.epsilon},
                    {"beta", s.beta},
                    {"sup_linf_u", s.sup_linf_u},
                    {"sup_linf_P", s.sup_linf_P},
                    {"sup_l6_u", s.sup_l6_u},
                    {"sup_eps_l2_dxu", s.sup_eps_l2_dxu},
                    {"int_beta_l1_dxu_dxxu", s.int_beta_l1_dxu_dxxu},
                    {"int_beta2_l2_dxxu_over_eps", s.int_beta2_l2_dxxu_over_eps}};
    };

    json runs = json::array();
    for (const auto& run : r.runs) {
        json distances = json::array();
        for (const auto& d : run.distances)
            distances.push_back({{"time", d.time},
                                 {"window", window_pair(d.window)},
                                 {"p", d.p},
                                 {"value", d.value}});
        runs.push_back({{"epsilon", run.epsilon},
                        {"beta", run.beta},
                        {"completed", run.completed},
                        {"failure_reason", run.failure_reason},
                        {"distances", distances},
                        {"entropy_violation", run.entropy_violation},
                        {"sup_linf_P", run.sup_linf_P},
                        {"sup_linf_dxP", run.sup_linf_dxP},
                        {"scaling", scaling_run(run.scaling)}});
    }

    json trends = json::array();
    for (const auto& t : r.trends)
        trends.push_back({{"time", t.time},
                          {"window", window_pair(t.window)},
                          {"p", t.p},
                          {"values", t.values},
                          {"non_increasing", t.non_increasing},
                          {"halved", t.halved}});

    json scaling_runs = json::array();
    for (const auto& s : r.scaling.runs) scaling_runs.push_back(scaling_run(s));

    return {{"schema", kReportSchema},
            {"config", sweep_config_to_json(r.config)},
            {"provenance", r.provenance},
            {"runs", runs},
            {"trends", trends},
            {"verdicts",
             {{"all_completed", r.verdicts.all_completed},
              {"distances_non_increasing", r.verdicts.distances_non_increasing},
              {"final_half_of_first", r.verdicts.final_half_of_first},
              {"entropy_trend_ok", r.verdicts.entropy_trend_ok},
              {"reference_converged", r.verdicts.reference_converged}}},
            {"scaling",
             {{"runs", scaling_runs},
              {"slope_linf_u_vs_beta", r.scaling.slope_linf_u_vs_beta},
              {"sup_linf_P_coarsest", r.scaling.sup_linf_P_coarsest},
              {"linf_P_bounded", r.scaling.linf_P_bounded}}},
            {"p_convergence",
             {{"eps_linf_dxP", r.p_convergence.eps_linf_dxP},
              {"slope", r.p_convergence.slope},
              {"slope_ok", r.p_convergence.slope_ok},
              {"calibration", r.p_convergence.calibration},
              {"bound_ok", r.p_convergence.bound_ok},
              {"p_gap_sup", r.p_convergence.p_gap_sup},
              {"dxp_gap_sup", r.p_convergence.dxp_gap_sup},
              {"gaps_non_increasing", r.p_convergence.gaps_non_increasing}}},
            {"reference_doubling_max_change", r.reference_doubling_max_change}};
}

} // namespace pulselab
