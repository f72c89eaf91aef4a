#include "pulselab/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pulselab::io {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "snapshot payloads are stored little-endian");

namespace {

[[noreturn]] void fail(const fs::path& p, const std::string& what) {
    throw std::runtime_error(p.string() + ": " + what);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in.good()) fail(p, "cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out.good()) fail(p, "write failed");
}

json parse_json_file(const fs::path& p) {
    try {
        return json::parse(slurp(p));
    } catch (const json::exception& ex) {
        fail(p, ex.what());
    }
}

double parse_number(const std::string& tok, const char* where) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size())
        throw std::runtime_error(std::string(where) + ": bad number '" + tok + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) return out;
        start = pos + 1;
    }
}

DiagnosticsRecord record_from_row(const std::vector<double>& row) {
    DiagnosticsRecord r;
    double* fields[] = {&r.t,       &r.l2_u,    &r.l6_u,          &r.linf_u,
                        &r.mean_u,  &r.mean_P,  &r.linf_P,        &r.l2_P,
                        &r.l2_dxP,  &r.l2_dxxP, &r.l2_dxu,        &r.l2_dxxu,
                        &r.l1_dxu_dxxu, &r.G1,  &r.G2,            &r.energy_margin,
                        &r.p_identity_residual, &r.up_identity_residual, &r.F_right_edge};
    for (std::size_t i = 0; i < row.size(); ++i) *fields[i] = row[i];
    return r;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_snapshot(const fs::path& stem, const Field& f, double time) {
    fs::path raw = stem, side = stem;
    raw += ".f64";
    side += ".json";
    std::ofstream out(raw, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!out.good()) fail(raw, "write failed");
    const json j = {{"n_points", f.grid.n},
                    {"length", f.grid.length},
                    {"x_left", f.grid.x_left},
                    {"time", time}};
    spill(side, j.dump(2) + "\n");
}

Field read_snapshot(const fs::path& stem, double* time_out) {
    fs::path raw = stem, side = stem;
    raw += ".f64";
    side += ".json";
    const json j = parse_json_file(side);
    std::size_t n = 0;
    double length = 0.0, x_left = 0.0, time = 0.0;
    try {
        n = j.at("n_points").get<std::size_t>();
        length = j.at("length").get<double>();
        x_left = j.at("x_left").get<double>();
        time = j.at("time").get<double>();
    } catch (const json::exception& ex) {
        fail(side, ex.what());
    }
    const std::string payload = slurp(raw);
    if (payload.size() != n * sizeof(double))
        fail(raw, "payload holds " + std::to_string(payload.size() / sizeof(double)) +
                      " doubles, sidecar says " + std::to_string(n));
    Field f{make_grid(n, length, x_left), std::vector<double>(n)};
    std::memcpy(f.values.data(), payload.data(), payload.size());
    if (time_out) *time_out = time;
    return f;
}

std::string serialize_diagnostics(const std::vector<DiagnosticsRecord>& records) {
    std::string out = std::string("# ") + kDiagnosticsSchema + "\n";
    const auto cols = diagnostics_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out += ',';
        out += cols[c];
    }
    out += '\n';
    for (const auto& r : records) {
        const auto row = diagnostics_row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::vector<DiagnosticsRecord> parse_diagnostics(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != std::string("# ") + kDiagnosticsSchema)
        throw std::runtime_error("diagnostics.csv: missing schema line '# " +
                                 std::string(kDiagnosticsSchema) + "'");
    const auto cols = diagnostics_columns();
    std::string want_header;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) want_header += ',';
        want_header += cols[c];
    }
    if (!std::getline(in, line) || line != want_header)
        throw std::runtime_error("diagnostics.csv: header does not match schema " +
                                 std::string(kDiagnosticsSchema));
    std::vector<DiagnosticsRecord> out;
    for (std::size_t row_no = 1; std::getline(in, line); ++row_no) {
        if (line.empty()) continue;
        const auto toks = split(line, ',');
        if (toks.size() != cols.size())
            throw std::runtime_error("diagnostics.csv row " + std::to_string(row_no) +
                                     ": expected " + std::to_string(cols.size()) +
                                     " fields, got " + std::to_string(toks.size()));
        std::vector<double> row(toks.size());
        for (std::size_t c = 0; c < toks.size(); ++c)
            row[c] = parse_number(toks[c], "diagnostics.csv");
        out.push_back(record_from_row(row));
    }
    return out;
}

json meta_to_json(const TrajectoryMeta& m) {
    return {{"kind", m.kind == SolverKind::dispersive ? "dispersive" : "finite_volume"},
            {"epsilon", m.epsilon}, {"beta", m.beta}, {"gamma", m.gamma},
            {"dt", m.dt},           {"cfl", m.cfl},   {"flux", m.flux}};
}

TrajectoryMeta meta_from_json(const json& j) {
    TrajectoryMeta m;
    std::string kind;
    try {
        kind = j.at("kind").get<std::string>();
        m.epsilon = j.at("epsilon").get<double>();
        m.beta = j.at("beta").get<double>();
        m.gamma = j.at("gamma").get<double>();
        m.dt = j.at("dt").get<double>();
        m.cfl = j.at("cfl").get<double>();
        m.flux = j.at("flux").get<std::string>();
    } catch (const json::exception& ex) {
        throw std::runtime_error(std::string("trajectory metadata: ") + ex.what());
    }
    if (kind == "dispersive")
        m.kind = SolverKind::dispersive;
    else if (kind == "finite_volume")
        m.kind = SolverKind::finite_volume;
    else
        throw std::runtime_error("trajectory metadata: unknown solver kind '" + kind + "'");
    return m;
}

void write_trajectory(const fs::path& dir, const Trajectory& t, const json& extra_params) {
    fs::create_directories(dir / "snapshots");
    fs::create_directories(dir / "dat");

    json params = {{"grid",
                    {{"n_points", t.grid.n},
                     {"length", t.grid.length},
                     {"x_left", t.grid.x_left}}},
                   {"solver", meta_to_json(t.meta)},
                   {"completed", t.completed},
                   {"failure_reason", t.failure_reason}};
    if (!extra_params.is_null()) params.update(extra_params);
    spill(dir / "params.json", params.dump(2) + "\n");

    spill(dir / "diagnostics.csv", serialize_diagnostics(t.records));

    for (std::size_t i = 0; i < t.times.size(); ++i) {
        char name[16];
        std::snprintf(name, sizeof name, "%04zu", i);
        write_snapshot(dir / "snapshots" / name, Field{t.grid, t.snapshots[i]}, t.times[i]);
    }

    std::vector<double> ts(t.records.size());
    for (std::size_t i = 0; i < t.records.size(); ++i) ts[i] = t.records[i].t;
    const auto cols = diagnostics_columns();
    for (std::size_t c = 1; c < cols.size(); ++c) {
        std::vector<double> ys(t.records.size());
        for (std::size_t i = 0; i < t.records.size(); ++i)
            ys[i] = diagnostics_row(t.records[i])[c];
        write_dat(dir / "dat" / (cols[c] + ".dat"), ts, ys);
    }
}

Trajectory read_trajectory(const fs::path& dir) {
    if (!fs::is_directory(dir)) fail(dir, "not a trajectory directory");
    const json params = parse_json_file(dir / "params.json");

    Trajectory t;
    try {
        const auto& g = params.at("grid");
        t.grid = make_grid(g.at("n_points").get<std::size_t>(), g.at("length").get<double>(),
                           g.at("x_left").get<double>());
        t.meta = meta_from_json(params.at("solver"));
        t.completed = params.at("completed").get<bool>();
        t.failure_reason = params.at("failure_reason").get<std::string>();
    } catch (const json::exception& ex) {
        fail(dir / "params.json", ex.what());
    }

    t.records = parse_diagnostics(slurp(dir / "diagnostics.csv"));

    std::vector<fs::path> stems;
    for (const auto& e : fs::directory_iterator(dir / "snapshots"))
        if (e.path().extension() == ".f64") {
            fs::path stem = e.path();
            stem.replace_extension();
            stems.push_back(stem);
        }
    std::sort(stems.begin(), stems.end());
    for (const auto& stem : stems) {
        double time = 0.0;
        Field f = read_snapshot(stem, &time);
        if (f.grid != t.grid) fail(stem, "snapshot grid differs from params.json");
        t.times.push_back(time);
        t.snapshots.push_back(std::move(f.values));
    }
    return t;
}

void write_dat(const fs::path& path, const std::vector<double>& x,
               const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("write_dat: column lengths differ");
    std::string body;
    for (std::size_t i = 0; i < x.size(); ++i)
        body += format_double(x[i]) + " " + format_double(y[i]) + "\n";
    spill(path, body);
}

} // namespace pulselab::io
