// JSON configs for the command-line tool. Loading validates the full schema
// before anything runs; errors carry the file position or the JSON path.
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "pulselab/harness.hpp"

namespace pulselab {

struct RunJob {
    SolverKind kind = SolverKind::dispersive;
    std::size_t n_points = 1024;
    double length = 40.0;
    double x_left = -20.0;
    RickerSpec ic;
    DispersiveParams dispersive;
    FVParams fv;
};

struct MmsJob {
    std::size_t n_points = 256;
    double length = 40.0;
    double x_left = -20.0;
    ManufacturedSpec exact;
    DispersiveParams dispersive;
    std::vector<double> dts = {4e-3, 2e-3, 1e-3};
};

// Versioned schemas; config files may carry a "schema" key which, when
// present, must match. report.json always carries one.
extern const char* const kRunConfigSchema;   // "pulselab-run-v1"
extern const char* const kSweepConfigSchema; // "pulselab-sweep-v1"
extern const char* const kMmsConfigSchema;   // "pulselab-mms-v1"
extern const char* const kReportSchema;      // "pulselab-report-v1"

RunJob load_run_config(const std::filesystem::path& path);
SweepConfig load_sweep_config(const std::filesystem::path& path);
MmsJob load_mms_config(const std::filesystem::path& path);

// label names the source in error messages (a file path, or e.g. "report.json#/config").
SweepConfig sweep_config_from_json(const nlohmann::json& j, const std::string& label);

nlohmann::json sweep_config_to_json(const SweepConfig& c);
nlohmann::json report_to_json(const ConvergenceReport& r);

} // namespace pulselab
