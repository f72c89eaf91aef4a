// On-disk formats: raw little-endian f64 snapshots with JSON sidecars,
// versioned diagnostics.csv, trajectory directories, gnuplot-ready .dat.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pulselab/trajectory.hpp"

namespace pulselab::io {

std::string format_double(double v); // shortest round-trip (%.17g)

// stem.f64 (raw little-endian doubles) + stem.json sidecar
// {n_points, length, x_left, time}.
void write_snapshot(const std::filesystem::path& stem, const Field& f, double time);
Field read_snapshot(const std::filesystem::path& stem, double* time_out = nullptr);

std::string serialize_diagnostics(const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> parse_diagnostics(const std::string& csv);

nlohmann::json meta_to_json(const TrajectoryMeta& m);
TrajectoryMeta meta_from_json(const nlohmann::json& j);

// dir/params.json, dir/diagnostics.csv, dir/snapshots/NNNN.{f64,json},
// dir/dat/*.dat. extra_params is merged into params.json.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& t,
                      const nlohmann::json& extra_params = {});
Trajectory read_trajectory(const std::filesystem::path& dir);

void write_dat(const std::filesystem::path& path, const std::vector<double>& x,
               const std::vector<double>& y);

} // namespace pulselab::io
