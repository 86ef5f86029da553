#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "landau/solver.hpp"

namespace landau {

/// Flat "key = value" configuration, '#' starts a comment.
///
/// Required: n, L, t_end, p, m, initial. Optional: cfl (0.5), snapshot_every (1),
/// clip_negatives (false), coefficient_refresh (1). Family keys: amplitude, mode
/// (perturbed_maxwellian); temperatures = a, b, c (anisotropic_gaussian);
/// separation, weights = a, b (two_bump). Unknown or misplaced keys are errors.
SimConfig parse_config_text(const std::string& text);
SimConfig parse_config(const std::filesystem::path& path);
/// Inverse of parse_config_text (every key written explicitly).
std::string format_config(const SimConfig& config);

inline constexpr const char* kScalarsFile = "scalars.csv";
inline constexpr const char* kTrajectoryMetaFile = "trajectory.txt";
inline constexpr int kScalarColumns = 12;

/// scalars.csv, snapshot_NNNNN.bin (little-endian float64, v1 slowest) with a
/// snapshot_NNNNN.txt sidecar (n, L, time), and trajectory.txt (p, m, clipping, abort).
void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir);
/// Throws std::runtime_error on I/O failures or sidecar/grid mismatch.
Trajectory read_trajectory(const std::filesystem::path& dir);

/// Text of scalars.csv (header plus one row per step).
std::string scalars_csv(const Trajectory& traj);

struct RunManifest {
  SimConfig config;
  std::string version;
  std::string start_time;  ///< ISO 8601 UTC
  std::string end_time;
  std::vector<std::string> outputs;
  std::optional<std::string> abort_reason;
};

/// Writes manifest.json through a temporary file and a rename.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

std::string utc_timestamp();
std::string version_string();

}  // namespace landau
