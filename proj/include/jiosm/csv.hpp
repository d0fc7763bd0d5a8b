#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jiosm/experiment.hpp"

namespace jiosm {

/// Header of every trajectory file.
inline constexpr const char* kTrajectoryHeader = "snapshot,sinr_db_mean,mse_mean,update_rate_cum";

/// Writes one record: header plus one row per snapshot (1-based), %.17g.
void write_trajectory_csv(const TrajectoryRecord& rec, const std::filesystem::path& path);

/// One file per record, named after the label, plus mvdr_bound.csv.
/// Returns the written paths. Throws std::runtime_error naming the path on I/O failure.
std::vector<std::filesystem::path> emit_csv(const ExperimentResult& result, const std::filesystem::path& dir);

struct TrajectoryRow {
    long snapshot;
    double sinr_db_mean, mse_mean, update_rate_cum;
};

std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path);

/// File-name-safe form of a label.
std::string sanitize_label(const std::string& label);

}  // namespace jiosm
