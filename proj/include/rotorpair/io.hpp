#pragma once

#include <map>
#include <string>
#include <vector>

#include "rotorpair/dynamics.hpp"

namespace rotorpair {

/// %.17g rendering (lossless round trip for doubles).
std::string fmt_g17(double v);

/// Applies the output-directory override (environment variable
/// ROTORPAIR_OUTPUT_DIR): when set, the file keeps its base name but moves
/// into that directory.
std::string resolve_output_path(const std::string& path);

/// Column names of a trajectory file: t, hat-coordinates for n = 3
/// (a_i,a_j,a_k,b_i,b_j,b_k) or strict-upper-triangle entries otherwise,
/// then the invariants that are defined for the run.
std::vector<std::string> trajectory_columns(const Trajectory& traj);

/// Writes `# key = value` header lines, a column-name row, then one row per
/// sample with %.17g fields.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
/// One JSON object per line, same fields, %.17g numbers.
void write_trajectory_jsonl(const Trajectory& traj, const std::string& path);

struct LoadedTrajectory {
    std::map<std::string, std::string> header;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

LoadedTrajectory read_trajectory_csv(const std::string& path);
LoadedTrajectory read_trajectory_jsonl(const std::string& path);

/// Key/value summary block ("name: value" lines) used by the CLI commands.
std::string format_summary(const std::string& title,
                           const std::vector<std::pair<std::string, std::string>>& fields);

} // namespace rotorpair
