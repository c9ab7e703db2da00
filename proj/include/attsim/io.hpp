#ifndef ATTSIM_IO_HPP
#define ATTSIM_IO_HPP

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "attsim/config.hpp"

namespace attsim {

// 8-bit grayscale PGM, P5, maxval 255, value = round(255 * clamp(u, 0, 1)).
std::string to_pgm(const ActivityGrid& g);
// Raw activities, one row per grid row, comma separated, '.' decimal,
// shortest round-trip formatting.
std::string to_csv(const ActivityGrid& g);
// Per-step decision trace: "step,move,switch" header plus one row per step.
std::string to_csv(const std::vector<TraceSample>& trace);

nlohmann::json to_json(const TrialLog& log);
TrialLog trial_log_from_json(const nlohmann::json& j);

// Write-then-rename so partially written files are never observed.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

// Executes run_trial under the config; writes scanpath.json, trace.csv and
// periodic map snapshots into the output directory.
// Returns 0 when the trial ends Done, 2 on Budget. I/O failures throw.
int cmd_run(const RunConfig& config);

// Runs the same trial but stops at the given step and dumps every configured
// map as <map>_step<N>.pgm plus a raw-activity CSV sidecar. If the trial
// ends before the requested step, the final state is dumped with a warning.
int cmd_snapshot(const RunConfig& config, int step);

// Output directory after the ATTSIM_OUTPUT_DIR override, if set.
std::filesystem::path effective_output_dir(const OutputConfig& out);

} // namespace attsim

#endif
