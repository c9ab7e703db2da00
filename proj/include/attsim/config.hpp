#ifndef ATTSIM_CONFIG_HPP
#define ATTSIM_CONFIG_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "attsim/model.hpp"

namespace attsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputConfig {
    std::filesystem::path dir = "out";
    int snapshot_every = 0; // 0 disables periodic snapshots
    std::vector<std::string> maps = {"saliency", "focus", "wm", "anticipation"};
};

struct RunConfig {
    ModelConfig model;
    TargetSpec target;
    World world;
    Gaze gaze;
    TrialLimits limits;
    OutputConfig output;
};

// Parses and fully validates; omitted fields take the documented defaults.
// Throws ConfigError naming the offending field (and file/position for
// syntax errors in load_config).
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& c);

} // namespace attsim

#endif
