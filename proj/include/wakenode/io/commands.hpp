#pragma once

#include "wakenode/io/config.hpp"
#include "wakenode/io/report.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace wakenode::io {

// Each command writes report.json plus its CSV side files into out_dir
// (created if missing) and returns the report it wrote.

Report cmd_coherence(const std::filesystem::path& source_wav, const std::filesystem::path& recording_wav,
                     const RunConfig& config, const std::filesystem::path& out_dir);

struct SimulateRequest {
    // Built-in scenario (urban, silence, sound) or a scenario CSV path.
    std::string scenario = "urban";
    // When set, the wake line is derived from this recording instead.
    std::optional<std::filesystem::path> wav;
    // Built-in profile key; overrides the configured profile.
    std::optional<std::string> profile;
};

Report cmd_simulate(const SimulateRequest& request, const RunConfig& config, const std::filesystem::path& out_dir);

Report cmd_calibrate(const std::filesystem::path& points_csv, const RunConfig& config,
                     const std::filesystem::path& out_dir);

struct RankRequest {
    // Microphone table CSV; the bundled reference table when unset.
    std::optional<std::filesystem::path> table;
    bool require_analog = true;
    std::optional<double> supply_v = 3.3;
};

Report cmd_rank_mics(const RankRequest& request, const RunConfig& config, const std::filesystem::path& out_dir);

/// Scenario by built-in name, or loaded from a CSV path otherwise.
Scenario resolve_scenario(const std::string& name_or_path);

}  // namespace wakenode::io
