#pragma once

#include "wakenode/calibrate.hpp"
#include "wakenode/coherence.hpp"
#include "wakenode/frontend.hpp"
#include "wakenode/powersim.hpp"

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace wakenode::io {

/// Settings for driving the power simulation from recorded audio.
struct WakeSettings {
    // Microphone output in volts at digital full scale.
    double mic_full_scale_v = 0.02;
    // Comparator trip level on the envelope output.
    double threshold_v = 0.031;
};

struct RunConfig {
    CircuitParams circuit;
    WelchParams welch;
    NodeConfig node{find_builtin_profile("zigbee-standalone").value()};
    // Built-in key the node profile came from; empty for inline profiles.
    std::string profile_key = "zigbee-standalone";
    WakeSettings wake;
    CalibrationCurve calibration;
    std::filesystem::path out_dir = ".";
};

inline constexpr const char* kConfigEnvVar = "WAKENODE_CONFIG";

/// Parses the YAML configuration. Unknown keys and invalid values raise
/// ErrorCode::Parse with a `file:line:column:` prefix.
RunConfig parse_config(const std::string& text, const std::string& source);
RunConfig load_config(const std::filesystem::path& path);

/// Explicit path wins, then $WAKENODE_CONFIG, then built-in defaults.
RunConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path);

/// Effective configuration, as embedded in every report.
nlohmann::json config_to_json(const RunConfig& cfg);

/// Commented YAML holding the defaults.
std::string default_config_yaml();

}  // namespace wakenode::io
