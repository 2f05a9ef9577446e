#pragma once

#include "wakenode/frontend.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wakenode {

struct ComponentPower {
    std::string name;
    double transmit_mw = 0.0;
    double sleep_mw = 0.0;

    void validate() const;
    friend bool operator==(const ComponentPower&, const ComponentPower&) = default;
};

/// Sleep/transmit power pair of one hardware permutation. When a
/// component breakdown is attached, the profile-level totals still win.
struct PowerProfile {
    std::string name;
    double transmit_mw = 0.0;
    double sleep_mw = 0.0;
    std::vector<ComponentPower> components;

    void validate() const;
    friend bool operator==(const PowerProfile&, const PowerProfile&) = default;
};

struct ScenarioSegment {
    double duration_s = 0.0;
    bool sound_present = false;
    std::string label;

    friend bool operator==(const ScenarioSegment&, const ScenarioSegment&) = default;
};

struct Scenario {
    std::vector<ScenarioSegment> segments;

    double total_duration_s() const;
    void validate() const;
};

struct NodeConfig {
    PowerProfile profile;
    // Time the node stays awake after the wake line releases.
    double hold_time_s = 0.0;
    double battery_mah = 2900.0;
    double battery_v = 3.3;

    void validate() const;
};

enum class NodeState { Sleep, Transmit };

std::string to_string(NodeState s);

struct TraceInterval {
    double t_start_s = 0.0;
    double t_end_s = 0.0;
    NodeState state = NodeState::Sleep;
};

struct SimTrace {
    std::vector<TraceInterval> timeline;
    double total_duration_s = 0.0;
    double transmit_time_s = 0.0;
    double energy_mwh = 0.0;
    double duty_cycle = 0.0;
    double avg_power_mw = 0.0;
};

/// Event-driven run over segment boundaries: awake for every sound segment
/// plus the hold time after it (merged, capped at the scenario end).
SimTrace simulate(const Scenario& scenario, const NodeConfig& config);

/// Per-sample run driven by an active-low wake line.
SimTrace simulate_from_wake(const BinarySignal& wake, const NodeConfig& config);

double savings_percent(const PowerProfile& profile);

double battery_lifetime_days(double avg_power_mw, double battery_mah, double battery_v);

/// Four categories, each 20 s of sound then 100 s of silence (480 s).
Scenario build_urban_scenario();

/// Sums component powers into a profile carrying the breakdown.
PowerProfile compose_profile(std::span<const ComponentPower> components, std::string name);

/// Warning text when the composed totals differ from a measured profile by
/// more than `tolerance` (relative) on either state.
std::optional<std::string> totals_discrepancy(const PowerProfile& composed, const PowerProfile& measured,
                                              double tolerance = 0.01);

/// Built-in measured data: per-component powers and whole-prototype totals.
const std::vector<ComponentPower>& builtin_components();
const std::vector<PowerProfile>& builtin_profiles();

/// Looks up a built-in profile by key (wifi, ble, zigbee, zigbee-standalone).
std::optional<PowerProfile> find_builtin_profile(std::string_view key);
std::vector<std::string> builtin_profile_keys();

}  // namespace wakenode
