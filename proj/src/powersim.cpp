#include "wakenode/powersim.hpp"

#include "wakenode/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wakenode {

void ComponentPower::validate() const {
    if (!(sleep_mw >= 0.0) || !(transmit_mw >= sleep_mw) || !std::isfinite(transmit_mw)) {
        throw Error(ErrorCode::InvalidArgument, "component '" + name + "': need 0 <= sleep_mw <= transmit_mw");
    }
}

void PowerProfile::validate() const {
    if (!(transmit_mw > 0.0) || !std::isfinite(transmit_mw)) {
        throw Error(ErrorCode::InvalidArgument, "profile '" + name + "': transmit_mw must be positive");
    }
    if (!(sleep_mw >= 0.0) || !(sleep_mw < transmit_mw)) {
        throw Error(ErrorCode::InvalidArgument, "profile '" + name + "': need 0 <= sleep_mw < transmit_mw");
    }
    for (const auto& c : components) c.validate();
}

double Scenario::total_duration_s() const {
    double total = 0.0;
    for (const auto& s : segments) total += s.duration_s;
    return total;
}

void Scenario::validate() const {
    if (segments.empty()) throw Error(ErrorCode::InvalidArgument, "scenario has no segments");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (!(segments[i].duration_s > 0.0) || !std::isfinite(segments[i].duration_s)) {
            throw Error(ErrorCode::InvalidArgument,
                        "scenario segment " + std::to_string(i) + " must have a positive duration");
        }
    }
}

void NodeConfig::validate() const {
    profile.validate();
    if (!(hold_time_s >= 0.0) || !std::isfinite(hold_time_s)) {
        throw Error(ErrorCode::InvalidArgument, "hold_time_s must be non-negative");
    }
    if (!(battery_mah > 0.0) || !(battery_v > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "battery capacity and voltage must be positive");
    }
}

std::string to_string(NodeState s) {
    return s == NodeState::Transmit ? "transmit" : "sleep";
}

namespace {

struct Span {
    double start;
    double end;
};

// `awake` must be sorted by start; spans are extended by the hold time,
// capped at `total`, merged and interleaved with sleep.
SimTrace build_trace(const std::vector<Span>& awake, double total, const NodeConfig& config) {
    std::vector<Span> merged;
    for (const auto& a : awake) {
        const Span s{a.start, std::min(a.end + config.hold_time_s, total)};
        if (!merged.empty() && s.start <= merged.back().end) {
            merged.back().end = std::max(merged.back().end, s.end);
        } else {
            merged.push_back(s);
        }
    }

    SimTrace trace;
    trace.total_duration_s = total;
    double t = 0.0;
    auto emit = [&](double start, double end, NodeState state) {
        if (end <= start) return;
        trace.timeline.push_back({start, end, state});
    };
    for (const auto& m : merged) {
        emit(t, m.start, NodeState::Sleep);
        emit(m.start, m.end, NodeState::Transmit);
        t = m.end;
    }
    emit(t, total, NodeState::Sleep);

    double energy_mws = 0.0;
    for (const auto& iv : trace.timeline) {
        const double dt = iv.t_end_s - iv.t_start_s;
        const bool on = iv.state == NodeState::Transmit;
        if (on) trace.transmit_time_s += dt;
        energy_mws += dt * (on ? config.profile.transmit_mw : config.profile.sleep_mw);
    }
    trace.energy_mwh = energy_mws / 3600.0;
    trace.duty_cycle = trace.transmit_time_s / total;
    trace.avg_power_mw = trace.energy_mwh / (total / 3600.0);
    return trace;
}

}  // namespace

SimTrace simulate(const Scenario& scenario, const NodeConfig& config) {
    scenario.validate();
    config.validate();
    std::vector<Span> awake;
    double t = 0.0;
    for (const auto& seg : scenario.segments) {
        if (seg.sound_present) awake.push_back({t, t + seg.duration_s});
        t += seg.duration_s;
    }
    return build_trace(awake, t, config);
}

SimTrace simulate_from_wake(const BinarySignal& wake, const NodeConfig& config) {
    if (wake.samples.empty()) throw Error(ErrorCode::EmptyInput, "wake signal is empty");
    if (!(wake.sample_rate_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "wake sample rate must be positive");
    config.validate();

    const double fs = wake.sample_rate_hz;
    const std::size_t n = wake.samples.size();
    std::vector<Span> awake;
    for (std::size_t i = 0; i < n;) {
        if (wake.samples[i] != Level::Low) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && wake.samples[j] == Level::Low) ++j;
        awake.push_back({static_cast<double>(i) / fs, static_cast<double>(j) / fs});
        i = j;
    }
    return build_trace(awake, static_cast<double>(n) / fs, config);
}

double savings_percent(const PowerProfile& profile) {
    if (!(profile.transmit_mw > 0.0)) {
        throw Error(ErrorCode::Domain, "profile '" + profile.name + "': savings need a positive transmit power");
    }
    return 100.0 * (1.0 - profile.sleep_mw / profile.transmit_mw);
}

double battery_lifetime_days(double avg_power_mw, double battery_mah, double battery_v) {
    if (!(avg_power_mw > 0.0) || !(battery_mah > 0.0) || !(battery_v > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "lifetime inputs must be positive");
    }
    const double energy_wh = battery_mah / 1000.0 * battery_v;
    return energy_wh / (avg_power_mw / 1000.0) / 24.0;
}

Scenario build_urban_scenario() {
    Scenario s;
    for (const char* label : {"human", "nature", "music", "mechanical"}) {
        s.segments.push_back({20.0, true, label});
        s.segments.push_back({100.0, false, "silence"});
    }
    return s;
}

PowerProfile compose_profile(std::span<const ComponentPower> components, std::string name) {
    if (components.empty()) throw Error(ErrorCode::EmptyInput, "cannot compose a profile from no components");
    PowerProfile p;
    p.name = std::move(name);
    for (const auto& c : components) {
        c.validate();
        p.transmit_mw += c.transmit_mw;
        p.sleep_mw += c.sleep_mw;
    }
    p.components.assign(components.begin(), components.end());
    return p;
}

std::optional<std::string> totals_discrepancy(const PowerProfile& composed, const PowerProfile& measured,
                                              double tolerance) {
    auto off = [&](double sum, double ref) {
        return ref == 0.0 ? sum != 0.0 : std::abs(sum - ref) / std::abs(ref) > tolerance;
    };
    if (!off(composed.transmit_mw, measured.transmit_mw) && !off(composed.sleep_mw, measured.sleep_mw)) {
        return std::nullopt;
    }
    char msg[256];
    std::snprintf(msg, sizeof msg,
                  "component sum for '%s' (%.2f / %.2f mW transmit/sleep) deviates from measured "
                  "'%s' (%.2f / %.2f mW); using measured totals",
                  composed.name.c_str(), composed.transmit_mw, composed.sleep_mw, measured.name.c_str(),
                  measured.transmit_mw, measured.sleep_mw);
    return std::string(msg);
}

const std::vector<ComponentPower>& builtin_components() {
    static const std::vector<ComponentPower> table = {
        {"Microphone", 0.35, 0.35},       {"Amplifier", 0.20, 0.20}, {"Threshold", 0.07, 0.07},
        {"NodeMCU", 91.84, 16.76},        {"Wi-Fi (2.4 GHz)", 265.75, 0.00},
        {"BLE 4.0", 49.02, 8.47},         {"Zigbee", 33.68, 0.07},
    };
    return table;
}

namespace {

struct NamedProfile {
    const char* key;
    PowerProfile profile;
};

const std::vector<NamedProfile>& named_profiles() {
    static const std::vector<NamedProfile> table = [] {
        const auto& c = builtin_components();
        const ComponentPower& mcu = c[3];
        return std::vector<NamedProfile>{
            {"wifi", {"Wi-Fi (2.4 GHz)", 357.59, 16.76, {mcu, c[4]}}},
            {"ble", {"BLE 4.0", 140.86, 25.23, {mcu, c[5]}}},
            {"zigbee", {"Zigbee", 160.43, 16.83, {mcu, c[6]}}},
            {"zigbee-standalone", {"Zigbee (Standalone)", 34.30, 1.00, {}}},
        };
    }();
    return table;
}

}  // namespace

const std::vector<PowerProfile>& builtin_profiles() {
    static const std::vector<PowerProfile> profiles = [] {
        std::vector<PowerProfile> out;
        for (const auto& np : named_profiles()) out.push_back(np.profile);
        return out;
    }();
    return profiles;
}

std::optional<PowerProfile> find_builtin_profile(std::string_view key) {
    for (const auto& np : named_profiles()) {
        if (key == np.key) return np.profile;
    }
    return std::nullopt;
}

std::vector<std::string> builtin_profile_keys() {
    std::vector<std::string> keys;
    for (const auto& np : named_profiles()) keys.emplace_back(np.key);
    return keys;
}

}  // namespace wakenode
