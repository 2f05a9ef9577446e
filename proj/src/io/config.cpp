#include "wakenode/io/config.hpp"

#include "wakenode/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace wakenode::io {

namespace {

std::string where(const std::string& source, const YAML::Mark& m) {
    if (m.line < 0) return source + ":";
    return source + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1) + ":";
}

[[noreturn]] void fail(const std::string& source, const YAML::Node& n, const std::string& msg) {
    throw Error(ErrorCode::Parse, where(source, n.Mark()) + " " + msg);
}

double as_number(const std::string& source, const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar()) fail(source, n, "'" + key + "' must be a number");
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        fail(source, n, "'" + key + "' must be a number, got '" + n.Scalar() + "'");
    }
}

std::string as_string(const std::string& source, const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar()) fail(source, n, "'" + key + "' must be a string");
    return n.Scalar();
}

using Handler = std::function<void(const YAML::Node&, const std::string&)>;

// Dispatches each key of a mapping to its handler; unknown keys are errors.
void walk(const std::string& source, const YAML::Node& map, const std::string& section,
          const std::map<std::string, Handler>& handlers) {
    if (!map.IsMap()) fail(source, map, "section '" + section + "' must be a mapping");
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        const auto it = handlers.find(key);
        if (it == handlers.end()) {
            fail(source, kv.first, "unknown key '" + key + "' in section '" + section + "'");
        }
        it->second(kv.second, key);
    }
}

template <typename F>
void checked(const std::string& source, const YAML::Node& n, F&& validate) {
    try {
        validate();
    } catch (const Error& e) {
        fail(source, n, e.what());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorCode::Parse, where(source, e.mark) + " " + e.msg);
    }
    RunConfig cfg;
    if (root.IsNull()) return cfg;

    auto num = [&](double& dst) {
        return [&source, &dst](const YAML::Node& n, const std::string& k) { dst = as_number(source, n, k); };
    };

    walk(source, root, "<root>",
         {
             {"circuit",
              [&](const YAML::Node& n, const std::string& k) {
                  auto& c = cfg.circuit;
                  walk(source, n, k,
                       {{"vdd_v", num(c.vdd_v)},   {"rf_ohm", num(c.rf_ohm)}, {"r1_ohm", num(c.r1_ohm)},
                        {"r2_ohm", num(c.r2_ohm)}, {"r3_ohm", num(c.r3_ohm)}, {"r4_ohm", num(c.r4_ohm)},
                        {"r5_ohm", num(c.r5_ohm)}, {"r6_ohm", num(c.r6_ohm)}, {"c1_f", num(c.c1_f)},
                        {"c2_f", num(c.c2_f)},     {"c3_f", num(c.c3_f)},     {"c4_f", num(c.c4_f)},
                        {"c5_f", num(c.c5_f)},     {"diode_drop_v", num(c.diode_drop_v)}});
                  checked(source, n, [&] { c.validate(); });
              }},
             {"welch",
              [&](const YAML::Node& n, const std::string& k) {
                  auto& w = cfg.welch;
                  walk(source, n, k,
                       {{"segment_count",
                         [&](const YAML::Node& v, const std::string& key) {
                             const double d = as_number(source, v, key);
                             if (d < 1 || d != static_cast<double>(static_cast<std::size_t>(d))) {
                                 fail(source, v, "'segment_count' must be a positive integer");
                             }
                             w.segment_count = static_cast<std::size_t>(d);
                         }},
                        {"overlap_fraction", num(w.overlap_fraction)},
                        {"window",
                         [&](const YAML::Node& v, const std::string& key) {
                             checked(source, v, [&] { w.window = window_kind_from_string(as_string(source, v, key)); });
                         }},
                        {"fft_length", [&](const YAML::Node& v, const std::string& key) {
                             if (v.IsScalar() && v.Scalar() == "auto") {
                                 w.fft_length.reset();
                                 return;
                             }
                             const double d = as_number(source, v, key);
                             if (d < 2 || d != static_cast<double>(static_cast<std::size_t>(d))) {
                                 fail(source, v, "'fft_length' must be 'auto' or an integer >= 2");
                             }
                             w.fft_length = static_cast<std::size_t>(d);
                         }}});
                  checked(source, n, [&] { w.validate(); });
              }},
             {"node",
              [&](const YAML::Node& n, const std::string& k) {
                  auto& node = cfg.node;
                  walk(source, n, k,
                       {{"profile",
                         [&](const YAML::Node& v, const std::string& key) {
                             if (v.IsScalar()) {
                                 const auto name = as_string(source, v, key);
                                 auto p = find_builtin_profile(name);
                                 if (!p) fail(source, v, "unknown profile '" + name + "'");
                                 node.profile = *p;
                                 cfg.profile_key = name;
                                 return;
                             }
                             PowerProfile p;
                             walk(source, v, key,
                                  {{"name", [&](const YAML::Node& x, const std::string& kk) { p.name = as_string(source, x, kk); }},
                                   {"transmit_mw", num(p.transmit_mw)},
                                   {"sleep_mw", num(p.sleep_mw)}});
                             checked(source, v, [&] { p.validate(); });
                             node.profile = p;
                             cfg.profile_key.clear();
                         }},
                        {"hold_time_s", num(node.hold_time_s)},
                        {"battery_mah", num(node.battery_mah)},
                        {"battery_v", num(node.battery_v)}});
                  checked(source, n, [&] { node.validate(); });
              }},
             {"wake",
              [&](const YAML::Node& n, const std::string& k) {
                  walk(source, n, k,
                       {{"mic_full_scale_v", num(cfg.wake.mic_full_scale_v)},
                        {"threshold_v", num(cfg.wake.threshold_v)}});
                  if (!(cfg.wake.mic_full_scale_v > 0.0) || !(cfg.wake.threshold_v > 0.0)) {
                      fail(source, n, "wake settings must be positive");
                  }
              }},
             {"calibration",
              [&](const YAML::Node& n, const std::string& k) {
                  auto& c = cfg.calibration;
                  walk(source, n, k, {{"a", num(c.a)}, {"b", num(c.b)}, {"c", num(c.c)}, {"d", num(c.d)}});
              }},
             {"io",
              [&](const YAML::Node& n, const std::string& k) {
                  walk(source, n, k, {{"out_dir", [&](const YAML::Node& v, const std::string& key) {
                                           cfg.out_dir = as_string(source, v, key);
                                       }}});
              }},
         });
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

RunConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path) {
    if (explicit_path) return load_config(*explicit_path);
    if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') return load_config(env);
    return RunConfig{};
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    const auto& c = cfg.circuit;
    nlohmann::json j;
    j["circuit"] = {{"vdd_v", c.vdd_v},   {"rf_ohm", c.rf_ohm}, {"r1_ohm", c.r1_ohm}, {"r2_ohm", c.r2_ohm},
                    {"r3_ohm", c.r3_ohm}, {"r4_ohm", c.r4_ohm}, {"r5_ohm", c.r5_ohm}, {"r6_ohm", c.r6_ohm},
                    {"c1_f", c.c1_f},     {"c2_f", c.c2_f},     {"c3_f", c.c3_f},     {"c4_f", c.c4_f},
                    {"c5_f", c.c5_f},     {"diode_drop_v", c.diode_drop_v}};
    j["welch"] = {{"segment_count", cfg.welch.segment_count},
                  {"overlap_fraction", cfg.welch.overlap_fraction},
                  {"window", to_string(cfg.welch.window)}};
    if (cfg.welch.fft_length) {
        j["welch"]["fft_length"] = *cfg.welch.fft_length;
    } else {
        j["welch"]["fft_length"] = "auto";
    }
    j["node"] = {{"profile",
                  {{"key", cfg.profile_key},
                   {"name", cfg.node.profile.name},
                   {"transmit_mw", cfg.node.profile.transmit_mw},
                   {"sleep_mw", cfg.node.profile.sleep_mw}}},
                 {"hold_time_s", cfg.node.hold_time_s},
                 {"battery_mah", cfg.node.battery_mah},
                 {"battery_v", cfg.node.battery_v}};
    j["wake"] = {{"mic_full_scale_v", cfg.wake.mic_full_scale_v}, {"threshold_v", cfg.wake.threshold_v}};
    j["calibration"] = {{"a", cfg.calibration.a}, {"b", cfg.calibration.b}, {"c", cfg.calibration.c},
                        {"d", cfg.calibration.d}};
    return j;
}

std::string default_config_yaml() {
    return R"(# wakenode run configuration. Every key is optional; omitted keys keep
# the defaults shown here.

circuit:
  vdd_v: 3.3          # supply
  rf_ohm: 100000      # feedback resistor
  r1_ohm: 1000        # gain resistor, gain = 1 + rf/r1
  r2_ohm: 1000000
  r3_ohm: 10000000
  r4_ohm: 500000
  r5_ohm: 10000000    # envelope decay resistor
  r6_ohm: 100000      # envelope output divider
  c1_f: 22.0e-6
  c2_f: 100.0e-9
  c3_f: 4.5e-6
  c4_f: 1.5e-9
  c5_f: 9.0e-6        # envelope hold capacitor
  diode_drop_v: 0.0

welch:
  segment_count: 8
  overlap_fraction: 0.5
  window: hamming     # hamming | hann | rectangular
  fft_length: auto

node:
  profile: zigbee-standalone   # wifi | ble | zigbee | zigbee-standalone, or
                               # {name, transmit_mw, sleep_mw}
  hold_time_s: 0
  battery_mah: 2900
  battery_v: 3.3

wake:
  mic_full_scale_v: 0.02   # microphone volts at digital full scale
  threshold_v: 0.031       # comparator level on the envelope output

calibration:
  a: -290.5
  b: -0.04258
  c: 350
  d: 314.7
)";
}

}  // namespace wakenode::io
