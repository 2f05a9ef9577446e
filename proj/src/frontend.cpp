#include "wakenode/frontend.hpp"

#include "wakenode/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wakenode {

void CircuitParams::validate() const {
    const struct {
        const char* name;
        double value;
    } positive[] = {{"vdd_v", vdd_v}, {"r1_ohm", r1_ohm}, {"r2_ohm", r2_ohm}, {"r3_ohm", r3_ohm},
                    {"r4_ohm", r4_ohm}, {"r5_ohm", r5_ohm}, {"r6_ohm", r6_ohm}, {"c1_f", c1_f},
                    {"c2_f", c2_f},     {"c3_f", c3_f},     {"c4_f", c4_f},     {"c5_f", c5_f}};
    for (const auto& [name, value] : positive) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw Error(ErrorCode::InvalidArgument, std::string("circuit parameter ") + name + " must be positive");
        }
    }
    if (!(rf_ohm >= 0.0) || !std::isfinite(rf_ohm)) {
        throw Error(ErrorCode::InvalidArgument, "circuit parameter rf_ohm must be non-negative");
    }
    if (!(diode_drop_v >= 0.0) || !std::isfinite(diode_drop_v)) {
        throw Error(ErrorCode::InvalidArgument, "diode_drop_v must be non-negative");
    }
}

double amplifier_gain(const CircuitParams& p) {
    p.validate();
    return 1.0 + p.rf_ohm / p.r1_ohm;
}

double common_mode(const CircuitParams& p) {
    p.validate();
    return p.vdd_v / 2.0;
}

Signal amplify(const Signal& s, const CircuitParams& p) {
    if (s.empty()) throw Error(ErrorCode::EmptyInput, "cannot amplify an empty signal");
    const double gain = amplifier_gain(p);
    const double cm = common_mode(p);
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = std::clamp(cm + gain * s[i], 0.0, p.vdd_v);
    return Signal(std::move(out), s.sample_rate_hz());
}

double envelope_time_constant_s(const CircuitParams& p) {
    p.validate();
    return p.r5_ohm * p.c5_f;
}

double envelope_divider_ratio(const CircuitParams& p) {
    p.validate();
    return p.r6_ohm / (p.r5_ohm + p.r6_ohm);
}

Signal envelope_detect(const Signal& s, const CircuitParams& p) {
    const double decay = std::exp(-1.0 / (s.sample_rate_hz() * envelope_time_constant_s(p)));
    const double ratio = envelope_divider_ratio(p);
    const double drop = p.diode_drop_v;

    std::vector<double> out(s.size());
    double state = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double charged = s[i] - drop;
        state = std::max(charged, state * decay);
        out[i] = std::max(0.0, state - drop) * ratio;
    }
    return Signal(std::move(out), s.sample_rate_hz());
}

BinarySignal threshold_out(const Signal& envelope, double v_threshold) {
    if (!(v_threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold voltage must be positive");
    BinarySignal wake;
    wake.sample_rate_hz = envelope.sample_rate_hz();
    wake.samples.resize(envelope.size());
    for (std::size_t i = 0; i < envelope.size(); ++i) {
        wake.samples[i] = envelope[i] > v_threshold ? Level::Low : Level::High;
    }
    return wake;
}

double gain_db(double gain_vv) {
    if (!(gain_vv > 0.0)) throw Error(ErrorCode::Domain, "gain must be positive to express in dB");
    return 20.0 * std::log10(gain_vv);
}

}  // namespace wakenode
