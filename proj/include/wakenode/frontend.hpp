#pragma once

#include "wakenode/signal.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace wakenode {

/// Component values of the analog chain. R2-R4 and C1-C4 set bias and
/// coupling in hardware and are carried for completeness only; the
/// behavioral models read vdd, rf, r1, r5, r6, c5 and the diode drop.
struct CircuitParams {
    double vdd_v = 3.3;
    double rf_ohm = 100e3;
    double r1_ohm = 1e3;
    double r2_ohm = 1e6;
    double r3_ohm = 10e6;
    double r4_ohm = 500e3;
    double r5_ohm = 10e6;
    double r6_ohm = 100e3;
    double c1_f = 22e-6;
    double c2_f = 100e-9;
    double c3_f = 4.5e-6;
    double c4_f = 1.5e-9;
    double c5_f = 9e-6;
    double diode_drop_v = 0.0;

    /// Throws unless every component is positive (rf may be 0 for a
    /// unity follower) and the diode drop is non-negative.
    void validate() const;

    friend bool operator==(const CircuitParams&, const CircuitParams&) = default;
};

enum class Level : std::uint8_t { Low, High };

/// Two-level signal, e.g. the active-low wake line.
struct BinarySignal {
    std::vector<Level> samples;
    double sample_rate_hz = 1.0;

    std::size_t size() const noexcept { return samples.size(); }
    double duration_s() const noexcept { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

// Non-inverting gain 1 + Rf/R1.
double amplifier_gain(const CircuitParams& p);

// Vdd / 2.
double common_mode(const CircuitParams& p);

/// common_mode + gain * s[n], clipped to the supply rails [0, Vdd].
Signal amplify(const Signal& s, const CircuitParams& p);

double envelope_time_constant_s(const CircuitParams& p);

/// Output attenuation R6 / (R5 + R6) that keeps the held level under the
/// 1.2 V ADC reference.
double envelope_divider_ratio(const CircuitParams& p);

/// Peak detector with RC memory. The hold state jumps to (v - drop) when
/// that exceeds it, otherwise decays by exp(-dt / (R5 C5)) per sample.
/// Output is max(0, state - drop) scaled by envelope_divider_ratio.
Signal envelope_detect(const Signal& s, const CircuitParams& p);

/// Active-low comparator: Low where envelope > v_threshold, High elsewhere.
BinarySignal threshold_out(const Signal& envelope, double v_threshold);

double gain_db(double gain_vv);

}  // namespace wakenode
