#include "wakenode/error.hpp"
#include "wakenode/frontend.hpp"

#include "../support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace wakenode;
using Catch::Approx;

TEST_CASE("default circuit values", "[frontend]") {
    const CircuitParams p;
    CHECK(p.vdd_v == 3.3);
    CHECK(p.rf_ohm == 100e3);
    CHECK(p.r1_ohm == 1e3);
    CHECK(p.r2_ohm == 1e6);
    CHECK(p.r3_ohm == 10e6);
    CHECK(p.r4_ohm == 500e3);
    CHECK(p.r5_ohm == 10e6);
    CHECK(p.r6_ohm == 100e3);
    CHECK(p.c1_f == 22e-6);
    CHECK(p.c2_f == 100e-9);
    CHECK(p.c3_f == 4.5e-6);
    CHECK(p.c4_f == 1.5e-9);
    CHECK(p.c5_f == 9e-6);
    CHECK(p.diode_drop_v == 0.0);
}

TEST_CASE("amplifier gain and common mode", "[frontend]") {
    CircuitParams p;
    CHECK(amplifier_gain(p) == 101.0);
    CHECK(common_mode(p) == Approx(1.65));

    p.rf_ohm = 0.0;
    CHECK(amplifier_gain(p) == 1.0);
    p.rf_ohm = p.r1_ohm;
    CHECK(amplifier_gain(p) == 2.0);

    CircuitParams q;
    q.vdd_v = 1.0;
    CHECK(common_mode(q) == 0.5);
    q.vdd_v = 0.0;
    CHECK_THROWS_AS(common_mode(q), Error);
    CircuitParams r;
    r.r1_ohm = 0.0;
    CHECK_THROWS_AS(amplifier_gain(r), Error);
}

TEST_CASE("gain and common mode follow their formulas for random parts", "[frontend][property]") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ohms(1.0, 1e7);
    std::uniform_real_distribution<double> volts(0.1, 12.0);
    for (int i = 0; i < 200; ++i) {
        CircuitParams p;
        p.rf_ohm = ohms(rng);
        p.r1_ohm = ohms(rng);
        p.vdd_v = volts(rng);
        CHECK(amplifier_gain(p) == 1.0 + p.rf_ohm / p.r1_ohm);
        CHECK(common_mode(p) == p.vdd_v / 2.0);
    }
}

TEST_CASE("amplify", "[frontend]") {
    const CircuitParams p;
    const auto quiet = amplify(Signal(std::vector<double>(100, 0.0), 8000.0), p);
    for (double v : quiet.samples()) CHECK(v == Approx(1.65));

    const auto small = amplify(Signal(testing::sine(100.0, 8000.0, 8000, 1e-3), 8000.0), p);
    const auto [lo, hi] = std::minmax_element(small.samples().begin(), small.samples().end());
    CHECK(*hi - 1.65 == Approx(0.101).epsilon(1e-3));
    CHECK(1.65 - *lo == Approx(0.101).epsilon(1e-3));

    const auto loud = amplify(Signal(testing::sine(100.0, 8000.0, 8000, 50e-3), 8000.0), p);
    const auto [llo, lhi] = std::minmax_element(loud.samples().begin(), loud.samples().end());
    CHECK(*llo == 0.0);
    CHECK(*lhi == 3.3);

    CHECK_THROWS_AS(amplify(Signal(std::vector<double>{}, 8000.0), p), Error);
}

TEST_CASE("amplify stays within the rails", "[frontend][property]") {
    std::mt19937_64 rng(32);
    const CircuitParams p;
    for (int i = 0; i < 20; ++i) {
        const auto out = amplify(Signal(testing::white_noise(1000, rng(), 0.05), 8000.0), p);
        for (double v : out.samples()) {
            CHECK(v >= 0.0);
            CHECK(v <= p.vdd_v);
        }
    }
}

TEST_CASE("envelope decays to 1/e after one time constant", "[frontend][envelope]") {
    const CircuitParams p;
    CHECK(envelope_time_constant_s(p) == Approx(90.0));
    // 10 Hz is plenty for a 90 s time constant: charge for 1 sample, then zero input.
    const double fs = 10.0;
    std::vector<double> in(1 + 900, 0.0);
    in[0] = 3.0;
    const auto env = envelope_detect(Signal(in, fs), p);
    CHECK(env[900] / env[0] == Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(env[900] / env[0] == Approx(0.368).margin(0.005));
}

TEST_CASE("envelope steady state and zero input", "[frontend][envelope]") {
    CircuitParams p;
    p.diode_drop_v = 0.3;
    const double ratio = envelope_divider_ratio(p);
    CHECK(ratio == Approx(100e3 / 10.1e6));
    const auto dc = envelope_detect(Signal(std::vector<double>(200, 2.0), 1000.0), p);
    for (double v : dc.samples()) CHECK(v == Approx((2.0 - 2 * 0.3) * ratio));

    const auto zero = envelope_detect(Signal(std::vector<double>(200, 0.0), 1000.0), CircuitParams{});
    for (double v : zero.samples()) CHECK(v == 0.0);

    // Quiescent amplifier output lands below the 1.2 V ADC reference.
    const auto idle = envelope_detect(Signal(std::vector<double>(10, 1.65), 1000.0), CircuitParams{});
    CHECK(idle[9] < 1.2);
}

TEST_CASE("envelope never rises while the input sits below the state", "[frontend][envelope][property]") {
    std::mt19937_64 rng(33);
    CircuitParams p;
    p.r5_ohm = 1e4;  // fast decay so the property is exercised
    for (int trial = 0; trial < 20; ++trial) {
        auto in = testing::white_noise(2000, rng());
        const auto out = envelope_detect(Signal(in, 8000.0), p);
        const double ratio = envelope_divider_ratio(p);
        double state = 0.0;
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (in[i] - p.diode_drop_v <= state && i > 0) CHECK(out[i] <= out[i - 1] + 1e-15);
            state = std::max(in[i] - p.diode_drop_v, state * std::exp(-1.0 / (8000.0 * p.r5_ohm * p.c5_f)));
            CHECK(out[i] >= 0.0);
            CHECK(out[i] == Approx(std::max(0.0, state) * ratio).margin(1e-15));
        }
    }
}

TEST_CASE("threshold output is active low", "[frontend][threshold]") {
    const Signal quiet(std::vector<double>(50, 0.1), 100.0);
    auto w = threshold_out(quiet, 0.5);
    CHECK(std::all_of(w.samples.begin(), w.samples.end(), [](Level l) { return l == Level::High; }));

    const Signal loud(std::vector<double>(50, 0.9), 100.0);
    w = threshold_out(loud, 0.5);
    CHECK(std::all_of(w.samples.begin(), w.samples.end(), [](Level l) { return l == Level::Low; }));

    std::vector<double> spike(50, 0.1);
    spike[20] = 0.7;
    w = threshold_out(Signal(spike, 100.0), 0.5);
    CHECK(std::count(w.samples.begin(), w.samples.end(), Level::Low) == 1);
    CHECK(w.samples[20] == Level::Low);
    CHECK(w.sample_rate_hz == 100.0);

    CHECK_THROWS_AS(threshold_out(quiet, 0.0), Error);
}

TEST_CASE("raising the threshold only releases samples", "[frontend][threshold][property]") {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> level(0.01, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        auto env = testing::white_noise(500, rng());
        for (double& v : env) v = std::abs(v);
        const Signal e(env, 1000.0);
        double a = level(rng);
        double b = level(rng);
        if (a > b) std::swap(a, b);
        const auto low_t = threshold_out(e, a);
        const auto high_t = threshold_out(e, b);
        for (std::size_t i = 0; i < env.size(); ++i) {
            if (low_t.samples[i] == Level::High) CHECK(high_t.samples[i] == Level::High);
        }
    }
}

TEST_CASE("gain in decibels", "[frontend]") {
    CHECK(gain_db(101.0) == Approx(40.0864).margin(1e-4));
    CHECK(gain_db(1.0) == 0.0);
    CHECK(gain_db(10.0) == Approx(20.0));
    CHECK_THROWS_AS(gain_db(0.0), Error);
    CHECK_THROWS_AS(gain_db(-3.0), Error);
}
