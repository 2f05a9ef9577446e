// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "wakenode/calibrate.hpp"
#include "wakenode/coherence.hpp"
#include "wakenode/frontend.hpp"
#include "wakenode/io/csv.hpp"
#include "wakenode/powersim.hpp"

#include "../support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace wakenode;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) detail << "first failure: " << what << "; ";
        ok = ok && cond;
    }
};

int failures = 0;

void run(int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.2f s) %s\n", o.ok ? "PASS" : "FAIL", id, title, secs, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.ok) ++failures;
}

void savings(Outcome& o) {
    const std::pair<const char*, double> want[] = {
        {"wifi", 95.3}, {"ble", 82.1}, {"zigbee", 89.5}, {"zigbee-standalone", 97.1}};
    for (const auto& [key, pct] : want) {
        const double got = savings_percent(*find_builtin_profile(key));
        o.detail << key << "=" << got << " ";
        o.expect(std::abs(got - pct) <= 0.1, key);
    }
}

void lifetime(Outcome& o) {
    const double a = battery_lifetime_days(45.0, 2900.0, 3.3);
    const double b = battery_lifetime_days(1.0, 2900.0, 3.3);
    const double c = battery_lifetime_days(34.3, 2900.0, 3.3);
    o.detail << "45mW=" << a << "d 1mW=" << b << "d 34.3mW=" << c << "d ";
    o.expect(a >= 8.5 && a <= 9.5, "45 mW");
    o.expect(b >= 380.0 && b <= 420.0, "1 mW");
    o.expect(c >= 11.0 && c <= 12.5, "34.3 mW");
}

void simulator_closed_form(Outcome& o) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> dur(0.01, 100.0);
    std::uniform_real_distribution<double> sleep(0.0, 50.0);
    std::uniform_real_distribution<double> extra(0.01, 500.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        Scenario sc;
        const int n = 1 + static_cast<int>(rng() % 20);
        double sound = 0.0;
        for (int i = 0; i < n; ++i) {
            const bool on = (rng() & 1) != 0;
            const double d = dur(rng);
            if (on) sound += d;
            sc.segments.push_back({d, on, ""});
        }
        NodeConfig cfg;
        cfg.profile.name = "random";
        cfg.profile.sleep_mw = sleep(rng);
        cfg.profile.transmit_mw = cfg.profile.sleep_mw + extra(rng);
        const auto t = simulate(sc, cfg);
        const double d = sound / sc.total_duration_s();
        const double closed = d * cfg.profile.transmit_mw + (1.0 - d) * cfg.profile.sleep_mw;
        worst = std::max(worst, std::abs(t.avg_power_mw - closed) / closed);
    }
    o.detail << "worst relative error " << worst << " over 1000 runs ";
    o.expect(worst <= 1e-9, "closed form");
}

void urban_duty(Outcome& o) {
    NodeConfig cfg;
    cfg.profile = *find_builtin_profile("zigbee-standalone");
    cfg.hold_time_s = 0.0;
    const auto t = simulate(build_urban_scenario(), cfg);
    o.detail << "duty=" << 100.0 * t.duty_cycle << "% avg=" << t.avg_power_mw << " mW ";
    o.expect(std::abs(t.duty_cycle - 1.0 / 6.0) <= 1e-9, "duty");
    o.expect(std::abs(t.avg_power_mw - 6.55) <= 0.01, "average power");
}

void coherence_invariants(Outcome& o) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    std::uniform_real_distribution<double> mix(0.0, 2.0);
    const WelchParams two_rect{2, 0.0, WindowKind::Rectangular, std::nullopt};
    double worst_self = 0.0;
    double worst_sym = 0.0;
    double worst_scale = 0.0;
    double worst_oracle = 0.0;
    bool bounded = true;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const std::size_t n = 256 + rng() % 4096;
        const auto xv = testing::white_noise(n, rng());
        auto yv = testing::white_noise(n, rng());
        const double m = mix(rng);
        for (std::size_t i = 0; i < n; ++i) yv[i] += m * xv[i];
        const Signal x(xv, 8000.0);
        const Signal y(yv, 8000.0);

        const auto xy = magnitude_squared_coherence(x, y);
        const auto yx = magnitude_squared_coherence(y, x);
        const auto xx = magnitude_squared_coherence(x, x);
        auto sx = xv;
        auto sy = yv;
        const double ax = scale(rng);
        const double ay = scale(rng);
        for (double& v : sx) v *= ax;
        for (double& v : sy) v *= ay;
        const auto scaled = magnitude_squared_coherence(Signal(sx, 8000.0), Signal(sy, 8000.0));
        for (std::size_t k = 0; k < xy.values.size(); ++k) {
            bounded = bounded && xy.values[k] >= 0.0 && xy.values[k] <= 1.0;
            worst_sym = std::max(worst_sym, std::abs(xy.values[k] - yx.values[k]));
            worst_scale = std::max(worst_scale, std::abs(xy.values[k] - scaled.values[k]));
            worst_self = std::max(worst_self, std::abs(xx.values[k] - 1.0));
        }

        // Direct DFT oracle on a power-of-two prefix so the segments need no padding.
        const std::size_t seg = std::size_t{1} << (5 + trial % 3);
        const std::span<const double> xs(xv.data(), 2 * seg);
        const std::span<const double> ys(yv.data(), 2 * seg);
        const auto got = magnitude_squared_coherence(Signal({xs.begin(), xs.end()}, 8000.0),
                                                     Signal({ys.begin(), ys.end()}, 8000.0), two_rect);
        const auto want = testing::direct_two_segment_msc(xs, ys);
        o.expect(got.values.size() == want.size(), "oracle bin count");
        for (std::size_t k = 0; k < std::min(got.values.size(), want.size()); ++k) {
            worst_oracle = std::max(worst_oracle, std::abs(got.values[k] - want[k]));
        }
    }
    o.detail << trials << " signals; max |self-1|=" << worst_self << " sym=" << worst_sym
             << " scale=" << worst_scale << " oracle=" << worst_oracle << " ";
    o.expect(bounded, "range [0,1]");
    o.expect(worst_self <= 1e-9, "self coherence");
    o.expect(worst_sym <= 1e-9, "symmetry");
    o.expect(worst_scale <= 1e-9, "scale invariance");
    o.expect(worst_oracle <= 1e-9, "direct DFT oracle");
}

void end_to_end(Outcome& o) {
    // Integer delays at the analysis rate, and whole-sample delays after decimating from 16 kHz.
    double worst = 1.0;
    const auto a = testing::urban_like(8000.0, 92.0, 5);
    for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{137}, std::size_t{7919}, std::size_t{16000}}) {
        const double s = coherence_score(Signal(a, 8000.0), Signal(testing::delayed(a, k), 8000.0));
        o.detail << "8k/" << k << ":" << s << " ";
        worst = std::min(worst, s);
    }
    const auto b = testing::urban_like(16000.0, 92.0, 5);
    for (std::size_t k : {std::size_t{274}, std::size_t{15838}, std::size_t{32000}}) {
        const double s = coherence_score(Signal(b, 16000.0), Signal(testing::delayed(b, k), 16000.0));
        o.detail << "16k/" << k << ":" << s << " ";
        worst = std::min(worst, s);
    }
    o.detail << "min=" << worst << "; ";
    o.expect(worst >= 0.999, "delayed recordings");

    // Half-sample offsets at the analysis rate are reported, not gated.
    const double half = coherence_score(Signal(b, 16000.0), Signal(testing::delayed(b, 7919), 16000.0));
    o.detail << "info 16k/7919 (half-sample):" << half << "; ";

    const auto y = testing::urban_like(8000.0, 90.0, 6);
    const Signal ref(y, 8000.0);
    double prev = 2.0;
    o.detail << "SNR sweep";
    for (double snr : {20.0, 10.0, 0.0}) {
        const double s = coherence_score(ref, Signal(testing::with_noise(y, snr, 9), 8000.0));
        o.detail << " " << snr << "dB=" << s;
        o.expect(s < prev, "monotone in SNR");
        prev = s;
    }
    o.detail << " ";
}

void calibration(Outcome& o) {
    const double v = adc_to_db(351.0);
    o.detail << "f(351)=" << v << " ";
    o.expect(std::abs(v - 24.2) <= 1e-12, "f(351) = 24.2");

    double worst_rt = 0.0;
    for (double x = 350.5; x <= 1023.0; x += 0.5) worst_rt = std::max(worst_rt, std::abs(db_to_adc(adc_to_db(x)) - x));
    o.detail << "round trip " << worst_rt << " ";
    o.expect(worst_rt <= 1e-6, "round trip");

    std::vector<CalPoint> clean;
    for (int i = 0; i < 20; ++i) {
        const double x = 390.0 + (1023.0 - 390.0) * i / 19.0;
        clean.push_back({x, adc_to_db(x)});
    }
    const auto fit = fit_curve(clean);
    double worst = 0.0;
    for (const auto& p : clean) worst = std::max(worst, std::abs(adc_to_db(p.adc_value, fit.curve) - p.spl_db));
    o.detail << "noiseless max residual " << worst << " dB ";
    o.expect(worst < 0.01, "noiseless fit");

    const auto noisy = fit_curve(io::load_cal_points(WAKENODE_TEST_DATA_DIR "/calibration_noisy.csv"));
    o.detail << "noisy R^2 " << noisy.r_squared << " ";
    o.expect(std::abs(noisy.r_squared - 0.995) <= 0.004, "noisy R^2");
}

void front_end(Outcome& o) {
    const CircuitParams p;
    const double g = amplifier_gain(p);
    const double cm = common_mode(p);
    o.detail << "gain=" << g << " cm=" << cm << " ";
    o.expect(g == 101.0, "gain");
    o.expect(std::abs(cm - 1.65) <= 1e-12, "common mode");

    const double fs = 100.0;
    std::vector<double> in(1 + 9000, 0.0);
    in[0] = 3.3;
    const auto env = envelope_detect(Signal(in, fs), p);
    const double frac = env[9000] / env[0];
    o.detail << "decay at 90 s = " << 100.0 * frac << "% ";
    o.expect(std::abs(frac - 0.368) <= 0.005, "decay");
}

void ranking(Outcome& o) {
    const auto mics = io::load_mic_table(WAKENODE_SOURCE_DIR "/data/microphones.csv");
    const auto constrained = rank_microphones(mics, true, 3.3);
    const auto open = rank_microphones(mics, false, std::nullopt);
    o.detail << "constrained #1 " << constrained.front().mic.name << ", unconstrained #1 " << open.front().mic.name << " ";
    o.expect(constrained.front().eligible && constrained.front().mic.name == "ST MP23ABS1", "constrained");
    o.expect(open.front().mic.name == "ST MP34DT05-A", "unconstrained");
}

}  // namespace

int main() {
    run(1, "savings reproduction", savings);
    run(2, "lifetime reproduction", lifetime);
    run(3, "simulator closed-form equivalence", simulator_closed_form);
    run(4, "urban scenario duty cycle", urban_duty);
    run(5, "coherence invariants", coherence_invariants);
    run(6, "alignment and scoring end to end", end_to_end);
    run(7, "calibration", calibration);
    run(8, "front-end formulas", front_end);
    run(9, "microphone ranking", ranking);
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
