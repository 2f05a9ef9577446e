#pragma once

// Independent reference computations and signal generators for tests.
// Nothing here calls into the library's DSP paths.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace wakenode::testing {

inline std::vector<std::complex<double>> naive_dft(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::complex<double> acc{};
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * i % n) / static_cast<double>(n);
            acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

// Bin with the largest DFT magnitude, DC excluded.
inline std::size_t dft_peak_bin(std::span<const double> x) {
    const auto bins = naive_dft(x);
    std::size_t best = 1;
    for (std::size_t k = 1; k < bins.size(); ++k) {
        if (std::abs(bins[k]) > std::abs(bins[best])) best = k;
    }
    return best;
}

// Single-bin DFT amplitude estimate of a real sinusoid at `freq_hz`.
inline double tone_amplitude(std::span<const double> x, double rate_hz, double freq_hz) {
    std::complex<double> acc{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ang = -2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / rate_hz;
        acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return 2.0 * std::abs(acc) / static_cast<double>(x.size());
}

inline std::vector<double> sine(double freq_hz, double rate_hz, std::size_t n, double amplitude = 1.0,
                                double phase = 0.0) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / rate_hz + phase);
    }
    return out;
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

// Two-segment, no-overlap, rectangular-window MSC computed straight from
// DFT sums; the normalization constants cancel in the ratio.
inline std::vector<double> direct_two_segment_msc(std::span<const double> x, std::span<const double> y) {
    const std::size_t len = x.size() / 2;
    std::vector<std::complex<double>> sxy;
    std::vector<double> sxx;
    std::vector<double> syy;
    for (std::size_t s = 0; s < 2; ++s) {
        const auto fx = naive_dft(x.subspan(s * len, len));
        const auto fy = naive_dft(y.subspan(s * len, len));
        if (sxy.empty()) {
            sxy.assign(fx.size(), {});
            sxx.assign(fx.size(), 0.0);
            syy.assign(fx.size(), 0.0);
        }
        for (std::size_t k = 0; k < fx.size(); ++k) {
            sxy[k] += std::conj(fx[k]) * fy[k];
            sxx[k] += std::norm(fx[k]);
            syy[k] += std::norm(fy[k]);
        }
    }
    std::vector<double> out(sxy.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(sxy[k]) / (sxx[k] * syy[k]);
    return out;
}

// Roughly urban-sounding test material: four quarters with speech-like
// AM harmonics, filtered noise, a chord, and a pulsed machine hum, over a
// faint broadband floor so every band carries energy.
inline std::vector<double> urban_like(double rate_hz, double seconds, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(std::llround(rate_hz * seconds));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> out(n);
    const double quarter = seconds / 4.0;
    const double two_pi = 2.0 * std::numbers::pi;
    double lp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate_hz;
        const int part = std::min(3, static_cast<int>(t / quarter));
        double v = 0.0;
        switch (part) {
            case 0: {
                const double f0 = 140.0 + 30.0 * std::sin(two_pi * 0.7 * t);
                const double am = 0.5 + 0.5 * std::sin(two_pi * 3.1 * t);
                for (int h = 1; h <= 8; ++h) v += am * std::sin(two_pi * f0 * h * t) / h;
                v *= 0.25;
                break;
            }
            case 1:
                lp = 0.9 * lp + 0.1 * gauss(rng);
                v = 0.6 * lp;
                break;
            case 2:
                for (double f : {261.63, 329.63, 392.0, 523.25}) v += 0.15 * std::sin(two_pi * f * t);
                break;
            default: {
                const double pulse = std::fmod(t, 0.25) < 0.03 ? 1.0 : 0.0;
                v = 0.2 * std::sin(two_pi * 60.0 * t) + 0.1 * std::sin(two_pi * 180.0 * t) + 0.3 * pulse * gauss(rng);
                break;
            }
        }
        out[i] = v + 0.01 * gauss(rng);
    }
    return out;
}

// Delay by k samples, zero-filled at the front, length preserved.
inline std::vector<double> delayed(std::span<const double> x, std::size_t k) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = k; i < x.size(); ++i) out[i] = x[i - k];
    return out;
}

inline double mean_power(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s / static_cast<double>(x.size());
}

// x plus white noise scaled to the requested SNR.
inline std::vector<double> with_noise(std::span<const double> x, double snr_db, std::uint64_t seed) {
    const double sigma = std::sqrt(mean_power(x) / std::pow(10.0, snr_db / 10.0));
    auto noise = white_noise(x.size(), seed, sigma);
    for (std::size_t i = 0; i < x.size(); ++i) noise[i] += x[i];
    return noise;
}

}  // namespace wakenode::testing
