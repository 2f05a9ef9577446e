#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wakenode {

/// A uniformly sampled, real-valued mono waveform.
///
/// Samples are volts for front-end signals and normalized full scale
/// [-1, 1) for decoded audio. Construction rejects a non-positive rate and
/// non-finite samples, so every Signal in circulation is well formed.
class Signal {
public:
    Signal(std::vector<double> samples, double sample_rate_hz);

    std::span<const double> samples() const noexcept { return samples_; }
    double sample_rate_hz() const noexcept { return rate_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    double duration_s() const noexcept { return static_cast<double>(samples_.size()) / rate_; }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }

    friend bool operator==(const Signal&, const Signal&) = default;

private:
    std::vector<double> samples_;
    double rate_;
};

// Order-64 (65-coefficient) Hamming-windowed sinc used ahead of decimation.
inline constexpr int kAntiAliasOrder = 64;
inline constexpr double kAntiAliasCutoffFraction = 0.45;

/// Coefficients of the anti-alias low-pass for a given normalized cutoff
/// (cycles per input sample). Unity DC gain.
std::vector<double> anti_alias_taps(double cutoff_cycles_per_sample);

/// Resample to `target_rate_hz`.
///
/// Downsampling low-passes with the anti-alias FIR (cutoff at
/// 0.45 x target rate) and then picks output samples, linearly
/// interpolating the filtered sequence when the ratio is not an integer.
/// Upsampling is plain linear interpolation. Equal rates return a copy.
Signal resample(const Signal& s, double target_rate_hz);

/// Lag maximizing the cross-correlation sum_n reference[n] * candidate[n + d]
/// over |d| <= search window. Positive d means the candidate lags the
/// reference. Ties go to the smallest |d|, then the negative lag.
///
/// The default window is the full overlap, min(len) - 1.
std::ptrdiff_t find_delay(const Signal& reference, const Signal& candidate,
                          std::optional<std::size_t> search_window_samples = std::nullopt);

/// Exact contiguous slice [start, start + length).
Signal clip(const Signal& s, std::size_t start_sample, std::size_t length_samples);

}  // namespace wakenode
