#include "wakenode/signal.hpp"

#include "fft.hpp"
#include "wakenode/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace wakenode {

Signal::Signal(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), rate_(sample_rate_hz) {
    if (!(rate_ > 0.0) || !std::isfinite(rate_)) {
        throw Error(ErrorCode::InvalidArgument,
                    "sample rate must be positive and finite, got " + std::to_string(rate_));
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i])) {
            throw Error(ErrorCode::InvalidArgument,
                        "non-finite sample at index " + std::to_string(i));
        }
    }
}

std::vector<double> anti_alias_taps(double cutoff) {
    if (!(cutoff > 0.0) || cutoff > 0.5) {
        throw Error(ErrorCode::InvalidArgument, "anti-alias cutoff must lie in (0, 0.5]");
    }
    constexpr int order = kAntiAliasOrder;
    std::vector<double> taps(order + 1);
    double sum = 0.0;
    for (int k = 0; k <= order; ++k) {
        const double t = k - order / 2.0;
        const double arg = 2.0 * cutoff * t;
        const double sinc = t == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
        const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / order);
        taps[k] = 2.0 * cutoff * sinc * window;
        sum += taps[k];
    }
    for (double& v : taps) v /= sum;
    return taps;
}

namespace {

// Zero-phase FIR output at index n with zero padding outside the signal.
double filtered_at(std::span<const double> x, std::span<const double> taps, std::ptrdiff_t n) {
    const auto half = static_cast<std::ptrdiff_t>(taps.size() / 2);
    const auto len = static_cast<std::ptrdiff_t>(x.size());
    double acc = 0.0;
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, n - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, n + half);
    for (std::ptrdiff_t m = lo; m <= hi; ++m) {
        acc += taps[static_cast<std::size_t>(n - m + half)] * x[static_cast<std::size_t>(m)];
    }
    return acc;
}

template <typename Sampler>
double interpolate(Sampler&& at, double position, std::size_t len) {
    const double last = static_cast<double>(len - 1);
    if (position >= last) return at(static_cast<std::ptrdiff_t>(len - 1));
    const double base = std::floor(position);
    const double frac = position - base;
    const auto i = static_cast<std::ptrdiff_t>(base);
    if (frac < 1e-9) return at(i);
    return (1.0 - frac) * at(i) + frac * at(i + 1);
}

}  // namespace

Signal resample(const Signal& s, double target_rate_hz) {
    if (s.empty()) throw Error(ErrorCode::EmptyInput, "cannot resample an empty signal");
    if (!(target_rate_hz > 0.0) || !std::isfinite(target_rate_hz)) {
        throw Error(ErrorCode::InvalidArgument, "target rate must be positive");
    }
    const double source_rate = s.sample_rate_hz();
    if (target_rate_hz == source_rate) return s;

    const auto x = s.samples();
    const double step = source_rate / target_rate_hz;
    const auto out_len = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(x.size()) * target_rate_hz / source_rate)));

    std::vector<double> out(out_len);
    if (target_rate_hz < source_rate) {
        const auto taps = anti_alias_taps(kAntiAliasCutoffFraction * target_rate_hz / source_rate);
        auto at = [&](std::ptrdiff_t n) { return filtered_at(x, taps, n); };
        for (std::size_t i = 0; i < out_len; ++i) {
            out[i] = interpolate(at, static_cast<double>(i) * step, x.size());
        }
    } else {
        auto at = [&](std::ptrdiff_t n) { return x[static_cast<std::size_t>(n)]; };
        for (std::size_t i = 0; i < out_len; ++i) {
            out[i] = interpolate(at, static_cast<double>(i) * step, x.size());
        }
    }
    return Signal(std::move(out), target_rate_hz);
}

std::ptrdiff_t find_delay(const Signal& reference, const Signal& candidate,
                          std::optional<std::size_t> search_window_samples) {
    if (reference.empty() || candidate.empty()) {
        throw Error(ErrorCode::EmptyInput, "find_delay needs two nonempty signals");
    }
    if (reference.sample_rate_hz() != candidate.sample_rate_hz()) {
        throw Error(ErrorCode::RateMismatch, "find_delay needs equal sample rates");
    }
    const std::size_t shortest = std::min(reference.size(), candidate.size());
    const std::size_t window = search_window_samples.value_or(shortest - 1);
    if (search_window_samples && window == 0) {
        throw Error(ErrorCode::InvalidArgument, "search window must be positive");
    }
    if (window >= shortest) {
        throw Error(ErrorCode::OutOfRange, "search window " + std::to_string(window) +
                                               " exceeds signal length " + std::to_string(shortest));
    }

    const std::size_t n = detail::next_pow2(reference.size() + candidate.size());
    const auto ref_bins = detail::real_fft(reference.samples(), n);
    auto bins = detail::real_fft(candidate.samples(), n);
    for (std::size_t k = 0; k < bins.size(); ++k) bins[k] *= std::conj(ref_bins[k]);
    const auto corr = detail::inverse_real_fft(bins, n);

    auto value = [&](std::ptrdiff_t d) {
        const std::size_t idx = d >= 0 ? static_cast<std::size_t>(d) : n - static_cast<std::size_t>(-d);
        return corr[idx] / static_cast<double>(n);
    };

    double ref_energy = 0.0;
    double cand_energy = 0.0;
    for (double v : reference.samples()) ref_energy += v * v;
    for (double v : candidate.samples()) cand_energy += v * v;
    // FFT round-off separates mathematically equal lags; treat them as ties.
    const double tie_tolerance = 1e-12 * std::sqrt(ref_energy * cand_energy);

    std::ptrdiff_t best = 0;
    double best_value = value(0);
    for (std::size_t mag = 1; mag <= window; ++mag) {
        for (const std::ptrdiff_t d : {-static_cast<std::ptrdiff_t>(mag), static_cast<std::ptrdiff_t>(mag)}) {
            const double v = value(d);
            if (v > best_value + tie_tolerance) {
                best = d;
                best_value = v;
            }
        }
    }
    return best;
}

Signal clip(const Signal& s, std::size_t start_sample, std::size_t length_samples) {
    if (length_samples == 0) throw Error(ErrorCode::InvalidArgument, "clip length must be positive");
    if (start_sample > s.size() || length_samples > s.size() - start_sample) {
        throw Error(ErrorCode::OutOfRange, "clip [" + std::to_string(start_sample) + ", " +
                                               std::to_string(start_sample + length_samples) +
                                               ") exceeds signal of " + std::to_string(s.size()) +
                                               " samples");
    }
    const auto x = s.samples();
    return Signal(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(start_sample),
                                      x.begin() + static_cast<std::ptrdiff_t>(start_sample + length_samples)),
                  s.sample_rate_hz());
}

}  // namespace wakenode
