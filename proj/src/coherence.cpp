#include "wakenode/coherence.hpp"

#include "fft.hpp"
#include "wakenode/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace wakenode {

std::string to_string(WindowKind w) {
    switch (w) {
        case WindowKind::Hamming: return "hamming";
        case WindowKind::Hann: return "hann";
        case WindowKind::Rectangular: return "rectangular";
    }
    return "unknown";
}

WindowKind window_kind_from_string(const std::string& name) {
    if (name == "hamming") return WindowKind::Hamming;
    if (name == "hann") return WindowKind::Hann;
    if (name == "rectangular") return WindowKind::Rectangular;
    throw Error(ErrorCode::InvalidArgument, "unknown window '" + name + "'");
}

void WelchParams::validate() const {
    if (segment_count < 1) throw Error(ErrorCode::InvalidArgument, "segment_count must be >= 1");
    if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "overlap_fraction must lie in [0, 1)");
    }
    if (fft_length && *fft_length < 2) throw Error(ErrorCode::InvalidArgument, "fft_length must be >= 2");
}

SegmentPlan plan_segments(std::size_t signal_length, const WelchParams& p) {
    p.validate();
    const double k = static_cast<double>(p.segment_count);
    const double span = k - (k - 1.0) * p.overlap_fraction;
    SegmentPlan plan;
    plan.segment_length = static_cast<std::size_t>(std::floor(static_cast<double>(signal_length) / span));
    if (plan.segment_length < 2) {
        throw Error(ErrorCode::TooShort, "signal of " + std::to_string(signal_length) +
                                             " samples is too short for " +
                                             std::to_string(p.segment_count) + " Welch segments");
    }
    plan.overlap = static_cast<std::size_t>(std::floor(p.overlap_fraction * static_cast<double>(plan.segment_length)));
    plan.step = plan.segment_length - plan.overlap;
    if (plan.step == 0) throw Error(ErrorCode::InvalidArgument, "overlap leaves no segment advance");
    plan.count = (signal_length - plan.overlap) / plan.step;
    plan.fft_length = p.fft_length.value_or(detail::next_pow2(plan.segment_length));
    if (plan.fft_length < plan.segment_length) {
        throw Error(ErrorCode::InvalidArgument, "fft_length is shorter than the segment length");
    }
    return plan;
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
    std::vector<double> w(length, 1.0);
    if (length < 2 || kind == WindowKind::Rectangular) return w;
    const double denom = static_cast<double>(length - 1);
    const double a0 = kind == WindowKind::Hamming ? 0.54 : 0.5;
    for (std::size_t i = 0; i < length; ++i) {
        w[i] = a0 - (1.0 - a0) * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
    }
    return w;
}

namespace {

struct WelchSums {
    std::vector<double> xx;
    std::vector<double> yy;
    std::vector<std::complex<double>> xy;
    std::vector<double> frequencies_hz;
};

void check_pair(const Signal& x, const Signal& y) {
    if (x.empty() || y.empty()) throw Error(ErrorCode::EmptyInput, "spectral estimate of an empty signal");
    if (x.sample_rate_hz() != y.sample_rate_hz()) {
        throw Error(ErrorCode::RateMismatch, "signals have different sample rates");
    }
    if (x.size() != y.size()) {
        throw Error(ErrorCode::LengthMismatch, "signals have different lengths (" + std::to_string(x.size()) +
                                                   " vs " + std::to_string(y.size()) + ")");
    }
}

// Scaled one-sided Welch averages of conj(X)Y, |X|^2 and |Y|^2.
WelchSums welch(const Signal& x, const Signal& y, const WelchParams& p) {
    check_pair(x, y);
    const SegmentPlan plan = plan_segments(x.size(), p);
    const auto window = make_window(p.window, plan.segment_length);
    const double window_power = std::inner_product(window.begin(), window.end(), window.begin(), 0.0);
    const std::size_t bins = plan.fft_length / 2 + 1;

    WelchSums sums{std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0),
                   std::vector<std::complex<double>>(bins), std::vector<double>(bins)};

    std::vector<double> xs(plan.segment_length);
    std::vector<double> ys(plan.segment_length);
    for (std::size_t s = 0; s < plan.count; ++s) {
        const std::size_t start = s * plan.step;
        for (std::size_t i = 0; i < plan.segment_length; ++i) {
            xs[i] = x[start + i] * window[i];
            ys[i] = y[start + i] * window[i];
        }
        const auto fx = detail::real_fft(xs, plan.fft_length);
        const auto fy = detail::real_fft(ys, plan.fft_length);
        for (std::size_t k = 0; k < bins; ++k) {
            sums.xy[k] += std::conj(fx[k]) * fy[k];
            sums.xx[k] += std::norm(fx[k]);
            sums.yy[k] += std::norm(fy[k]);
        }
    }

    const double fs = x.sample_rate_hz();
    const double scale = 1.0 / (fs * window_power * static_cast<double>(plan.count));
    for (std::size_t k = 0; k < bins; ++k) {
        const bool edge = k == 0 || (plan.fft_length % 2 == 0 && k == bins - 1);
        const double f = edge ? scale : 2.0 * scale;
        sums.xy[k] *= f;
        sums.xx[k] *= f;
        sums.yy[k] *= f;
        sums.frequencies_hz[k] = static_cast<double>(k) * fs / static_cast<double>(plan.fft_length);
    }
    return sums;
}

bool all_zero(const Signal& s) {
    return std::all_of(s.samples().begin(), s.samples().end(), [](double v) { return v == 0.0; });
}

}  // namespace

CrossSpectrum cross_spectral_density(const Signal& x, const Signal& y, const WelchParams& p) {
    auto sums = welch(x, y, p);
    return {std::move(sums.frequencies_hz), std::move(sums.xy)};
}

CoherenceEstimate magnitude_squared_coherence(const Signal& x, const Signal& y, const WelchParams& p) {
    if (p.segment_count < 2) {
        throw Error(ErrorCode::Degenerate, "single-segment coherence is identically 1; use segment_count >= 2");
    }
    check_pair(x, y);
    if (all_zero(x) || all_zero(y)) throw Error(ErrorCode::Degenerate, "coherence of an all-zero signal");

    const auto sums = welch(x, y, p);
    CoherenceEstimate est;
    est.frequencies_hz = sums.frequencies_hz;
    est.params = p;
    est.sample_rate_hz = x.sample_rate_hz();
    est.values.resize(sums.xy.size());
    for (std::size_t k = 0; k < sums.xy.size(); ++k) {
        const double denom = sums.xx[k] * sums.yy[k];
        est.values[k] = denom < 1e-30 ? 0.0 : std::clamp(std::norm(sums.xy[k]) / denom, 0.0, 1.0);
    }
    return est;
}

std::vector<std::size_t> select_peaks(std::span<const double> series, std::size_t min_peak_separation) {
    if (min_peak_separation < 1) throw Error(ErrorCode::InvalidArgument, "peak separation must be >= 1");
    const std::size_t n = series.size();
    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(series[i] > series[i - 1])) continue;
        // Flat tops count once, at their leading edge, if they fall off afterwards.
        std::size_t j = i;
        while (j + 1 < n && series[j + 1] == series[i]) ++j;
        if (j + 1 < n && series[j + 1] < series[i]) candidates.push_back(i);
        i = j;
    }

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return series[candidates[a]] > series[candidates[b]]; });

    std::vector<bool> removed(candidates.size(), false);
    std::vector<std::size_t> kept;
    for (std::size_t o : order) {
        if (removed[o]) continue;
        kept.push_back(candidates[o]);
        const std::size_t at = candidates[o];
        for (std::size_t l = o; l-- > 0 && at - candidates[l] < min_peak_separation;) removed[l] = true;
        for (std::size_t r = o + 1; r < candidates.size() && candidates[r] - at < min_peak_separation; ++r) {
            removed[r] = true;
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

namespace {

double pchip_end_slope(double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (std::signbit(s) != std::signbit(d0) || s == 0.0 || d0 == 0.0) {
        s = 0.0;
    } else if (std::signbit(d0) != std::signbit(d1) && std::abs(s) > 3.0 * std::abs(d0)) {
        s = 3.0 * d0;
    }
    return s;
}

}  // namespace

std::vector<double> peak_envelope(std::span<const double> series, std::size_t min_peak_separation) {
    if (series.empty()) throw Error(ErrorCode::EmptyInput, "peak envelope of an empty series");
    const std::size_t n = series.size();
    auto peaks = select_peaks(series, min_peak_separation);
    if (n == 1) return {series.begin(), series.end()};

    std::vector<std::size_t> knots;
    knots.reserve(peaks.size() + 2);
    knots.push_back(0);
    knots.insert(knots.end(), peaks.begin(), peaks.end());
    knots.push_back(n - 1);

    const std::size_t m = knots.size();
    std::vector<double> h(m - 1);
    std::vector<double> delta(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        h[k] = static_cast<double>(knots[k + 1] - knots[k]);
        delta[k] = (series[knots[k + 1]] - series[knots[k]]) / h[k];
    }

    std::vector<double> slope(m, 0.0);
    if (m == 2) {
        slope[0] = slope[1] = delta[0];
    } else {
        for (std::size_t k = 1; k + 1 < m; ++k) {
            if (delta[k - 1] * delta[k] <= 0.0) continue;
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            slope[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
        slope[0] = pchip_end_slope(h[0], h[1], delta[0], delta[1]);
        slope[m - 1] = pchip_end_slope(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
    }

    std::vector<double> out(n);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const double y0 = series[knots[k]];
        const double y1 = series[knots[k + 1]];
        for (std::size_t i = knots[k]; i <= knots[k + 1]; ++i) {
            const double t = static_cast<double>(i - knots[k]) / h[k];
            const double t2 = t * t;
            const double t3 = t2 * t;
            out[i] = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h[k] * slope[k] +
                     (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h[k] * slope[k + 1];
        }
    }
    return out;
}

void ScoringProtocol::validate() const {
    if (!(analysis_rate_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "analysis rate must be positive");
    if (!(alignment_s > 0.0) || !(analysis_s > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "alignment and analysis durations must be positive");
    }
    welch.validate();
    if (envelope_separation < 1) throw Error(ErrorCode::InvalidArgument, "envelope separation must be >= 1");
}

CoherenceScore evaluate_recording(const Signal& source, const Signal& recording, const ScoringProtocol& protocol) {
    protocol.validate();
    const double required_s = protocol.alignment_s + protocol.analysis_s;
    for (const Signal* s : {&source, &recording}) {
        if (s->duration_s() + 1e-9 < required_s) {
            char msg[160];
            std::snprintf(msg, sizeof msg, "%s is %.3f s long; scoring needs at least %.1f s",
                          s == &source ? "source" : "recording", s->duration_s(), required_s);
            throw Error(ErrorCode::TooShort, msg);
        }
    }

    const Signal src = resample(source, protocol.analysis_rate_hz);
    const Signal rec = resample(recording, protocol.analysis_rate_hz);
    const auto align_n = static_cast<std::size_t>(std::llround(protocol.alignment_s * protocol.analysis_rate_hz));
    const auto analysis_n = static_cast<std::size_t>(std::llround(protocol.analysis_s * protocol.analysis_rate_hz));

    const Signal src_head = clip(src, 0, align_n);
    const Signal rec_head = clip(rec, 0, align_n);
    for (const Signal* s : {&src_head, &rec_head}) {
        if (std::all_of(s->samples().begin(), s->samples().end(), [](double v) { return v == 0.0; })) {
            throw Error(ErrorCode::AlignmentFailed, std::string(s == &src_head ? "source" : "recording") +
                                                        " is silent over the alignment window");
        }
    }
    const std::ptrdiff_t delay = find_delay(src_head, rec_head);
    const std::size_t src_offset = delay < 0 ? static_cast<std::size_t>(-delay) : 0;
    const std::size_t rec_offset = delay > 0 ? static_cast<std::size_t>(delay) : 0;
    if (src_offset + analysis_n > src.size() || rec_offset + analysis_n > rec.size()) {
        throw Error(ErrorCode::AlignmentFailed,
                    "estimated delay of " + std::to_string(delay) +
                        " samples leaves less than the analysis window in one of the signals");
    }

    CoherenceScore result;
    result.delay_samples = delay;
    result.coherence = magnitude_squared_coherence(clip(src, src_offset, analysis_n),
                                                   clip(rec, rec_offset, analysis_n), protocol.welch);
    result.envelope = peak_envelope(result.coherence.values, protocol.envelope_separation);
    const double mean = std::accumulate(result.envelope.begin(), result.envelope.end(), 0.0) /
                        static_cast<double>(result.envelope.size());
    result.score = std::clamp(mean, 0.0, 1.0);
    return result;
}

double coherence_score(const Signal& source, const Signal& recording) {
    return evaluate_recording(source, recording).score;
}

std::string to_string(MicConfiguration c) {
    return c == MicConfiguration::Analog ? "analog" : "digital";
}

void MicCandidate::validate() const {
    if (!(power_mw > 0.0)) throw Error(ErrorCode::InvalidArgument, "microphone '" + name + "': power must be positive");
    if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "microphone '" + name + "': accuracy must lie in [0, 1]");
    }
    if (!(supply_min_v > 0.0) || !(supply_max_v >= supply_min_v)) {
        throw Error(ErrorCode::InvalidArgument, "microphone '" + name + "': invalid supply range");
    }
}

std::vector<RankedMic> rank_microphones(std::span<const MicCandidate> candidates, bool require_analog,
                                        std::optional<double> supply_v) {
    if (candidates.empty()) throw Error(ErrorCode::EmptyInput, "no microphone candidates to rank");
    if (supply_v && !(*supply_v > 0.0)) throw Error(ErrorCode::InvalidArgument, "supply voltage must be positive");

    std::vector<RankedMic> ranked;
    ranked.reserve(candidates.size());
    for (const auto& mic : candidates) {
        mic.validate();
        RankedMic r{0, mic, true, {}};
        if (require_analog && mic.configuration != MicConfiguration::Analog) {
            r.reasons.push_back("digital output cannot drive the analog threshold circuit");
        }
        if (supply_v && (*supply_v < mic.supply_min_v || *supply_v > mic.supply_max_v)) {
            char msg[128];
            std::snprintf(msg, sizeof msg, "supply %.2f V outside %.2f-%.2f V; needs a regulator", *supply_v,
                          mic.supply_min_v, mic.supply_max_v);
            r.reasons.emplace_back(msg);
        }
        r.eligible = r.reasons.empty();
        ranked.push_back(std::move(r));
    }

    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedMic& a, const RankedMic& b) {
        if (a.eligible != b.eligible) return a.eligible;
        if (a.mic.accuracy != b.mic.accuracy) return a.mic.accuracy > b.mic.accuracy;
        return a.mic.power_mw < b.mic.power_mw;
    });
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
    return ranked;
}

std::vector<MicCandidate> reference_microphones() {
    return {
        {"InvenSense ICS-40310", 0.0079, 0.7359, MicConfiguration::Analog, 0.9, 1.3},
        {"PUI PMM-3738-VM1010-EB-R", 0.3545, 0.6966, MicConfiguration::Analog, 1.6, 3.6},
        {"ST MP23ABS1", 0.3480, 0.7187, MicConfiguration::Analog, 1.52, 3.6},
        {"ST MP34DT05-A", 2.0813, 0.7577, MicConfiguration::Digital, 1.6, 3.6},
    };
}

}  // namespace wakenode
