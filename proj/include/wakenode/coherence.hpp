#pragma once

#include "wakenode/signal.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wakenode {

enum class WindowKind { Hamming, Hann, Rectangular };

std::string to_string(WindowKind w);
WindowKind window_kind_from_string(const std::string& name);

/// Welch averaging setup. The defaults are 8 segments, 50% overlap and a
/// Hamming window, with the FFT length rounded up to a power of two.
struct WelchParams {
    std::size_t segment_count = 8;
    double overlap_fraction = 0.5;
    WindowKind window = WindowKind::Hamming;
    std::optional<std::size_t> fft_length;

    void validate() const;
    friend bool operator==(const WelchParams&, const WelchParams&) = default;
};

/// How a signal of a given length is cut into Welch segments.
struct SegmentPlan {
    std::size_t segment_length = 0;
    std::size_t overlap = 0;
    std::size_t step = 0;
    std::size_t count = 0;
    std::size_t fft_length = 0;
};

SegmentPlan plan_segments(std::size_t signal_length, const WelchParams& p);

/// Symmetric window of the given length.
std::vector<double> make_window(WindowKind kind, std::size_t length);

struct CrossSpectrum {
    std::vector<double> frequencies_hz;
    std::vector<std::complex<double>> values;
};

/// One-sided Welch cross-spectral density, accumulated as conj(X) * Y.
CrossSpectrum cross_spectral_density(const Signal& x, const Signal& y, const WelchParams& p = {});

struct CoherenceEstimate {
    std::vector<double> frequencies_hz;
    std::vector<double> values;
    WelchParams params;
    double sample_rate_hz = 0.0;
};

/// |Gxy|^2 / (Gxx Gyy) per bin, clamped to [0, 1]. Bins whose denominator
/// is below 1e-30 report 0. Needs at least two segments.
CoherenceEstimate magnitude_squared_coherence(const Signal& x, const Signal& y, const WelchParams& p = {});

inline constexpr std::size_t kDefaultPeakSeparation = 100;

/// Upper peak envelope: local maxima at least `min_peak_separation`
/// samples apart (tallest kept first), plus both endpoints, joined by a
/// shape-preserving piecewise cubic (PCHIP).
std::vector<double> peak_envelope(std::span<const double> series,
                                  std::size_t min_peak_separation = kDefaultPeakSeparation);

/// Indices of the peaks `peak_envelope` interpolates through, endpoints excluded.
std::vector<std::size_t> select_peaks(std::span<const double> series, std::size_t min_peak_separation);

/// Fixed protocol constants for scoring a microphone recording.
struct ScoringProtocol {
    double analysis_rate_hz = 8000.0;
    double alignment_s = 10.0;
    double analysis_s = 80.0;
    WelchParams welch{};
    std::size_t envelope_separation = kDefaultPeakSeparation;

    void validate() const;
};

struct CoherenceScore {
    double score = 0.0;
    // Offset (in analysis-rate samples) of the recording relative to the source.
    std::ptrdiff_t delay_samples = 0;
    CoherenceEstimate coherence;
    std::vector<double> envelope;
};

/// Full recording evaluation: resample both signals to the analysis rate,
/// estimate the delay from the leading alignment window, cut aligned
/// analysis windows, take the MSC, its peak envelope and the mean.
CoherenceScore evaluate_recording(const Signal& source, const Signal& recording,
                                  const ScoringProtocol& protocol = {});

/// Scalar microphone accuracy in [0, 1]; see evaluate_recording.
double coherence_score(const Signal& source, const Signal& recording);

enum class MicConfiguration { Analog, Digital };

std::string to_string(MicConfiguration c);

struct MicCandidate {
    std::string name;
    double power_mw = 0.0;
    double accuracy = 0.0;
    MicConfiguration configuration = MicConfiguration::Analog;
    double supply_min_v = 0.0;
    double supply_max_v = 0.0;

    void validate() const;
};

struct RankedMic {
    std::size_t rank = 0;
    MicCandidate mic;
    bool eligible = true;
    std::vector<std::string> reasons;
};

/// Eligible candidates first (accuracy descending, then power ascending),
/// followed by ineligible ones in the same order. Without a supply voltage
/// the supply-range check is skipped.
std::vector<RankedMic> rank_microphones(std::span<const MicCandidate> candidates, bool require_analog,
                                        std::optional<double> supply_v);

/// Measured microphone table bundled with the tool.
std::vector<MicCandidate> reference_microphones();

}  // namespace wakenode
