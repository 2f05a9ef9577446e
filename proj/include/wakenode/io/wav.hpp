#pragma once

#include "wakenode/signal.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace wakenode::io {

struct WavInfo {
    std::uint16_t channels = 0;
    std::uint32_t sample_rate_hz = 0;
    std::uint16_t bits_per_sample = 0;
    bool is_float = false;
    std::size_t frames = 0;
};

enum class WavEncoding { Pcm8, Pcm16, Pcm24, Pcm32, Float32 };

/// Decodes 8/16/24/32-bit integer PCM or 32-bit float, mono or stereo.
/// Stereo is averaged to mono; integers are divided by 2^(bits-1).
Signal decode_wav(std::span<const std::byte> bytes, WavInfo* info = nullptr);
Signal read_wav(const std::filesystem::path& path, WavInfo* info = nullptr);

/// One Signal per channel; all channels must share rate and length.
std::vector<std::byte> encode_wav(std::span<const Signal> channels, WavEncoding encoding);
void write_wav(const std::filesystem::path& path, std::span<const Signal> channels, WavEncoding encoding);

}  // namespace wakenode::io
