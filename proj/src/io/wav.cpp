#include "wakenode/io/wav.hpp"

#include "wakenode/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace wakenode::io {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const std::byte* p) {
    return std::to_integer<std::uint32_t>(p[0]) | std::to_integer<std::uint32_t>(p[1]) << 8 |
           std::to_integer<std::uint32_t>(p[2]) << 16 | std::to_integer<std::uint32_t>(p[3]) << 24;
}

std::uint16_t le16(const std::byte* p) {
    return static_cast<std::uint16_t>(std::to_integer<unsigned>(p[0]) | std::to_integer<unsigned>(p[1]) << 8);
}

bool tag_is(const std::byte* p, const char* tag) { return std::memcmp(p, tag, 4) == 0; }

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorCode::Parse, "corrupt WAV: " + why); }

double decode_sample(const std::byte* p, std::uint16_t bits, bool is_float) {
    switch (bits) {
        case 8: return (std::to_integer<int>(p[0]) - 128) / 128.0;
        case 16: return static_cast<std::int16_t>(le16(p)) / 32768.0;
        case 24: {
            auto v = static_cast<std::int32_t>(std::to_integer<std::uint32_t>(p[0]) |
                                               std::to_integer<std::uint32_t>(p[1]) << 8 |
                                               std::to_integer<std::uint32_t>(p[2]) << 16);
            if (v & 0x800000) v -= 0x1000000;
            return v / 8388608.0;
        }
        case 32:
            if (is_float) return static_cast<double>(std::bit_cast<float>(le32(p)));
            return static_cast<std::int32_t>(le32(p)) / 2147483648.0;
        default: return 0.0;
    }
}

}  // namespace

Signal decode_wav(std::span<const std::byte> bytes, WavInfo* info) {
    if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") || !tag_is(bytes.data() + 8, "WAVE")) {
        corrupt("missing RIFF/WAVE header");
    }
    std::size_t pos = 12;
    bool have_fmt = false;
    WavInfo fmt;
    std::uint16_t format = 0;
    std::uint16_t block_align = 0;
    const std::byte* data = nullptr;
    std::size_t data_size = 0;

    while (pos + 8 <= bytes.size()) {
        const std::byte* chunk = bytes.data() + pos;
        const std::size_t size = le32(chunk + 4);
        const std::size_t body = pos + 8;
        if (size > bytes.size() - body) {
            // Truncated final data chunk: keep what is there.
            if (!tag_is(chunk, "data")) corrupt("chunk overruns file");
        }
        const std::size_t avail = std::min(size, bytes.size() - body);
        if (tag_is(chunk, "fmt ")) {
            if (avail < 16) corrupt("fmt chunk too small");
            format = le16(chunk + 8);
            fmt.channels = le16(chunk + 10);
            fmt.sample_rate_hz = le32(chunk + 12);
            block_align = le16(chunk + 20);
            fmt.bits_per_sample = le16(chunk + 22);
            if (format == kFormatExtensible) {
                if (avail < 40) corrupt("extensible fmt chunk too small");
                format = le16(chunk + 8 + 24);
            }
            have_fmt = true;
        } else if (tag_is(chunk, "data")) {
            data = chunk + 8;
            data_size = avail;
            break;
        }
        pos = body + size + (size & 1);
    }
    if (!have_fmt) corrupt("no fmt chunk");
    if (data == nullptr) corrupt("no data chunk");

    fmt.is_float = format == kFormatFloat;
    if (format != kFormatPcm && format != kFormatFloat) {
        throw Error(ErrorCode::UnsupportedFormat, "WAV format tag " + std::to_string(format) + " is not PCM or float");
    }
    const bool bits_ok = fmt.is_float ? fmt.bits_per_sample == 32
                                      : (fmt.bits_per_sample == 8 || fmt.bits_per_sample == 16 ||
                                         fmt.bits_per_sample == 24 || fmt.bits_per_sample == 32);
    if (!bits_ok) {
        throw Error(ErrorCode::UnsupportedFormat,
                    std::to_string(fmt.bits_per_sample) + "-bit " + (fmt.is_float ? "float" : "PCM") + " is not supported");
    }
    if (fmt.channels != 1 && fmt.channels != 2) {
        throw Error(ErrorCode::UnsupportedFormat, std::to_string(fmt.channels) + "-channel audio is not supported");
    }
    if (fmt.sample_rate_hz == 0) corrupt("zero sample rate");
    const std::size_t bytes_per_sample = fmt.bits_per_sample / 8u;
    if (block_align != bytes_per_sample * fmt.channels) corrupt("block alignment does not match format");

    fmt.frames = data_size / block_align;
    std::vector<double> mono(fmt.frames);
    for (std::size_t f = 0; f < fmt.frames; ++f) {
        const std::byte* frame = data + f * block_align;
        double acc = 0.0;
        for (std::uint16_t c = 0; c < fmt.channels; ++c) {
            acc += decode_sample(frame + c * bytes_per_sample, fmt.bits_per_sample, fmt.is_float);
        }
        mono[f] = acc / fmt.channels;
        if (!std::isfinite(mono[f])) corrupt("non-finite float sample at frame " + std::to_string(f));
    }
    if (info) *info = fmt;
    return Signal(std::move(mono), static_cast<double>(fmt.sample_rate_hz));
}

Signal read_wav(const std::filesystem::path& path, WavInfo* info) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_wav(std::as_bytes(std::span(raw)), info);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::vector<std::byte> encode_wav(std::span<const Signal> channels, WavEncoding encoding) {
    if (channels.empty()) throw Error(ErrorCode::EmptyInput, "no channels to encode");
    const auto rate = channels.front().sample_rate_hz();
    const auto frames = channels.front().size();
    for (const auto& ch : channels) {
        if (ch.sample_rate_hz() != rate || ch.size() != frames) {
            throw Error(ErrorCode::LengthMismatch, "WAV channels must share rate and length");
        }
    }
    if (rate != std::floor(rate) || rate > 4294967295.0) {
        throw Error(ErrorCode::InvalidArgument, "WAV needs an integral sample rate");
    }

    std::uint16_t bits = 16;
    switch (encoding) {
        case WavEncoding::Pcm8: bits = 8; break;
        case WavEncoding::Pcm16: bits = 16; break;
        case WavEncoding::Pcm24: bits = 24; break;
        case WavEncoding::Pcm32:
        case WavEncoding::Float32: bits = 32; break;
    }
    const auto nch = static_cast<std::uint16_t>(channels.size());
    const std::uint32_t bytes_per_sample = bits / 8u;
    const std::uint32_t block = bytes_per_sample * nch;
    const auto data_size = static_cast<std::uint32_t>(frames * block);

    std::vector<std::byte> out;
    out.reserve(44 + data_size);
    auto put = [&](std::uint32_t v, int n) {
        for (int i = 0; i < n; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
    };
    auto tag = [&](const char* t) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(t[i]));
    };
    tag("RIFF");
    put(36 + data_size, 4);
    tag("WAVE");
    tag("fmt ");
    put(16, 4);
    put(encoding == WavEncoding::Float32 ? kFormatFloat : kFormatPcm, 2);
    put(nch, 2);
    put(static_cast<std::uint32_t>(rate), 4);
    put(static_cast<std::uint32_t>(rate) * block, 4);
    put(block, 2);
    put(bits, 2);
    tag("data");
    put(data_size, 4);

    for (std::size_t f = 0; f < frames; ++f) {
        for (const auto& ch : channels) {
            const double v = ch[f];
            if (encoding == WavEncoding::Float32) {
                put(std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
                continue;
            }
            const double scale = std::ldexp(1.0, bits - 1);
            const double q = std::clamp(std::round(v * scale), -scale, scale - 1.0);
            const auto iv = static_cast<std::int64_t>(q);
            if (bits == 8) {
                put(static_cast<std::uint32_t>(iv + 128), 1);
            } else {
                put(static_cast<std::uint32_t>(iv), static_cast<int>(bytes_per_sample));
            }
        }
    }
    return out;
}

void write_wav(const std::filesystem::path& path, std::span<const Signal> channels, WavEncoding encoding) {
    const auto bytes = encode_wav(channels, encoding);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to '" + path.string() + "'");
}

}  // namespace wakenode::io
