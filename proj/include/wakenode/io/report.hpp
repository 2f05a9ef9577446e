#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace wakenode::io {

struct InputDigest {
    std::string name;
    std::string sha256;
};

/// Result of one CLI command. Serializes deterministically: keys sorted,
/// no timestamps or absolute paths.
struct Report {
    std::string command;
    std::vector<InputDigest> inputs;
    nlohmann::json results = nlohmann::json::object();
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> outputs;

    nlohmann::json to_json() const;
    std::string dump() const;
};

std::string sha256_hex(std::span<const std::byte> bytes);

/// Digest of a file's bytes, labelled by its file name.
InputDigest digest_file(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace wakenode::io
