#include "wakenode/io/report.hpp"

#include "wakenode/error.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <memory>

namespace wakenode::io {

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["tool"] = {{"name", "wakenode"}, {"version", "0.1.0"}};
    j["command"] = command;
    j["inputs"] = nlohmann::json::array();
    for (const auto& in : inputs) j["inputs"].push_back({{"name", in.name}, {"sha256", in.sha256}});
    j["results"] = results;
    j["config"] = config;
    j["outputs"] = outputs;
    return j;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

std::string sha256_hex(std::span<const std::byte> bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
        throw Error(ErrorCode::Io, "SHA-256 computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

InputDigest digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return {path.filename().string(), sha256_hex(std::as_bytes(std::span(raw)))};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "short write to '" + path.string() + "'");
}

}  // namespace wakenode::io
