#include "collabnet/manifest.hpp"

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "collabnet/error.hpp"
#include "collabnet/format.hpp"

namespace collabnet {

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw InternalError("SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string RunManifest::config_hash() const {
    std::string canon = command + "\n";
    for (const auto& [k, v] : config) canon += k + "=" + v + "\n";
    return sha256_hex(canon);
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = cfg;
    j["config_hash"] = config_hash();
    auto list = [](const std::vector<FileDigest>& files) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& f : files) a.push_back({{"path", f.path}, {"sha256", f.sha256}});
        return a;
    };
    j["inputs"] = list(inputs);
    j["outputs"] = list(outputs);
    j["tool_version"] = tool_version;
    return j.dump(2) + "\n";
}

FileDigest digest_file(const std::string& path) { return {path, sha256_hex(read_file(path))}; }

void write_manifests(const RunManifest& m) {
    const auto text = m.to_json();
    for (const auto& o : m.outputs) write_file(o.path + ".manifest.json", text);
}

}  // namespace collabnet
