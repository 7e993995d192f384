#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace collabnet {

inline constexpr std::string_view kToolVersion = "collabnet 0.1.0";

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

struct FileDigest {
    std::string path;
    std::string sha256;
};

/// Provenance written next to each output as `<output>.manifest.json`.
/// Contains no timestamps, so reruns on the same inputs reproduce it byte for byte.
struct RunManifest {
    std::string command;
    /// Flags that affect results, in a fixed order; hashed into config_hash.
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<FileDigest> inputs;
    std::vector<FileDigest> outputs;
    std::string tool_version{kToolVersion};

    std::string config_hash() const;
    std::string to_json() const;
};

/// Digest of a file's bytes; throws ValidationError when unreadable.
FileDigest digest_file(const std::string& path);

/// Writes `<output>.manifest.json` for every output listed in `m`.
void write_manifests(const RunManifest& m);

}  // namespace collabnet
