#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace tlsgap::harness {

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

struct ManifestEntry {
    std::string path; // relative to the output directory
    std::uint64_t checksum_fnv1a64 = 0;
    std::uint64_t bytes = 0;
};

// What a run produced: config snapshot, every emitted file with a checksum,
// solver/kernel versions, wall clock, and any per-seed failures (recorded,
// not fatal). Serialized as manifest.json in the output directory.
struct RunManifest {
    nlohmann::json config_snapshot;
    std::vector<ManifestEntry> files;
    std::map<std::string, std::string> versions;
    nlohmann::json summary;
    std::vector<std::string> errors;
    double wall_clock_s = 0.0;

    void add_file(const std::filesystem::path& output_dir,
                  const std::filesystem::path& file);
    void write(const std::filesystem::path& output_dir) const;
    static RunManifest load(const std::filesystem::path& manifest_json);
};

} // namespace tlsgap::harness
