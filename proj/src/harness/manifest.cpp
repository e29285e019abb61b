#include "tlsgap/harness/manifest.hpp"

#include <fstream>

#include "tlsgap/constants.hpp"

namespace tlsgap::harness {

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("manifest: cannot read " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

void RunManifest::add_file(const std::filesystem::path& output_dir,
                           const std::filesystem::path& file) {
    ManifestEntry entry;
    entry.path = std::filesystem::relative(file, output_dir).generic_string();
    entry.checksum_fnv1a64 = fnv1a64_file(file);
    entry.bytes = std::filesystem::file_size(file);
    files.push_back(std::move(entry));
}

void RunManifest::write(const std::filesystem::path& output_dir) const {
    nlohmann::json j;
    j["tlsgap_version"] = kVersion;
    j["config"] = config_snapshot;
    j["versions"] = versions;
    j["summary"] = summary;
    j["errors"] = errors;
    j["wall_clock_s"] = wall_clock_s;
    auto& jf = j["files"] = nlohmann::json::array();
    for (const ManifestEntry& e : files) {
        jf.push_back({{"path", e.path},
                      {"fnv1a64", e.checksum_fnv1a64},
                      {"bytes", e.bytes}});
    }
    std::ofstream out(output_dir / "manifest.json", std::ios::binary);
    out << j.dump(2) << "\n";
}

RunManifest RunManifest::load(const std::filesystem::path& manifest_json) {
    std::ifstream in(manifest_json);
    if (!in) throw std::runtime_error("manifest: cannot open " + manifest_json.string());
    nlohmann::json j;
    in >> j;
    RunManifest m;
    m.config_snapshot = j.value("config", nlohmann::json::object());
    m.summary = j.value("summary", nlohmann::json::object());
    m.wall_clock_s = j.value("wall_clock_s", 0.0);
    if (j.contains("versions"))
        m.versions = j["versions"].get<std::map<std::string, std::string>>();
    if (j.contains("errors"))
        m.errors = j["errors"].get<std::vector<std::string>>();
    for (const auto& e : j.value("files", nlohmann::json::array())) {
        m.files.push_back({e.value("path", ""), e.value("fnv1a64", 0ULL),
                           e.value("bytes", 0ULL)});
    }
    return m;
}

} // namespace tlsgap::harness
