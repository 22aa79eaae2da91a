// Content-addressed partition cache (PVFRAG_CACHE) and run manifests.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "pvfrag/krylov.hpp"
#include "pvfrag/models.hpp"

namespace pvfrag {

inline constexpr const char* kToolVersion = "pvfrag 0.1.0";

/// FNV-1a, 64-bit; stable across platforms and runs.
inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Cache key: canonicalized transitions + sector; model names never enter.
inline std::string partition_cache_key(const ModelSpec& model, const SectorKey& sector) {
    std::string s = canonical_model_string(model);
    s += "|L=" + std::to_string(sector.L) + ";F=" + std::to_string(sector.F) +
         ";s=" + std::to_string(sector.totalSpin);
    if (sector.dipole) s += ";p=" + std::to_string(*sector.dipole);
    return hex64(fnv1a(s));
}

inline std::optional<std::filesystem::path> cache_dir() {
    const char* env = std::getenv("PVFRAG_CACHE");
    if (!env || !*env) return std::nullopt;
    return std::filesystem::path(env);
}

namespace detail {

inline nlohmann::json partition_to_json(const KrylovPartition& p) {
    // classOf as run-length-encoded [value, count, value, count, ...]
    nlohmann::json rle = nlohmann::json::array();
    size_t i = 0;
    while (i < p.classOf.size()) {
        size_t j = i;
        while (j < p.classOf.size() && p.classOf[j] == p.classOf[i]) ++j;
        rle.push_back(p.classOf[i]);
        rle.push_back(j - i);
        i = j;
    }
    nlohmann::json j;
    j["L"] = p.sector.L;
    j["F"] = p.sector.F;
    j["totalSpin"] = p.sector.totalSpin;
    if (p.sector.dipole) j["dipole"] = *p.sector.dipole;
    j["basisRanks"] = p.basisRanks;
    j["classIds"] = p.classIds;
    j["classSizes"] = p.classSizes;
    j["classOfRle"] = rle;
    return j;
}

inline KrylovPartition partition_from_json(const nlohmann::json& j) {
    KrylovPartition p;
    p.sector.L = j.at("L").get<int>();
    p.sector.F = j.at("F").get<int>();
    p.sector.totalSpin = j.at("totalSpin").get<int>();
    if (j.contains("dipole")) p.sector.dipole = j.at("dipole").get<long long>();
    p.basisRanks = j.at("basisRanks").get<std::vector<Rank>>();
    p.classIds = j.at("classIds").get<std::vector<Rank>>();
    p.classSizes = j.at("classSizes").get<std::vector<std::uint64_t>>();
    const auto& rle = j.at("classOfRle");
    for (size_t i = 0; i + 1 < rle.size(); i += 2) {
        std::uint32_t v = rle[i].get<std::uint32_t>();
        std::uint64_t n = rle[i + 1].get<std::uint64_t>();
        p.classOf.insert(p.classOf.end(), n, v);
    }
    return p;
}

}  // namespace detail

/// decompose() with a read-through cache; concurrent writers are safe via
/// write-to-temp-then-rename.
inline KrylovPartition decompose_cached(const ModelSpec& model, const SectorKey& sector) {
    auto dir = cache_dir();
    if (!dir) return decompose(model, sector);
    const std::string key = partition_cache_key(model, sector);
    const auto file = *dir / (key + ".json");
    if (std::filesystem::exists(file)) {
        std::ifstream in(file);
        nlohmann::json j;
        in >> j;
        return detail::partition_from_json(j);
    }
    KrylovPartition p = decompose(model, sector);
    std::filesystem::create_directories(*dir);
    const auto tmp = *dir / (key + "." + std::to_string(::getpid()) + ".tmp");
    {
        std::ofstream out(tmp);
        out << detail::partition_to_json(p).dump();
    }
    std::filesystem::rename(tmp, file);
    return p;
}

struct RunManifest {
    std::string command;
    nlohmann::json parameters;
    std::string contentHash;

    nlohmann::json to_json() const {
        return {{"command", command},
                {"parameters", parameters},
                {"conventionTag", kDipoleConvention},
                {"toolVersion", kToolVersion},
                {"contentHash", contentHash}};
    }
};

inline RunManifest make_manifest(const std::string& command, nlohmann::json parameters) {
    RunManifest m;
    m.command = command;
    m.parameters = std::move(parameters);
    m.contentHash = hex64(fnv1a(command + "|" + m.parameters.dump()));
    return m;
}

}  // namespace pvfrag
