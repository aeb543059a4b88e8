#include "symdyn/manifest.hpp"

#include <json.hpp>

#include <cstdio>

namespace symdyn {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view s) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
    return buf;
}

std::string manifest_to_json(const RunManifest& m) {
    nlohmann::json j = nlohmann::json::object();
    j["tool"] = m.tool;
    j["version"] = m.version;
    j["command"] = m.command;
    j["map_spec_hash"] = m.map_spec_hash;
    nlohmann::json pol = nlohmann::json::object();
    pol["mode"] = m.policy.is_exact() ? "exact" : "approx";
    pol["precision_bits"] = m.policy.precision_bits;
    pol["tolerance"] = m.policy.tolerance;
    j["policy"] = std::move(pol);
    if (m.seed)
        j["seed"] = *m.seed;
    else
        j["seed"] = nullptr;
    j["out"] = m.out_path;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : m.params) params[key] = value;
    j["params"] = std::move(params);
    j["duration_ms"] = m.duration_ms;
    return j.dump();
}

} // namespace symdyn
