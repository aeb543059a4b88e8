#pragma once

#include "symdyn/numeric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symdyn {

std::uint64_t fnv1a64(std::string_view s);
std::string fnv1a64_hex(std::string_view s);

// provenance block embedded in every JSON artifact so a run can be
// reproduced from its output alone
struct RunManifest {
    std::string tool = "symdyn";
    std::string version = "0.1.0";
    std::string command;
    std::string map_spec_hash; // fnv1a64_hex of the canonical map spec text
    NumberPolicy policy;
    std::optional<std::uint64_t> seed;
    std::string out_path = "stdout";
    std::vector<std::pair<std::string, std::string>> params;
    long duration_ms = 0;
};

std::string manifest_to_json(const RunManifest& m);

} // namespace symdyn
