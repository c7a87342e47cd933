#pragma once

#include <cstdint>
#include <string_view>

namespace fractfid {

/// One splitmix64 output for state x.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Sub-seed of job `index` under `master`; stable across platforms and
/// independent of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03ULL));
}

inline constexpr std::string_view kSeedDerivation =
    "splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03))";

}  // namespace fractfid
