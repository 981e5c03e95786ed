#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace paralab {

using Engine = std::mt19937_64;

// Independent engine for (root seed, named stream, index). Every random draw
// in the library goes through here so sub-experiments replay exactly.
Engine make_stream(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

std::uint64_t fnv1a(std::string_view s);
std::uint64_t fnv1a_bytes(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull);

}  // namespace paralab
