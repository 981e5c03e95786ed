#include "paralab/rng.hpp"

namespace paralab {

std::uint64_t fnv1a_bytes(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a(std::string_view s) { return fnv1a_bytes(s.data(), s.size()); }

Engine make_stream(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
  const std::uint64_t h = fnv1a(stream);
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(h),
                    std::uint32_t(h >> 32),  std::uint32_t(index), std::uint32_t(index >> 32)};
  return Engine(seq);
}

}  // namespace paralab
