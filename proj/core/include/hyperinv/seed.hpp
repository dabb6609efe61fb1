#pragma once

#include <cstdint>
#include <string_view>

namespace hyperinv {

/// Deterministic child seed for a named consumer of the root seed (FNV-1a + splitmix64).
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view consumer) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : consumer) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = root ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace hyperinv
