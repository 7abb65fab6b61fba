#include "boinit/rng.hpp"

#include <string>

namespace boinit {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash) noexcept {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view objective_id,
                          std::string_view strategy_tag, std::uint64_t repetition) noexcept {
  // Field separators keep ("ab","c") and ("a","bc") apart.
  std::uint64_t h = fnv1a(objective_id);
  h = fnv1a(std::string_view("\x1f", 1), h);
  h = fnv1a(strategy_tag, h);
  h = fnv1a(std::string_view("\x1f", 1), h);
  h = splitmix64(h ^ splitmix64(repetition));
  return splitmix64(h ^ splitmix64(base_seed + 0x632be59bd9b4e019ULL));
}

}  // namespace boinit
