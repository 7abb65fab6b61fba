#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace boinit {

/// Per-run random stream. Wraps std::mt19937_64, whose output sequence is
/// fixed by the standard, and converts to doubles by hand so that draws are
/// identical across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL) noexcept;

/// Seed for one run of the factorial grid, a stable function of the base seed
/// and the cell coordinates.
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view objective_id,
                          std::string_view strategy_tag, std::uint64_t repetition) noexcept;

}  // namespace boinit
