#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace maskfill {

/// Seeded random source with platform-stable output.
///
/// Wraps std::mt19937_64 (whose raw sequence is fixed by the standard) and
/// derives bounded integers and reals itself, since the standard
/// distributions differ between library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream keyed by (seed, key, index); independent of call order elsewhere.
  static Rng derive(std::uint64_t seed, std::string_view key, std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_below(std::uint64_t n);

  /// Uniform real in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a over bytes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Stable seed for a (seed, key, index) triple.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key, std::uint64_t index = 0);

}  // namespace maskfill
