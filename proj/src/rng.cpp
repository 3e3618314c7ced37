#include "maskfill/rng.hpp"

#include <limits>

namespace maskfill {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = fnv1a64(key, h ^ 0xcbf29ce484222325ULL);
  h = splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  return h;
}

Rng Rng::derive(std::uint64_t seed, std::string_view key, std::uint64_t index) {
  return Rng(derive_seed(seed, key, index));
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

}  // namespace maskfill
