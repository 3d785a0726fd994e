#pragma once

#include <cstdint>
#include <random>

namespace mbqec {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Derives an independent random stream from (master_seed, stream_index).
/// Batch results stay reproducible no matter in which order runs execute.
inline std::mt19937_64 derive_stream(std::uint64_t master_seed,
                                     std::uint64_t stream_index) {
  std::uint64_t s = master_seed;
  (void)splitmix64(s);
  s ^= 0xD1B54A32D192ED03ull * (stream_index + 1);
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace mbqec
