#pragma once

#include <cstdint>
#include <random>

namespace blorc {

// Every random stream is derived from one root seed plus a purpose tag (and an
// optional index), so changing how one stream is consumed never shifts another.
enum class RngPurpose : std::uint32_t {
  kSignal = 1,
  kNoise = 2,
  kShuffle = 3,
  kInit = 4,
  kPerturbation = 5,
  kInstance = 6,
};

inline std::mt19937_64 make_rng(std::uint64_t root, RngPurpose purpose, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace blorc
