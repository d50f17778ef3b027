#pragma once

#include <array>
#include <cstdint>

namespace medsim {

// Counter-addressable PRNG stream built on xoshiro256++.
//
// Streams are derived, not split: derive(master_seed, stream_id, counter)
// hashes the three keys through a SplitMix64-style finalizer chain and uses
// the result to fill the xoshiro state.  Any (seed, stream, counter) triple
// therefore yields the same sequence no matter how many other streams exist
// or in which order they are created, which is what makes multi-threaded
// simulation runs reproducible.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) { seed_from(seed, 0, 0); }

  static RngStream derive(std::uint64_t master_seed, std::uint64_t stream_id,
                          std::uint64_t counter) {
    RngStream r(0);
    r.seed_from(master_seed, stream_id, counter);
    return r;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1); safe to feed to inverse CDFs.
  double next_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unbiased integer in [0, bound) via Lemire's multiply-shift rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  // SplitMix64 output finalizer, used here as a mixing function.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  void seed_from(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter) {
    std::uint64_t h = 0x243F6A8885A308D3ull;  // pi digits, an arbitrary odd constant
    const std::uint64_t golden = 0x9E3779B97F4A7C15ull;
    for (std::uint64_t key : {seed, stream_id, counter}) {
      h = mix(h + golden + key);
      h = mix(h ^ (key + golden));
    }
    for (auto& word : s_) {
      h += golden;
      word = mix(h);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = golden;  // all-zero is a fixed point
  }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace medsim
