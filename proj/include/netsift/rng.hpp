#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace netsift::rng {

// Counter-based generator (Philox 4x64, 10 rounds). Every draw is a pure
// function of (key, counter), which is what makes Monte Carlo output
// independent of execution order and worker count: each trial owns a key
// derived from (experiment seed, trial index) and consumes counters 0,1,2,...
struct Philox4x64Key {
  std::uint64_t k0 = 0;
  std::uint64_t k1 = 0;
};

using Philox4x64Block = std::array<std::uint64_t, 4>;

namespace detail {

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace detail

inline Philox4x64Block philox4x64(Philox4x64Key key, std::uint64_t counter) {
  constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  Philox4x64Block x{counter, 0, 0, 0};
  std::uint64_t k0 = key.k0;
  std::uint64_t k1 = key.k1;
  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    detail::mulhilo64(kMul0, x[0], hi0, lo0);
    detail::mulhilo64(kMul1, x[2], hi1, lo1);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
  }
  return x;
}

/// Uniform in (0, 1): 53 random bits centered half an ulp away from both ends.
inline double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Child stream seed for (seed, index); used to key one Monte Carlo trial.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  constexpr std::uint64_t kDeriveDomain = 0x243F6A8885A308D3ULL;
  return philox4x64(Philox4x64Key{seed, kDeriveDomain}, index)[0];
}

/// Standard-normal stream over a Philox-keyed counter sequence (Box-Muller,
/// four variates per counter block).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t stream_seed)
      : key_{stream_seed, kNormalDomain} {}

  double next() {
    if (lane_ == 4) {
      refill();
    }
    return block_[lane_++];
  }

 private:
  static constexpr std::uint64_t kNormalDomain = 0x452821E638D01377ULL;
  static constexpr double kTwoPi = 6.283185307179586476925286766559;

  void refill() {
    const Philox4x64Block raw = philox4x64(key_, counter_++);
    for (int i = 0; i < 2; ++i) {
      const double u = to_unit_open(raw[2 * i]);
      const double v = to_unit_open(raw[2 * i + 1]);
      const double radius = std::sqrt(-2.0 * std::log(u));
      block_[2 * i] = radius * std::cos(kTwoPi * v);
      block_[2 * i + 1] = radius * std::sin(kTwoPi * v);
    }
    lane_ = 0;
  }

  Philox4x64Key key_;
  std::uint64_t counter_ = 0;
  int lane_ = 4;
  std::array<double, 4> block_{};
};

}  // namespace netsift::rng
