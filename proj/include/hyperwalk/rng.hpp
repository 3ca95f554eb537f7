#pragma once

// Counter-based random streams.  Every trajectory owns streams that are pure
// functions of (seed, trajectory, substream), so ensembles reproduce
// bit-for-bit regardless of how trajectories are scheduled.
//
// Generator: Philox4x64-10 (Salmon et al., SC'11).  The block function and
// the counter increment follow numpy.random.Philox, which the unit tests use
// as a reference.

#include <array>
#include <cstdint>

namespace hyperwalk {

using philox_counter = std::array<std::uint64_t, 4>;
using philox_key = std::array<std::uint64_t, 2>;

namespace detail {

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace detail

inline philox_counter philox4x64_10(philox_counter ctr, philox_key key) {
  constexpr std::uint64_t m0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t m1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t w0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t w1 = 0xBB67AE8584CAA73BULL;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += w0;
      key[1] += w1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    detail::mulhilo64(m0, ctr[0], hi0, lo0);
    detail::mulhilo64(m1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// Substream identifiers inside one trajectory.
enum class Substream : std::uint64_t {
  steps = 0,   // x_n / γ_n draws
  coins = 1,   // Bernoulli c_n of the two-pencil walk
  angles = 2,  // uniform redraws of ς (including ς₀)
};

class PhiloxStream {
 public:
  using result_type = std::uint64_t;

  /// Raw stream with numpy-compatible semantics: the counter is incremented
  /// before each block is generated.
  PhiloxStream(philox_key key, philox_counter counter) : key_(key), ctr_(counter) {}

  /// Stream for (seed, trajectory, substream).  The block index lives in
  /// counter word 0, so each stream has 2^64 blocks before wrapping.
  PhiloxStream(std::uint64_t seed, std::uint64_t trajectory, Substream sub)
      : key_{seed, kKeySalt}, ctr_{0, trajectory, static_cast<std::uint64_t>(sub), 0} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  /// Uniform on the open interval (0, 1), resolution 2^-52.
  double uniform_open() {
    const std::uint64_t m = (*this)() >> 12;
    return (static_cast<double>(m) + 0.5) * 0x1p-52;
  }

  /// Uniform on (−1, 1), exactly symmetric, never ±1.
  double uniform_symmetric_open() {
    const std::int64_t m = static_cast<std::int64_t>((*this)() >> 11);  // [0, 2^53)
    const std::int64_t odd = 2 * m + 1 - (std::int64_t{1} << 53);
    return static_cast<double>(odd) * 0x1p-53;
  }

 private:
  static constexpr std::uint64_t kKeySalt = 0x6879707277616c6bULL;  // "hyprwalk"

  void refill() {
    for (auto& w : ctr_) {
      if (++w != 0) break;
    }
    buffer_ = philox4x64_10(ctr_, key_);
    pos_ = 0;
  }

  philox_key key_;
  philox_counter ctr_;
  philox_counter buffer_{};
  int pos_ = 4;
};

}  // namespace hyperwalk
