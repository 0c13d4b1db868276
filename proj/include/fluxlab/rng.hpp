#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fluxlab {

/// Philox4x64-10 counter-based generator. The output is a pure function of
/// (key, counter), so any stream position can be reproduced from the seed
/// alone. Streams are separated by the second key word.
class Philox4x64 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  Philox4x64(std::uint64_t seed, std::uint64_t stream = 0) noexcept : key_{seed, stream} {}

  /// The raw bijection: ten rounds of the Philox S-box on `counter` under `key`.
  [[nodiscard]] static Block block(Block counter, Key key) noexcept;

  result_type operator()() noexcept {
    if (used_ == 4) {
      ++counter_[0];
      if (counter_[0] == 0) ++counter_[1];
      buffer_ = block(counter_, key_);
      used_ = 0;
    }
    return buffer_[used_++];
  }

  /// Uniform double in (0, 1] built from the top 53 bits.
  double uniform_open_closed() noexcept { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }
  /// Uniform double in [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

 private:
  Key key_;
  Block counter_{0, 0, 0, 0};
  Block buffer_{};
  int used_ = 4;
};

/// RNG stream tags, one per independent consumer of a seed.
enum class Stream : std::uint64_t {
  GaugeField = 1,
  SitePhases = 2,
  Anneal = 3,
  OrbitAverage = 4,
};

[[nodiscard]] inline Philox4x64 make_rng(std::uint64_t seed, Stream stream, std::uint64_t sub = 0) noexcept {
  return Philox4x64(seed, (static_cast<std::uint64_t>(stream) << 48) ^ sub);
}

}  // namespace fluxlab
