#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>

namespace f2f {

/// Unsigned 128-bit value used for coordinate elements, digests, seeds and keys.
/// Values narrower than 128 bits are kept masked to their low `bits` bits.
struct Word128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  static constexpr Word128 from_u64(std::uint64_t v) { return Word128{0, v}; }

  friend constexpr Word128 operator^(Word128 a, Word128 b) { return {a.hi ^ b.hi, a.lo ^ b.lo}; }
  friend constexpr bool operator==(Word128, Word128) = default;
  friend constexpr auto operator<=>(Word128, Word128) = default;

  constexpr Word128 masked(int bits) const {
    if (bits >= 128) return *this;
    if (bits <= 0) return {};
    if (bits >= 64) {
      const int high_bits = bits - 64;
      const std::uint64_t m = high_bits == 0 ? 0 : (~std::uint64_t{0} >> (64 - high_bits));
      return {hi & m, lo};
    }
    return {0, lo & (~std::uint64_t{0} >> (64 - bits))};
  }

  constexpr bool bit(int i) const { return i < 64 ? ((lo >> i) & 1U) : ((hi >> (i - 64)) & 1U); }
  constexpr Word128 flipped(int i) const {
    Word128 w = *this;
    if (i < 64) w.lo ^= (std::uint64_t{1} << i);
    else w.hi ^= (std::uint64_t{1} << (i - 64));
    return w;
  }

  std::array<std::uint8_t, 16> to_le_bytes() const;
  static Word128 from_le_bytes(std::span<const std::uint8_t> bytes);

  std::string hex() const;
  static Word128 from_hex(const std::string& text);

  /// Uniform draw of a `bits`-bit value.
  static Word128 random(std::mt19937_64& rng, int bits) {
    Word128 w{rng(), rng()};
    return w.masked(bits);
  }
};

struct Word128Hash {
  std::size_t operator()(const Word128& w) const noexcept {
    return std::hash<std::uint64_t>{}(w.lo ^ (w.hi * 0x9E3779B97F4A7C15ULL));
  }
};

/// SplitMix64 finalizer; derives independent stream seeds from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace f2f
