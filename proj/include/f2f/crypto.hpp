#pragma once

#include <cstdint>
#include <memory>
#include <span>

#include "f2f/word.hpp"

namespace f2f {

/// BLAKE2b with a 16-byte digest over the little-endian bytes of `x`, read
/// back little-endian and truncated to `bits`.
Word128 hash_word(Word128 x, int bits);

/// Same digest over the concatenation of several words.
Word128 hash_words(std::span<const Word128> xs, int bits);

/// Counter-mode generator: BLAKE2b("f2f.prng" || seed || counter).
Word128 prng(Word128 seed, std::uint64_t counter, int bits);

/// Length-preserving cipher over b-bit values.
class BlockCipher {
 public:
  virtual ~BlockCipher() = default;
  virtual Word128 encrypt(Word128 key, Word128 plain) const = 0;
  virtual Word128 decrypt(Word128 key, Word128 cipher) const = 0;
};

/// Four-round Feistel network on b/2-bit halves with keyed BLAKE2b as the
/// round function. `bits` must be even.
class FeistelCipher final : public BlockCipher {
 public:
  explicit FeistelCipher(int bits);
  Word128 encrypt(Word128 key, Word128 plain) const override;
  Word128 decrypt(Word128 key, Word128 cipher) const override;

 private:
  std::uint64_t round_fn(Word128 key, int round, std::uint64_t half) const;
  int half_bits_;
  std::uint64_t half_mask_;
};

std::unique_ptr<BlockCipher> make_default_cipher(int bits);

}  // namespace f2f
