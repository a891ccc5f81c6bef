#include "f2f/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <vector>

#include "f2f/error.hpp"

namespace f2f {

namespace {

struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) throw Error(ErrorCode::kState, "libsodium failed to initialize");
  }
};

void ensure_sodium() { static SodiumInit init; }

Word128 digest(const std::uint8_t* data, std::size_t len, const std::uint8_t* key, std::size_t key_len) {
  ensure_sodium();
  std::uint8_t out[16];
  crypto_generichash(out, sizeof out, data, len, key, key_len);
  return Word128::from_le_bytes(out);
}

}  // namespace

Word128 hash_word(Word128 x, int bits) {
  auto bytes = x.to_le_bytes();
  return digest(bytes.data(), bytes.size(), nullptr, 0).masked(bits);
}

Word128 hash_words(std::span<const Word128> xs, int bits) {
  std::vector<std::uint8_t> buf;
  buf.reserve(xs.size() * 16);
  for (const auto& w : xs) {
    auto b = w.to_le_bytes();
    buf.insert(buf.end(), b.begin(), b.end());
  }
  return digest(buf.data(), buf.size(), nullptr, 0).masked(bits);
}

Word128 prng(Word128 seed, std::uint64_t counter, int bits) {
  std::uint8_t buf[8 + 16 + 8];
  std::memcpy(buf, "f2f.prng", 8);
  auto s = seed.to_le_bytes();
  std::memcpy(buf + 8, s.data(), 16);
  for (int i = 0; i < 8; ++i) buf[24 + i] = static_cast<std::uint8_t>(counter >> (8 * i));
  return digest(buf, sizeof buf, nullptr, 0).masked(bits);
}

FeistelCipher::FeistelCipher(int bits) {
  if (bits < 2 || bits > 128 || bits % 2 != 0)
    throw Error(ErrorCode::kValidation, "Feistel cipher needs an even width in [2,128]");
  half_bits_ = bits / 2;
  half_mask_ = half_bits_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << half_bits_) - 1);
}

std::uint64_t FeistelCipher::round_fn(Word128 key, int round, std::uint64_t half) const {
  std::uint8_t msg[9];
  msg[0] = static_cast<std::uint8_t>(round);
  for (int i = 0; i < 8; ++i) msg[1 + i] = static_cast<std::uint8_t>(half >> (8 * i));
  auto k = key.to_le_bytes();
  return digest(msg, sizeof msg, k.data(), k.size()).lo & half_mask_;
}

namespace {

std::uint64_t high_half(Word128 w, int h) {
  if (h == 64) return w.hi;
  return (w.lo >> h) & ((std::uint64_t{1} << h) - 1);
}

Word128 join_halves(std::uint64_t left, std::uint64_t right, int h) {
  if (h == 64) return Word128{left, right};
  return Word128{0, (left << h) | right};
}

}  // namespace

Word128 FeistelCipher::encrypt(Word128 key, Word128 plain) const {
  std::uint64_t l = high_half(plain, half_bits_);
  std::uint64_t r = plain.lo & half_mask_;
  for (int round = 0; round < 4; ++round) {
    std::uint64_t next = l ^ round_fn(key, round, r);
    l = r;
    r = next;
  }
  return join_halves(l, r, half_bits_);
}

Word128 FeistelCipher::decrypt(Word128 key, Word128 cipher) const {
  std::uint64_t l = high_half(cipher, half_bits_);
  std::uint64_t r = cipher.lo & half_mask_;
  for (int round = 3; round >= 0; --round) {
    std::uint64_t prev = r ^ round_fn(key, round, l);
    r = l;
    l = prev;
  }
  return join_halves(l, r, half_bits_);
}

std::unique_ptr<BlockCipher> make_default_cipher(int bits) { return std::make_unique<FeistelCipher>(bits); }

}  // namespace f2f
