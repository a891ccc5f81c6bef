#include "f2f/word.hpp"

#include "f2f/error.hpp"

namespace f2f {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kGeneration: return "generation error";
    case ErrorCode::kConstruction: return "construction error";
    case ErrorCode::kJoin: return "join error";
    case ErrorCode::kRootDeparture: return "root departure";
    case ErrorCode::kState: return "state error";
    case ErrorCode::kUnsupported: return "unsupported operation";
    case ErrorCode::kValidation: return "validation error";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

std::array<std::uint8_t, 16> Word128::to_le_bytes() const {
  std::array<std::uint8_t, 16> out{};
  for (int i = 0; i < 8; ++i) {
    out[i] = static_cast<std::uint8_t>(lo >> (8 * i));
    out[8 + i] = static_cast<std::uint8_t>(hi >> (8 * i));
  }
  return out;
}

Word128 Word128::from_le_bytes(std::span<const std::uint8_t> bytes) {
  Word128 w;
  for (std::size_t i = 0; i < bytes.size() && i < 16; ++i) {
    if (i < 8) w.lo |= std::uint64_t{bytes[i]} << (8 * i);
    else w.hi |= std::uint64_t{bytes[i]} << (8 * (i - 8));
  }
  return w;
}

std::string Word128::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(32, '0');
  for (int i = 0; i < 16; ++i) {
    out[15 - i] = kDigits[(hi >> (4 * i)) & 0xF];
    out[31 - i] = kDigits[(lo >> (4 * i)) & 0xF];
  }
  return out;
}

Word128 Word128::from_hex(const std::string& text) {
  if (text.empty() || text.size() > 32) throw Error(ErrorCode::kParse, "bad 128-bit hex literal: '" + text + "'");
  Word128 w;
  for (char c : text) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw Error(ErrorCode::kParse, "bad 128-bit hex literal: '" + text + "'");
    w.hi = (w.hi << 4) | (w.lo >> 60);
    w.lo = (w.lo << 4) | static_cast<std::uint64_t>(v);
  }
  return w;
}

}  // namespace f2f
