#pragma once

// Packed sign codes in {-1, +1}^m.
//
// Bit layout: sign k lives in byte k / 8 at bit 7 - (k % 8) (MSB first); a set
// bit means +1. Trailing pad bits of the last byte are always zero.
//
// Text format: one code per line, '+' or '-' per sign.
// Binary format (little endian):
//   bytes 0..3   magic "FBC1"
//   bytes 4..11  m      (uint64)
//   bytes 12..19 count  (uint64)
//   then count codes of ceil(m / 8) bytes each.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fastbin/core/types.hpp"

namespace fastbin {

class BitCode {
 public:
  BitCode() = default;
  explicit BitCode(std::size_t length, std::size_t blocks = 1) : length_(length), blocks_(blocks), bytes_((length + 7) / 8, 0) {
    check_blocks();
  }

  /// sgn applied entrywise with sgn(0) = +1.
  static BitCode from_values(std::span<const double> v, std::size_t blocks = 1) {
    BitCode c(v.size(), blocks);
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] >= 0.0) c.bytes_[k >> 3] |= static_cast<std::uint8_t>(0x80U >> (k & 7U));
    }
    return c;
  }

  static BitCode from_signs(std::span<const int> signs, std::size_t blocks = 1) {
    BitCode c(signs.size(), blocks);
    for (std::size_t k = 0; k < signs.size(); ++k) {
      if (signs[k] != 1 && signs[k] != -1) throw DomainError("BitCode::from_signs: entry is not a sign");
      c.set(k, signs[k]);
    }
    return c;
  }

  static BitCode from_bytes(std::vector<std::uint8_t> bytes, std::size_t length, std::size_t blocks = 1) {
    require_same_size(bytes.size(), (length + 7) / 8, "BitCode::from_bytes");
    if (length % 8 != 0 && (bytes.back() & static_cast<std::uint8_t>(0xFFU >> (length % 8))) != 0) {
      throw DomainError("BitCode::from_bytes: nonzero padding bits");
    }
    BitCode c(length, blocks);
    c.bytes_ = std::move(bytes);
    return c;
  }

  std::size_t size() const noexcept { return length_; }
  std::size_t blocks() const noexcept { return blocks_; }
  std::size_t block_length() const noexcept { return blocks_ == 0 ? 0 : length_ / blocks_; }
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  int sign(std::size_t k) const { return (bytes_[k >> 3] & (0x80U >> (k & 7U))) ? 1 : -1; }

  void set(std::size_t k, int s) {
    const auto mask = static_cast<std::uint8_t>(0x80U >> (k & 7U));
    if (s > 0) {
      bytes_[k >> 3] |= mask;
    } else {
      bytes_[k >> 3] &= static_cast<std::uint8_t>(~mask);
    }
  }

  std::vector<int> signs() const {
    std::vector<int> out(length_);
    for (std::size_t k = 0; k < length_; ++k) out[k] = sign(k);
    return out;
  }

  BitCode negated() const {
    BitCode c = *this;
    for (auto& b : c.bytes_) b = static_cast<std::uint8_t>(~b);
    c.clear_padding();
    return c;
  }

  std::string to_text() const {
    std::string s(length_, '-');
    for (std::size_t k = 0; k < length_; ++k) {
      if (sign(k) > 0) s[k] = '+';
    }
    return s;
  }

  static BitCode from_text(const std::string& text, std::size_t blocks = 1) {
    BitCode c(text.size(), blocks);
    for (std::size_t k = 0; k < text.size(); ++k) {
      if (text[k] == '+') {
        c.set(k, 1);
      } else if (text[k] != '-') {
        throw DomainError("BitCode::from_text: unexpected character");
      }
    }
    return c;
  }

  bool operator==(const BitCode& o) const { return length_ == o.length_ && bytes_ == o.bytes_; }

 private:
  void check_blocks() const {
    if (blocks_ == 0 || length_ % blocks_ != 0) {
      throw DomainError("BitCode: length " + std::to_string(length_) + " is not divisible by block count " +
                        std::to_string(blocks_));
    }
  }

  void clear_padding() {
    if (length_ % 8 != 0) bytes_.back() &= static_cast<std::uint8_t>(0xFFU << (8 - length_ % 8));
  }

  std::size_t length_ = 0;
  std::size_t blocks_ = 1;
  std::vector<std::uint8_t> bytes_;
};

/// f(v) = sgn(v) entrywise, with sgn(0) = +1.
inline BitCode sign_map(std::span<const double> v, std::size_t blocks = 1) { return BitCode::from_values(v, blocks); }

/// Number of positions in [begin, end) where a and b differ.
inline std::size_t count_mismatches(const BitCode& a, const BitCode& b, std::size_t begin, std::size_t end) {
  require_same_size(a.size(), b.size(), "count_mismatches");
  const auto x = a.bytes();
  const auto y = b.bytes();
  std::size_t count = 0;
  std::size_t k = begin;
  // Leading partial byte.
  while (k < end && (k & 7U) != 0) {
    count += ((x[k >> 3] ^ y[k >> 3]) >> (7 - (k & 7U))) & 1U;
    ++k;
  }
  // Whole bytes, eight at a time where possible.
  std::size_t byte = k >> 3;
  const std::size_t end_byte = end >> 3;
  while (byte + 8 <= end_byte) {
    std::uint64_t u = 0, v = 0;
    std::memcpy(&u, x.data() + byte, 8);
    std::memcpy(&v, y.data() + byte, 8);
    count += static_cast<std::size_t>(std::popcount(u ^ v));
    byte += 8;
  }
  while (byte < end_byte) {
    count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(x[byte] ^ y[byte])));
    ++byte;
  }
  // Trailing partial byte.
  for (k = std::max(k, end_byte * 8); k < end; ++k) {
    count += ((x[k >> 3] ^ y[k >> 3]) >> (7 - (k & 7U))) & 1U;
  }
  return count;
}

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf{};
  for (int i = 0; i < 8; ++i) buf[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFFU);
  out.write(buf.data(), 8);
}

inline std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), 8);
  if (!in) throw DomainError("bitcode binary: truncated header");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace detail

inline constexpr std::array<char, 4> kBitCodeMagic{'F', 'B', 'C', '1'};

inline void write_codes_text(std::ostream& out, std::span<const BitCode> codes) {
  for (const auto& c : codes) out << c.to_text() << '\n';
}

/// One code per line; blank lines are skipped, all codes must share a length.
inline std::vector<BitCode> read_codes_text(std::istream& in) {
  std::vector<BitCode> codes;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    codes.push_back(BitCode::from_text(line));
    require_same_size(codes.back().size(), codes.front().size(), "read_codes_text");
  }
  return codes;
}

inline void write_codes_binary(std::ostream& out, std::span<const BitCode> codes) {
  const std::uint64_t m = codes.empty() ? 0 : codes.front().size();
  out.write(kBitCodeMagic.data(), 4);
  detail::put_u64(out, m);
  detail::put_u64(out, codes.size());
  for (const auto& c : codes) {
    require_same_size(c.size(), m, "write_codes_binary");
    out.write(reinterpret_cast<const char*>(c.bytes().data()), static_cast<std::streamsize>(c.bytes().size()));
  }
}

inline std::vector<BitCode> read_codes_binary(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != kBitCodeMagic) throw DomainError("bitcode binary: bad magic");
  const std::uint64_t m = detail::get_u64(in);
  const std::uint64_t count = detail::get_u64(in);
  std::vector<BitCode> codes;
  codes.reserve(count);
  const std::size_t nbytes = (m + 7) / 8;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<std::uint8_t> bytes(nbytes);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(nbytes));
    if (!in) throw DomainError("bitcode binary: truncated payload");
    codes.push_back(BitCode::from_bytes(std::move(bytes), m));
  }
  return codes;
}

}  // namespace fastbin
