#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entrate/errors.hpp"

namespace entrate {

using Symbol = std::uint8_t;
using u128 = unsigned __int128;

// Widest packed block we handle: enough for |X|=256 up to k=15 and
// binary alphabets up to k=120.
inline constexpr unsigned kMaxPackedBits = 120;

struct Alphabet {
  std::uint32_t size = 2;  // symbols are 0 .. size-1

  bool operator==(const Alphabet&) const = default;

  // ceil(log2 size), bits per raw symbol
  unsigned symbol_bits() const { return size <= 1 ? 0u : std::bit_width(size - 1u); }

  void validate() const {
    if (size < 2 || size > 256)
      throw ConfigError("alphabet size must be in [2, 256], got " + std::to_string(size));
  }
};

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s += static_cast<char>('0' + static_cast<int>(v % 10));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline unsigned bit_width_u128(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 64u + std::bit_width(hi);
  return std::bit_width(static_cast<std::uint64_t>(v));
}

// |X|^k as an exact integer; refuses blocks wider than kMaxPackedBits.
inline u128 block_space_size(Alphabet a, unsigned k) {
  u128 v = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (bit_width_u128(v) + a.symbol_bits() > kMaxPackedBits + 1)
      throw ArgumentError("block space |X|^k exceeds " + std::to_string(kMaxPackedBits) +
                          " bits (alphabet " + std::to_string(a.size) + ", k " + std::to_string(k) + ")");
    v *= a.size;
  }
  if (bit_width_u128(v - 1) > kMaxPackedBits)
    throw ArgumentError("block space |X|^k exceeds " + std::to_string(kMaxPackedBits) + " bits");
  return v;
}

// ceil(k * log2 |X|) computed exactly: bit width of |X|^k - 1.
inline unsigned raw_block_bits(Alphabet a, unsigned k) {
  const u128 space = block_space_size(a, k);
  return bit_width_u128(space - 1);
}

// Mixed-radix packing, most significant symbol first. Packing is
// order-preserving: packed order == lexicographic block order.
inline u128 pack_block(std::span<const Symbol> block, Alphabet a) {
  u128 v = 0;
  for (Symbol s : block) v = v * a.size + s;
  return v;
}

inline void unpack_block(u128 value, Alphabet a, unsigned k, Symbol* out) {
  for (unsigned i = k; i-- > 0;) {
    out[i] = static_cast<Symbol>(value % a.size);
    value /= a.size;
  }
}

inline std::vector<Symbol> unpack_block(u128 value, Alphabet a, unsigned k) {
  std::vector<Symbol> out(k);
  unpack_block(value, a, k, out.data());
  return out;
}

}  // namespace entrate
