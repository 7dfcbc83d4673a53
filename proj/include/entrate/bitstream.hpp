#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "entrate/alphabet.hpp"

namespace entrate {

// MSB-first within each byte. put_bits writes the `width` low bits of
// `value`, most significant of those first.
class BitWriter {
 public:
  void put_bit(unsigned b) {
    const unsigned off = bit_len_ & 7u;
    if (off == 0) bytes_.push_back(0);
    if (b) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> off);
    ++bit_len_;
  }

  void put_bits(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) put_bit(static_cast<unsigned>((value >> i) & 1u));
  }

  void put_bits_wide(u128 value, unsigned width) {
    for (unsigned i = width; i-- > 0;) put_bit(static_cast<unsigned>((value >> i) & 1u));
  }

  // Elias gamma: floor(log2 v) zeros, then v in binary. 2*floor(log2 v)+1 bits.
  void put_elias_gamma(std::uint64_t v) {
    if (v == 0) throw std::invalid_argument("elias gamma needs v >= 1");
    const unsigned w = std::bit_width(v);
    for (unsigned i = 0; i + 1 < w; ++i) put_bit(0);
    put_bits(v, w);
  }

  std::uint64_t bit_size() const { return bit_len_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }  // zero-padded tail

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bit_len_ = 0;
};

struct BitsExhausted : std::out_of_range {
  BitsExhausted() : std::out_of_range("bit stream exhausted") {}
};

class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_count)
      : bytes_(bytes), bit_count_(bit_count) {}

  unsigned get_bit() {
    if (pos_ >= bit_count_) throw BitsExhausted{};
    const unsigned b = (bytes_[pos_ >> 3] >> (7u - (pos_ & 7u))) & 1u;
    ++pos_;
    return b;
  }

  std::uint64_t get_bits(unsigned width) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | get_bit();
    return v;
  }

  u128 get_bits_wide(unsigned width) {
    u128 v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | get_bit();
    return v;
  }

  std::uint64_t get_elias_gamma() {
    unsigned zeros = 0;
    while (get_bit() == 0) {
      if (++zeros > 63) throw std::out_of_range("elias gamma run too long");
    }
    std::uint64_t v = 1;
    for (unsigned i = 0; i < zeros; ++i) v = (v << 1) | get_bit();
    return v;
  }

  std::uint64_t consumed() const { return pos_; }
  std::uint64_t remaining() const { return bit_count_ - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t bit_count_;
  std::uint64_t pos_ = 0;
};

}  // namespace entrate
