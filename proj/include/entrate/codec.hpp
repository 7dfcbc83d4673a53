#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "entrate/alphabet.hpp"
#include "entrate/empirical.hpp"

namespace entrate {

struct CodebookEntry {
  u128 block = 0;
  unsigned length = 0;  // clamped to >= 1, < k log2 |X| strictly
};

// Flagged Shannon-Fano code over observed k-blocks. Entries are kept in
// canonical order (length, then block), and codewords are reconstructed
// from lengths alone.
struct Codebook {
  unsigned k = 1;
  Alphabet alphabet;
  std::vector<CodebookEntry> entries;

  double threshold_bits() const;            // k log2 |X|, real-valued
  double kraft_sum() const;                 // sum 2^-len, must be <= 1
  std::vector<u128> canonical_codewords() const;  // aligned with entries
};

// A block is coded iff its clamped length max(1, ceil(-log2 p)) is strictly
// below k log2 |X| (exact integer test 2^len < |X|^k).
Codebook build_codebook(const EmpiricalBlockDistribution& d, Alphabet alphabet);

struct EncodedStream {
  unsigned k = 1;
  std::uint64_t n = 0;  // out-of-band: carried by the container, not the payload
  Alphabet alphabet;
  std::vector<std::uint8_t> payload;
  std::uint64_t measured_bits = 0;
};

// Payload layout: elias-gamma(k) | coded-count | codebook entries
// (block, length) | per block: flag 0 + codeword or flag 1 + raw block |
// raw tail symbols.
EncodedStream encode(const Sample& x, unsigned k);

Sample decode(const EncodedStream& s);

struct CodeLengthBound {
  unsigned k = 1;
  std::uint64_t n = 0;
  double plug_in_bits = 0;   // H(k, x)
  std::uint64_t distinct = 0;  // D(k, x)
  double bound_bits = 0;     // K(k, x)
};

// K(k, x) = 2 log2 k + (n/k)(H(k,x) + 2) + 3 k log2|X| (D(k,x) + 1),
// evaluated with real-valued n/k as written.
CodeLengthBound code_length_bound(const Sample& x, unsigned k);
double code_length_bound_bits(unsigned k, std::uint64_t n, double plug_in_bits,
                              std::uint64_t distinct, Alphabet alphabet);

struct MinCodeLength {
  unsigned k = 1;
  double bits = 0;
};

// K(x) = min_k K(k, x) over k in {1 .. max(1, floor(log2 n) * k_factor)}.
MinCodeLength min_code_length(const Sample& x, unsigned k_factor = 2);

// Container file: "KBC1", n as u64 LE, alphabet size as u16 LE, payload
// bits padded to a byte boundary with zero bits.
void write_container(std::ostream& out, const EncodedStream& s);
void write_container_file(const std::string& path, const EncodedStream& s);
EncodedStream read_container(std::istream& in);
EncodedStream read_container_file(const std::string& path);

}  // namespace entrate
