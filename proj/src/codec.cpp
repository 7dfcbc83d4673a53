#include "entrate/codec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "entrate/bitstream.hpp"

namespace entrate {

namespace {

// Width of the per-entry codeword length field: ceil(log2(k * ceil(log2 |X|))).
// Stored lengths satisfy 1 <= l < k log2|X| <= k ceil(log2|X|), so they fit.
unsigned len_field_width(Alphabet a, unsigned k) {
  const unsigned m = k * a.symbol_bits();
  return m <= 1 ? 0u : std::bit_width(m - 1u);
}

// smallest l >= 0 with cnt * 2^l >= total, i.e. ceil(log2(total/cnt)), exact
unsigned ceil_log2_ratio(std::uint64_t total, std::uint64_t cnt) {
  unsigned l = 0;
  u128 c = cnt;
  while (c < total) {
    c <<= 1;
    ++l;
  }
  return l;
}

// Exact Kraft check: sum over entries of 2^(127 - l) <= 2^127, saturating.
bool kraft_holds(const std::vector<CodebookEntry>& entries) {
  const u128 limit = static_cast<u128>(1) << 127;
  u128 acc = 0;
  for (const auto& e : entries) {
    if (e.length == 0 || e.length > 127) return false;
    const u128 term = static_cast<u128>(1) << (127 - e.length);
    if (limit - acc < term) return false;
    acc += term;
  }
  return true;
}

struct DecodeGroup {
  unsigned length;
  u128 first_code;
  std::size_t first_index;
  std::size_t count;
};

std::vector<DecodeGroup> decode_groups(const std::vector<CodebookEntry>& entries,
                                       const std::vector<u128>& codes) {
  std::vector<DecodeGroup> groups;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (groups.empty() || groups.back().length != entries[i].length)
      groups.push_back({entries[i].length, codes[i], i, 1});
    else
      ++groups.back().count;
  }
  return groups;
}

}  // namespace

double Codebook::threshold_bits() const {
  return static_cast<double>(k) * std::log2(static_cast<double>(alphabet.size));
}

double Codebook::kraft_sum() const {
  double s = 0;
  for (const auto& e : entries) s += std::ldexp(1.0, -static_cast<int>(e.length));
  return s;
}

std::vector<u128> Codebook::canonical_codewords() const {
  std::vector<u128> codes(entries.size());
  u128 code = 0;
  unsigned prev = entries.empty() ? 0 : entries.front().length;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const unsigned l = entries[i].length;
    if (i > 0) code = (code + 1) << (l - prev);
    if (bit_width_u128(code) > l)
      throw std::logic_error("canonical code overflow: Kraft inequality violated");
    codes[i] = code;
    prev = l;
  }
  return codes;
}

Codebook build_codebook(const EmpiricalBlockDistribution& d, Alphabet alphabet) {
  if (d.block_count < 1) throw ArgumentError("codebook needs at least one block");
  const u128 space = block_space_size(alphabet, d.k);

  Codebook cb;
  cb.k = d.k;
  cb.alphabet = alphabet;
  for (const auto& [block, cnt] : d.counts) {
    // Shannon-Fano length, clamped to >= 1 so the codeword stays decodable.
    const unsigned l = std::max(1u, ceil_log2_ratio(d.block_count, cnt));
    // coded iff l < k log2|X|, exactly: 2^l < |X|^k
    if ((static_cast<u128>(1) << l) < space) cb.entries.push_back({block, l});
  }
  std::sort(cb.entries.begin(), cb.entries.end(), [](const auto& a, const auto& b) {
    return a.length != b.length ? a.length < b.length : a.block < b.block;
  });
  if (!kraft_holds(cb.entries))
    throw std::logic_error("codebook violates the Kraft inequality");
  return cb;
}

EncodedStream encode(const Sample& x, unsigned k) {
  const std::uint64_t n = x.symbols.size();
  if (k < 1 || k > n)
    throw ArgumentError("block length k = " + std::to_string(k) +
                        " out of range for sample length " + std::to_string(n));

  const auto d = empirical_distribution(x, k);
  const auto cb = build_codebook(d, x.alphabet);
  const auto codes = cb.canonical_codewords();
  const unsigned raw_bits = raw_block_bits(x.alphabet, k);
  const unsigned lfw = len_field_width(x.alphabet, k);
  const unsigned sym_bits = x.alphabet.symbol_bits();

  // block -> codebook entry index, keyed for the body pass
  std::vector<std::pair<u128, std::size_t>> index;
  index.reserve(cb.entries.size());
  for (std::size_t i = 0; i < cb.entries.size(); ++i) index.emplace_back(cb.entries[i].block, i);
  std::sort(index.begin(), index.end());

  BitWriter w;
  w.put_elias_gamma(k);
  w.put_bits_wide(static_cast<u128>(cb.entries.size()), raw_bits);
  for (const auto& e : cb.entries) {
    w.put_bits_wide(e.block, raw_bits);
    w.put_bits(e.length, lfw);
  }

  const std::uint64_t blocks = n / k;
  const std::uint32_t base = x.alphabet.size;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    u128 v = 0;
    const Symbol* p = x.symbols.data() + b * k;
    for (unsigned i = 0; i < k; ++i) v = v * base + p[i];
    const auto it = std::lower_bound(index.begin(), index.end(), std::make_pair(v, std::size_t{0}));
    if (it != index.end() && it->first == v) {
      w.put_bit(0);
      w.put_bits_wide(codes[it->second], cb.entries[it->second].length);
    } else {
      w.put_bit(1);
      w.put_bits_wide(v, raw_bits);
    }
  }
  for (std::uint64_t i = blocks * k; i < n; ++i) w.put_bits(x.symbols[i], sym_bits);

  EncodedStream s;
  s.k = k;
  s.n = n;
  s.alphabet = x.alphabet;
  s.payload = w.bytes();
  s.measured_bits = w.bit_size();
  return s;
}

Sample decode(const EncodedStream& s) {
  s.alphabet.validate();
  if (s.n < 1) throw DecodeError(StreamSection::Header, "container reports n = 0");
  BitReader r(s.payload, s.measured_bits);

  unsigned k = 0;
  try {
    const std::uint64_t kk = r.get_elias_gamma();
    if (kk < 1 || kk > s.n) throw DecodeError(StreamSection::Header, "decoded k out of range");
    k = static_cast<unsigned>(kk);
  } catch (const std::out_of_range&) {
    throw DecodeError(StreamSection::Header, "truncated k header");
  }
  if (s.k != 0 && s.k != k)
    throw DecodeError(StreamSection::Header, "k header disagrees with the container");

  u128 space = 0;
  unsigned raw_bits = 0;
  try {
    space = block_space_size(s.alphabet, k);
    raw_bits = raw_block_bits(s.alphabet, k);
  } catch (const ArgumentError& e) {
    throw DecodeError(StreamSection::Header, e.what());
  }
  const unsigned lfw = len_field_width(s.alphabet, k);
  const std::uint64_t blocks = s.n / k;

  std::vector<CodebookEntry> entries;
  try {
    const u128 count = r.get_bits_wide(raw_bits);
    if (count > space || count > blocks)
      throw DecodeError(StreamSection::Codebook, "coded-block count out of range");
    entries.reserve(static_cast<std::size_t>(count));
    for (u128 i = 0; i < count; ++i) {
      CodebookEntry e;
      e.block = r.get_bits_wide(raw_bits);
      e.length = static_cast<unsigned>(r.get_bits(lfw));
      if (e.block >= space) throw DecodeError(StreamSection::Codebook, "block value out of range");
      if (e.length < 1 || (static_cast<u128>(1) << e.length) >= space)
        throw DecodeError(StreamSection::Codebook, "codeword length outside the coded range");
      if (!entries.empty()) {
        const auto& prev = entries.back();
        if (e.length < prev.length || (e.length == prev.length && e.block <= prev.block))
          throw DecodeError(StreamSection::Codebook, "entries not in canonical order");
      }
      entries.push_back(e);
    }
  } catch (const std::out_of_range&) {
    throw DecodeError(StreamSection::Codebook, "truncated codebook");
  }
  if (!kraft_holds(entries))
    throw DecodeError(StreamSection::Codebook, "lengths violate the Kraft inequality");

  Codebook cb;
  cb.k = k;
  cb.alphabet = s.alphabet;
  cb.entries = entries;
  std::vector<u128> codes;
  try {
    codes = cb.canonical_codewords();
  } catch (const std::logic_error& e) {
    throw DecodeError(StreamSection::Codebook, e.what());
  }
  const auto groups = decode_groups(entries, codes);
  const unsigned max_len = entries.empty() ? 0 : entries.back().length;

  Sample out;
  out.alphabet = s.alphabet;
  out.symbols.resize(s.n);

  try {
    for (std::uint64_t b = 0; b < blocks; ++b) {
      u128 block;
      if (r.get_bit() == 0) {
        if (entries.empty())
          throw DecodeError(StreamSection::Body, "coded flag with an empty codebook");
        u128 code = 0;
        unsigned len = 0;
        const DecodeGroup* hit = nullptr;
        std::size_t offset = 0;
        while (!hit) {
          code = (code << 1) | r.get_bit();
          if (++len > max_len) throw DecodeError(StreamSection::Body, "invalid codeword");
          for (const auto& g : groups) {
            if (g.length != len) continue;
            if (code >= g.first_code && code - g.first_code < g.count) {
              hit = &g;
              offset = static_cast<std::size_t>(code - g.first_code);
            }
            break;
          }
        }
        block = entries[hit->first_index + offset].block;
      } else {
        block = r.get_bits_wide(raw_bits);
        if (block >= space) throw DecodeError(StreamSection::Body, "raw block out of range");
      }
      unpack_block(block, s.alphabet, k, out.symbols.data() + b * k);
    }
  } catch (const std::out_of_range&) {
    throw DecodeError(StreamSection::Body, "truncated body");
  }

  try {
    const unsigned sym_bits = s.alphabet.symbol_bits();
    for (std::uint64_t i = blocks * k; i < s.n; ++i) {
      const std::uint64_t v = r.get_bits(sym_bits);
      if (v >= s.alphabet.size) throw DecodeError(StreamSection::Tail, "tail symbol out of range");
      out.symbols[i] = static_cast<Symbol>(v);
    }
  } catch (const std::out_of_range&) {
    throw DecodeError(StreamSection::Tail, "truncated tail");
  }

  // Only byte padding may remain, and it must be zero bits.
  if (r.remaining() >= 8) throw DecodeError(StreamSection::Tail, "trailing data after tail");
  while (r.remaining() > 0)
    if (r.get_bit() != 0) throw DecodeError(StreamSection::Tail, "nonzero padding");

  return out;
}

double code_length_bound_bits(unsigned k, std::uint64_t n, double plug_in_bits,
                              std::uint64_t distinct, Alphabet alphabet) {
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  const double log_a = std::log2(static_cast<double>(alphabet.size));
  return 2.0 * std::log2(kk) + (nn / kk) * (plug_in_bits + 2.0) +
         3.0 * kk * log_a * (static_cast<double>(distinct) + 1.0);
}

CodeLengthBound code_length_bound(const Sample& x, unsigned k) {
  const auto d = empirical_distribution(x, k);
  CodeLengthBound b;
  b.k = k;
  b.n = x.symbols.size();
  b.plug_in_bits = plug_in_entropy(d);
  b.distinct = d.distinct();
  b.bound_bits = code_length_bound_bits(k, b.n, b.plug_in_bits, b.distinct, x.alphabet);
  return b;
}

MinCodeLength min_code_length(const Sample& x, unsigned k_factor) {
  const std::uint64_t n = x.symbols.size();
  if (n < 1) throw ArgumentError("min_code_length needs n >= 1");
  const unsigned k_cap = static_cast<unsigned>(
      std::min<std::uint64_t>(n, std::max<std::uint64_t>(1, std::bit_width(n) - 1) * k_factor));

  MinCodeLength best;
  best.k = 0;
  best.bits = 0;
  for (unsigned k = 1; k <= k_cap; ++k) {
    double bits;
    try {
      bits = code_length_bound(x, k).bound_bits;
    } catch (const ArgumentError&) {
      break;  // block wider than the packing limit; larger k only get wider
    }
    if (best.k == 0 || bits < best.bits) {
      best.k = k;
      best.bits = bits;
    }
  }
  return best;
}

// --- container --------------------------------------------------------------

namespace {
constexpr char kMagic[4] = {'K', 'B', 'C', '1'};
}

void write_container(std::ostream& out, const EncodedStream& s) {
  out.write(kMagic, 4);
  std::uint8_t hdr[10];
  for (int i = 0; i < 8; ++i) hdr[i] = static_cast<std::uint8_t>((s.n >> (8 * i)) & 0xff);
  hdr[8] = static_cast<std::uint8_t>(s.alphabet.size & 0xff);
  hdr[9] = static_cast<std::uint8_t>((s.alphabet.size >> 8) & 0xff);
  out.write(reinterpret_cast<const char*>(hdr), 10);
  out.write(reinterpret_cast<const char*>(s.payload.data()),
            static_cast<std::streamsize>(s.payload.size()));
}

void write_container_file(const std::string& path, const EncodedStream& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  write_container(out, s);
}

EncodedStream read_container(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic))
    throw DecodeError(StreamSection::Header, "bad magic, not a KBC1 container");
  std::uint8_t hdr[10];
  if (!in.read(reinterpret_cast<char*>(hdr), 10))
    throw DecodeError(StreamSection::Header, "truncated container header");
  EncodedStream s;
  s.n = 0;
  for (int i = 7; i >= 0; --i) s.n = (s.n << 8) | hdr[i];
  s.alphabet.size = static_cast<std::uint32_t>(hdr[8]) | (static_cast<std::uint32_t>(hdr[9]) << 8);
  s.k = 0;  // carried in the payload, read during decode

  std::vector<std::uint8_t> payload;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    payload.insert(payload.end(), buf, buf + in.gcount());
  s.payload = std::move(payload);
  s.measured_bits = static_cast<std::uint64_t>(s.payload.size()) * 8;
  return s;
}

EncodedStream read_container_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open container file: " + path);
  return read_container(in);
}

}  // namespace entrate
