#include "entrate/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

namespace entrate {

namespace {

struct BlockHash {
  std::size_t operator()(u128 v) const {
    const std::uint64_t lo = static_cast<std::uint64_t>(v);
    const std::uint64_t hi = static_cast<std::uint64_t>(v >> 64);
    std::uint64_t z = lo ^ (hi * 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

using CountMap = std::unordered_map<u128, std::uint64_t, BlockHash>;

void count_range(const Sample& x, unsigned k, std::uint64_t first_block,
                 std::uint64_t last_block, CountMap& out) {
  const std::uint32_t base = x.alphabet.size;
  for (std::uint64_t b = first_block; b < last_block; ++b) {
    u128 v = 0;
    const Symbol* p = x.symbols.data() + b * k;
    for (unsigned i = 0; i < k; ++i) v = v * base + p[i];
    ++out[v];
  }
}

}  // namespace

std::uint64_t EmpiricalBlockDistribution::count_of(u128 block) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), block,
                             [](const auto& e, u128 b) { return e.first < b; });
  return (it != counts.end() && it->first == block) ? it->second : 0;
}

double EmpiricalBlockDistribution::probability(u128 block) const {
  return block_count == 0 ? 0.0
                          : static_cast<double>(count_of(block)) / static_cast<double>(block_count);
}

EmpiricalBlockDistribution empirical_distribution(const Sample& x, unsigned k, Exec exec) {
  const std::size_t n = x.symbols.size();
  if (k < 1 || k > n)
    throw ArgumentError("block length k = " + std::to_string(k) +
                        " out of range for sample length " + std::to_string(n));
  block_space_size(x.alphabet, k);  // enforce the packing width limit

  EmpiricalBlockDistribution d;
  d.k = k;
  d.alphabet = x.alphabet;
  d.block_count = n / k;

  CountMap merged;
  const int threads = exec == Exec::Parallel ? max_threads() : 1;
  if (threads > 1 && d.block_count >= 4096) {
    const std::uint64_t chunks = std::min<std::uint64_t>(threads, d.block_count);
    std::vector<CountMap> partial(chunks);
    for_each_index(chunks, Exec::Parallel, [&](std::size_t c) {
      const std::uint64_t lo = d.block_count * c / chunks;
      const std::uint64_t hi = d.block_count * (c + 1) / chunks;
      count_range(x, k, lo, hi, partial[c]);
    });
    for (auto& part : partial)
      for (const auto& [block, cnt] : part) merged[block] += cnt;
  } else {
    count_range(x, k, 0, d.block_count, merged);
  }

  d.counts.assign(merged.begin(), merged.end());
  std::sort(d.counts.begin(), d.counts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return d;
}

double plug_in_entropy(const EmpiricalBlockDistribution& d) {
  if (d.block_count < 1) throw ArgumentError("plug-in entropy needs at least one block");
  // H = log2 B - (1/B) sum c log2 c, summed in sorted block order.
  const double b = static_cast<double>(d.block_count);
  double acc = 0;
  for (const auto& [block, cnt] : d.counts) acc += static_cast<double>(cnt) * std::log2(static_cast<double>(cnt));
  double h = std::log2(b) - acc / b;
  if (h < 0 && h > -1e-12) h = 0;  // rounding guard at point masses

  // Cardinality bound (always-on assertion): a failure here is a bug, not data.
  const double cap = std::log2(b);
  const double cap_alpha = static_cast<double>(d.k) * std::log2(static_cast<double>(d.alphabet.size));
  if (!(h >= 0) || h > cap + 1e-9 || h > cap_alpha + 1e-9)
    throw std::logic_error("plug-in entropy violates the cardinality bound");
  return h;
}

std::uint64_t distinct_blocks(const Sample& x, unsigned k) {
  return empirical_distribution(x, k).distinct();
}

double variational_distance(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  double d = 0;
  auto pi = p.probabilities.begin();
  auto qi = q.probabilities.begin();
  while (pi != p.probabilities.end() || qi != q.probabilities.end()) {
    if (qi == q.probabilities.end() || (pi != p.probabilities.end() && pi->first < qi->first)) {
      d += std::abs(pi->second);
      ++pi;
    } else if (pi == p.probabilities.end() || qi->first < pi->first) {
      d += std::abs(qi->second);
      ++qi;
    } else {
      d += std::abs(pi->second - qi->second);
      ++pi;
      ++qi;
    }
  }
  return d;
}

DiscreteDistribution to_distribution(const EmpiricalBlockDistribution& d) {
  DiscreteDistribution out;
  const double b = static_cast<double>(d.block_count);
  for (const auto& [block, cnt] : d.counts) out.probabilities[block] = static_cast<double>(cnt) / b;
  return out;
}

void write_distribution_csv(std::ostream& out, const EmpiricalBlockDistribution& d) {
  out << "block,count\n";
  std::vector<Symbol> buf(d.k);
  for (const auto& [block, cnt] : d.counts) {
    unpack_block(block, d.alphabet, d.k, buf.data());
    for (unsigned i = 0; i < d.k; ++i) {
      if (i) out << '-';
      out << static_cast<unsigned>(buf[i]);
    }
    out << ',' << cnt << '\n';
  }
}

}  // namespace entrate
