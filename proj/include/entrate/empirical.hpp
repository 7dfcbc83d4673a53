#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "entrate/alphabet.hpp"
#include "entrate/parallel.hpp"
#include "entrate/process_model.hpp"

namespace entrate {

// Non-overlapping k-block frequency table: blocks at positions
// (i-1)k+1 .. ik for i = 1..floor(n/k); the tail is ignored.
// Counts are kept sorted by packed block value so every downstream
// computation is order-deterministic.
struct EmpiricalBlockDistribution {
  unsigned k = 1;
  Alphabet alphabet;
  std::uint64_t block_count = 0;  // floor(n/k)
  std::vector<std::pair<u128, std::uint64_t>> counts;  // sorted by block

  std::uint64_t distinct() const { return counts.size(); }
  std::uint64_t count_of(u128 block) const;
  double probability(u128 block) const;
};

EmpiricalBlockDistribution empirical_distribution(const Sample& x, unsigned k,
                                                  Exec exec = Exec::Serial);

// Plug-in estimate H(k, x) in bits. Asserts the cardinality bound
// H <= log2 floor(n/k) and H <= k log2 |X| on every call.
double plug_in_entropy(const EmpiricalBlockDistribution& d);

// D(k, x): distinct non-overlapping k-blocks.
std::uint64_t distinct_blocks(const Sample& x, unsigned k);

struct DiscreteDistribution {
  std::map<u128, double> probabilities;
};

// L1 distance, in [0, 2]; outcomes missing on one side count as 0.
double variational_distance(const DiscreteDistribution& p, const DiscreteDistribution& q);

DiscreteDistribution to_distribution(const EmpiricalBlockDistribution& d);

// CSV export (block-as-string, count); symbols dash-separated, e.g. "0-1-1".
void write_distribution_csv(std::ostream& out, const EmpiricalBlockDistribution& d);

}  // namespace entrate
