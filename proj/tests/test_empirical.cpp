#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "entrate/empirical.hpp"
#include "entrate/exact.hpp"
#include "entrate/rng.hpp"
#include "helpers.hpp"

using namespace entrate;
using namespace entrate::testing;

TEST_CASE("non-overlapping block counts, tail dropped") {
  const auto d = empirical_distribution(sample_from_string("aabb"), 2);
  CHECK(d.block_count == 2);
  CHECK(d.distinct() == 2);
  CHECK(d.count_of(pack({0, 0}, d.alphabet)) == 1);
  CHECK(d.count_of(pack({1, 1}, d.alphabet)) == 1);
  CHECK(d.count_of(pack({0, 1}, d.alphabet)) == 0);

  const auto d1 = empirical_distribution(sample_from_string("aabb"), 1);
  CHECK(d1.block_count == 4);
  CHECK(d1.count_of(0) == 2);
  CHECK(d1.count_of(1) == 2);

  // trailing "b" is ignored
  const auto dt = empirical_distribution(sample_from_string("aabbb"), 2);
  CHECK(dt.block_count == 2);
  CHECK(dt.count_of(pack({0, 0}, dt.alphabet)) == 1);
  CHECK(dt.count_of(pack({1, 1}, dt.alphabet)) == 1);
}

TEST_CASE("plug-in entropy on small tables") {
  CHECK(plug_in_entropy(empirical_distribution(sample_from_string("aabb"), 2)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(plug_in_entropy(empirical_distribution(sample_from_string("aaaaaaaa"), 2)) ==
        doctest::Approx(0.0));
  // counts {a:3, b:1}: -(3/4) log2(3/4) - (1/4) log2(1/4)
  CHECK(plug_in_entropy(empirical_distribution(sample_from_string("aaab"), 1)) ==
        doctest::Approx(0.8112781244591328).epsilon(1e-12));
}

TEST_CASE("distinct blocks at non-overlapping positions only") {
  CHECK(distinct_blocks(sample_from_string("aabb"), 2) == 2);
  CHECK(distinct_blocks(sample_from_string("aaaa"), 2) == 1);
  // "ab" at offsets 1 and 3; the overlapping "ba" is never a block
  CHECK(distinct_blocks(sample_from_string("abab"), 2) == 1);
}

TEST_CASE("k out of range is an argument error") {
  CHECK_THROWS_AS(empirical_distribution(sample_from_string("ab"), 3), ArgumentError);
  CHECK_THROWS_AS(empirical_distribution(sample_from_string("ab"), 0), ArgumentError);
  CHECK_NOTHROW(empirical_distribution(sample_from_string("ab"), 2));  // k = n is fine
}

TEST_CASE("variational distance basics") {
  DiscreteDistribution p{{{0, 0.5}, {1, 0.5}}};
  DiscreteDistribution q{{{0, 0.75}, {1, 0.25}}};
  DiscreteDistribution da{{{0, 1.0}}};
  DiscreteDistribution db{{{1, 1.0}}};
  CHECK(variational_distance(p, p) == 0.0);
  CHECK(variational_distance(da, db) == 2.0);
  CHECK(variational_distance(p, q) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(variational_distance(p, q) == variational_distance(q, p));
}

TEST_CASE("distinct equals the number of positive counts, and bounds hold") {
  const auto models = {fair_coin(), markov_flip(0.1), fom_model(), mixture_coin_delta()};
  int trial = 0;
  for (const auto& m : models) {
    for (unsigned k = 1; k <= 8; ++k) {
      const std::size_t n = 17 * k + 3 + trial;
      const Sample x = sample(m, n, mix_seed(1234, trial++));
      const auto d = empirical_distribution(x, k);
      CHECK(distinct_blocks(x, k) == d.counts.size());
      CHECK(d.distinct() >= 1);
      CHECK(d.distinct() <= d.block_count);
      std::uint64_t total = 0;
      for (const auto& [b, c] : d.counts) total += c;
      CHECK(total == d.block_count);
      // cardinality bound, exact
      CHECK(plug_in_entropy(d) <= std::log2(static_cast<double>(d.block_count)) + 1e-9);
    }
  }
}

TEST_CASE("parallel counting matches the serial reference exactly") {
  const Sample x = sample(markov_flip(0.05), 1 << 20, 42);
  for (unsigned k : {1u, 3u, 8u, 13u}) {
    const auto serial = empirical_distribution(x, k, Exec::Serial);
    const auto parallel = empirical_distribution(x, k, Exec::Parallel);
    CHECK(serial.counts == parallel.counts);
    CHECK(serial.block_count == parallel.block_count);
  }
}

TEST_CASE("plug-in estimator is biased downward in expectation") {
  // quick version of the bias inequality; the acceptance suite runs the
  // full 10^4-trial variant
  const auto m = fair_coin();
  const int trials = 2000;
  double mean = 0;
  for (int t = 0; t < trials; ++t)
    mean += plug_in_entropy(empirical_distribution(sample(m, 40, mix_seed(3, t)), 2));
  mean /= trials;
  CHECK(mean < 2.0);  // H(2) = 2 exactly; the bias at 20 blocks is large
}

TEST_CASE("fixed k, growing n: estimates rise toward H(k)") {
  const auto m = fair_coin();
  const unsigned k = 2;
  double prev = 0;
  double last = 0;
  for (std::size_t n : {100u, 1000u, 10000u, 100000u}) {
    const int trials = 100;
    double mean = 0;
    for (int t = 0; t < trials; ++t)
      mean += plug_in_entropy(empirical_distribution(sample(m, n, mix_seed(n, t)), k));
    mean /= trials;
    CHECK(mean >= prev);
    prev = mean;
    last = mean;
  }
  CHECK(std::abs(last - 2.0) <= 0.01);
}

TEST_CASE("variational distance to the true law shrinks along n(k) = 2^{2k}") {
  const auto m = fair_coin();
  auto median_distance = [&](unsigned k) {
    std::vector<double> d;
    const auto law = exact_block_law(m, k);
    for (int t = 0; t < 3; ++t) {
      const Sample x = sample(m, 1ull << (2 * k), mix_seed(k, t));
      d.push_back(variational_distance(law, empirical_distribution(x, k)));
    }
    std::sort(d.begin(), d.end());
    return d[1];
  };
  CHECK(median_distance(12) < median_distance(2));
}

TEST_CASE("frequency table CSV export") {
  std::ostringstream out;
  write_distribution_csv(out, empirical_distribution(sample_from_string("aabbab"), 2));
  CHECK(out.str() == "block,count\n0-0,1\n0-1,1\n1-1,1\n");
}
