#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "entrate/bounds.hpp"
#include "entrate/rng.hpp"
#include "helpers.hpp"

using namespace entrate;
using namespace entrate::testing;

TEST_CASE("sigma: natural form and base switch") {
  CHECK(sigma(0.0) == 1.0);
  CHECK(sigma(3.5) == 1.0);
  CHECK(sigma(-50.0) <= 1e-20);
  CHECK(sigma(-1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-12));
  CHECK(sigma(-1.0, 2.0) == 0.5);
  CHECK(sigma(-3.0, 2.0) == 0.125);
  CHECK(sigma(2.0, 2.0) == 1.0);
  CHECK(sigma(-1.0, std::exp(1.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("theorem 2 right-hand side: hand evaluation") {
  // k=4, p=256, m=2, |X|=2, H_cond=0:
  // 2/4 + (2/1024) log2 4 + 3 (1/2 + 1/2 sigma(-log2 256) + 4/1024)
  Theorem2Instance inst{4, 256, 2.0, Alphabet{2}, 0.0, 0.0};
  const double by_hand = 0.5 + (2.0 / 1024.0) * 2.0 +
                         3.0 * (0.5 + 0.5 * std::exp2(-8.0) + 4.0 / 1024.0);
  CHECK(theorem2_rhs(inst) == doctest::Approx(by_hand).epsilon(1e-15));
  CHECK(theorem2_rhs(inst) == doctest::Approx(2.021484375).epsilon(1e-15));
}

TEST_CASE("theorem 2 rhs: m = 1 removes the sigma term") {
  Theorem2Instance a{3, 8, 1.0, Alphabet{2}, 0.0, 0.0};
  Theorem2Instance b{3, 8, 1.0, Alphabet{2}, 5.0, 0.0};
  CHECK(theorem2_rhs(a) == theorem2_rhs(b));
}

TEST_CASE("theorem 2 rhs: m < 1 is rejected") {
  Theorem2Instance inst{3, 8, 0.5, Alphabet{2}, 0.0, 0.0};
  CHECK_THROWS_AS(theorem2_rhs(inst), ArgumentError);
}

TEST_CASE("theorem 2 rhs: monotone in n, monotone in H_cond, 2/k limit") {
  const unsigned k = 4;
  double prev = std::numeric_limits<double>::infinity();
  for (std::uint64_t p : {2ull, 8ull, 64ull, 1024ull, 1ull << 20}) {
    Theorem2Instance inst{k, p, 8.0, Alphabet{2}, 0.5, 0.0};
    const double rhs = theorem2_rhs(inst);
    CHECK(rhs <= prev + 1e-15);
    prev = rhs;
  }
  // nondecreasing in the conditional entropy
  Theorem2Instance lo{k, 64, 4.0, Alphabet{2}, 0.2, 0.0};
  Theorem2Instance hi{k, 64, 4.0, Alphabet{2}, 1.2, 0.0};
  CHECK(theorem2_rhs(lo) <= theorem2_rhs(hi));
  // H_cond = 0, huge n and m: everything but 2/k plus 3 log|X| / m vanishes
  Theorem2Instance lim{k, 1ull << 40, 1e9, Alphabet{2}, 0.0, 0.0};
  CHECK(theorem2_rhs(lim) == doctest::Approx(2.0 / k).epsilon(1e-6));
}

TEST_CASE("theorem 2 on the delta mixture: exact small case") {
  // H(X_1^8) = 1 bit, H_cond = 0: lhs = 1/8
  const double grid[] = {1, 2, 4, 8};
  const auto r = verify_theorem2(mixture_deltas(), 2, 4, grid);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.all_hold);
  for (const auto& row : r.rows) {
    CHECK(row.lhs == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(row.rhs >= 1.0);
    CHECK(row.slack == doctest::Approx(row.rhs - row.lhs).epsilon(1e-12));
  }
}

TEST_CASE("theorem 2 on ergodic models: lhs is nonpositive") {
  const double grid[] = {1, 4};
  for (const auto& m : {fair_coin(), markov_flip(0.1)}) {
    const auto r = verify_theorem2(m, 3, 4, grid);
    CHECK(r.all_hold);
    for (const auto& row : r.rows) CHECK(row.lhs <= 1e-12);
  }
}

TEST_CASE("theorem 2 on the coin/delta mixture") {
  const double grid[] = {1, 2, 4, 8};
  const auto r = verify_theorem2(mixture_coin_delta(), 3, 4, grid);
  CHECK(r.all_hold);
  for (const auto& row : r.rows) CHECK(row.slack >= 0);
}

TEST_CASE("dictionary bound: exact paths") {
  // delta mixture: D == 1 always, lhs = k/n
  const auto c1 = dictionary_expectation_bound(mixture_deltas(), 2, 8, 2.0, 100, 1);
  CHECK(c1.exact);
  CHECK(c1.lhs == doctest::Approx(2.0 / 8.0).epsilon(1e-12));
  CHECK(c1.ok);

  // fair coin, k=2, n=8, m=1: rhs = 1 dominates everything
  const auto c2 = dictionary_expectation_bound(fair_coin(), 2, 8, 1.0, 100, 1);
  CHECK(c2.exact);
  CHECK(c2.rhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c2.lhs <= 1.0);
  CHECK(c2.ok);

  // chain ordering on an exactly-enumerable Markov mixture
  for (double m : {1.0, 2.0, 4.0, 8.0}) {
    const auto c = dictionary_expectation_bound(mixture_coin_markov(), 2, 12, m, 100, 9);
    CHECK(c.exact);
    CHECK(c.lhs <= c.chain_mid + 1e-12);
    CHECK(c.chain_mid <= c.rhs + 1e-12);
    CHECK(c.ok);
  }
}

TEST_CASE("dictionary bound: Monte Carlo path agrees with the exact value") {
  // force the Monte Carlo path with a Markov mixture at n past the cap
  const auto model = mixture_coin_markov();
  const unsigned k = 3;
  const std::uint64_t n = 24;  // 2^24 sequences > the dictionary exact cap
  const auto mc = dictionary_expectation_bound(model, k, n, 2.0, 4000, 5);
  CHECK_FALSE(mc.exact);
  CHECK(mc.lhs_se > 0);
  CHECK(mc.ok);

  // Monte Carlo on an all-IID mixture cross-checks the closed form
  const auto exact = dictionary_expectation_bound(mixture_coin_delta(), 2, 16, 2.0, 10, 5);
  REQUIRE(exact.exact);
  const int trials = 20000;
  double mean = 0;
  for (int t = 0; t < trials; ++t)
    mean += static_cast<double>(
        distinct_blocks(sample(mixture_coin_delta(), 16, mix_seed(17, t)), 2));
  mean *= (2.0 / 16.0) / trials;
  CHECK(std::abs(mean - exact.lhs) < 0.01);
}

TEST_CASE("dictionary bound argument checks") {
  CHECK_THROWS_AS(dictionary_expectation_bound(fair_coin(), 2, 9, 2.0, 10, 1), ArgumentError);
  CHECK_THROWS_AS(dictionary_expectation_bound(fair_coin(), 2, 8, 0.5, 10, 1), ArgumentError);
}

TEST_CASE("base-e sigma keeps the outer theorem 2 inequality on tested mixtures") {
  const double grid[] = {1, 2, 4, 8};
  for (const auto& m : {mixture_deltas(), mixture_coin_delta()}) {
    const auto r = verify_theorem2(m, 2, 4, grid, std::exp(1.0));
    CHECK(r.all_hold);
  }
}
