// Serial reference vs OpenMP kernels. The two paths must agree exactly;
// this binary times them and checks the outputs match.

#include <chrono>
#include <cstdio>
#include <vector>

#include "entrate/empirical.hpp"
#include "entrate/exact.hpp"
#include "entrate/parallel.hpp"
#include "entrate/process_model.hpp"
#include "entrate/rng.hpp"

using namespace entrate;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

ProcessModel fair_coin() {
  ProcessModel m;
  m.alphabet = {2};
  m.id = "fair-coin";
  m.variant = IidModel{{0.5, 0.5}};
  return m;
}

ProcessModel markov_flip(double flip) {
  ProcessModel m;
  m.alphabet = {2};
  m.id = "markov";
  m.variant = MarkovModel{{0.5, 0.5}, {{1 - flip, flip}, {flip, 1 - flip}}};
  return m;
}

void report(const char* name, double serial_s, double parallel_s, bool equal) {
  std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n", name, serial_s,
              parallel_s, serial_s / parallel_s, equal ? "outputs equal" : "OUTPUTS DIFFER");
}

void bench_trials() {
  const ProcessModel model = fair_coin();
  const std::uint32_t trials = 4000;
  const std::uint64_t n = 4096;
  auto run = [&](Exec exec) {
    std::vector<double> est(trials);
    for_each_index(trials, exec, [&](std::size_t t) {
      const Sample x = sample(model, n, mix_seed(1, t));
      est[t] = plug_in_entropy(empirical_distribution(x, 4));
    });
    return est;
  };
  auto t0 = clock_type::now();
  const auto a = run(Exec::Serial);
  const double ts = seconds_since(t0);
  t0 = clock_type::now();
  const auto b = run(Exec::Parallel);
  const double tp = seconds_since(t0);
  report("monte-carlo trials", ts, tp, a == b);
}

void bench_counting() {
  const Sample x = sample(fair_coin(), 1 << 24, 7);
  auto t0 = clock_type::now();
  const auto a = empirical_distribution(x, 8, Exec::Serial);
  const double ts = seconds_since(t0);
  t0 = clock_type::now();
  const auto b = empirical_distribution(x, 8, Exec::Parallel);
  const double tp = seconds_since(t0);
  report("block counting (n = 2^24)", ts, tp, a.counts == b.counts);
}

void bench_exact_law() {
  const ProcessModel model = markov_flip(0.1);
  const unsigned k = 22;
  auto t0 = clock_type::now();
  const auto a = exact_block_law(model, k, 1ull << 24, Exec::Serial);
  const double ts = seconds_since(t0);
  t0 = clock_type::now();
  const auto b = exact_block_law(model, k, 1ull << 24, Exec::Parallel);
  const double tp = seconds_since(t0);
  report("exact block law (k = 22)", ts, tp, a.probabilities == b.probabilities);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", max_threads());
  bench_trials();
  bench_counting();
  bench_exact_law();
  return 0;
}
