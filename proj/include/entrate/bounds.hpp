#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "entrate/exact.hpp"
#include "entrate/process_model.hpp"

namespace entrate {

// min(exp(y), 1), the paper-literal natural form.
double sigma(double y);
// min(base^y, 1). The bound is verified with base 2, matching the base of
// the entropies in the argument; base e is exposed as a switch.
double sigma(double y, double base);

struct Theorem2Instance {
  unsigned k = 1;
  std::uint64_t p = 1;  // blocks per sample, n = p k
  double m = 1;         // real, >= 1
  Alphabet alphabet;
  double h_cond_bits = 0;     // H(X_1^k | I)
  double h_block_n_bits = 0;  // H(X_1^n)

  std::uint64_t n() const { return static_cast<std::uint64_t>(p) * k; }
};

// 2/k + (2/n) log2 k + 3 log2|X| (1/m + (1 - 1/m) sigma(m H_cond - log(n/k)) + k/n).
double theorem2_rhs(const Theorem2Instance& inst, double sigma_base = 2.0);

struct Theorem2Row {
  unsigned k = 0;
  std::uint64_t p = 0;
  std::uint64_t n = 0;
  double m = 0;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;  // rhs - lhs, must be >= 0
};

struct Theorem2Report {
  std::vector<Theorem2Row> rows;
  bool all_hold = true;
};

// H(X_1^n)/n - H(X_1^k|I)/k <= theorem2_rhs for each m. Both entropies are
// exact (enumeration), so a violation is an implementation bug.
Theorem2Report verify_theorem2(const ProcessModel& model, unsigned k, std::uint64_t p,
                               std::span<const double> m_grid, double sigma_base = 2.0,
                               std::uint64_t budget = kDefaultEnumerationBudget);

// Exact RHS of the intermediate chain link:
// E sigma(-log P(X_1^k|I) - log(n/k)) = sum_c w_c sum_w p_c(w) min(1, k/(n p_c(w))).
double expected_sigma_term(const ProcessModel& model, unsigned k, std::uint64_t n,
                           double sigma_base = 2.0,
                           std::uint64_t budget = kDefaultEnumerationBudget);

struct DictionaryBoundCheck {
  unsigned k = 0;
  std::uint64_t n = 0;
  double m = 0;
  double lhs = 0;        // (k/n) E D(k, X_1^n), exact or Monte Carlo
  double lhs_se = 0;     // standard error of lhs (0 when exact)
  double chain_mid = 0;  // exact E sigma term
  double rhs = 0;        // 1/m + (1 - 1/m) sigma(m H_cond - log(n/k))
  bool exact = false;
  bool ok = false;       // lhs <= rhs + 3 se (and lhs <= chain_mid + 3 se)
};

// Checks (k/n) E D <= E sigma(...) <= 1/m + (1-1/m) sigma(m H_cond - log(n/k)).
// E D is exact when affordable, else Monte Carlo over `trials` seeds.
DictionaryBoundCheck dictionary_expectation_bound(const ProcessModel& model, unsigned k,
                                                  std::uint64_t n, double m,
                                                  std::uint32_t trials,
                                                  std::uint64_t base_seed,
                                                  double sigma_base = 2.0,
                                                  std::uint64_t budget = kDefaultEnumerationBudget,
                                                  Exec exec = Exec::Parallel);

}  // namespace entrate
