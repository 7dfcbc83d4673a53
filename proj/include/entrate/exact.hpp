#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "entrate/alphabet.hpp"
#include "entrate/empirical.hpp"
#include "entrate/parallel.hpp"
#include "entrate/process_model.hpp"

namespace entrate {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1ull << 24;

// Dense true block law over X^k, indexed by packed block value.
struct ExactBlockLaw {
  unsigned k = 1;
  Alphabet alphabet;
  std::vector<double> probabilities;  // size |X|^k

  double entropy_bits() const;  // fixed summation order, thread-count independent
};

// Brute-force enumeration of p_k. Throws ResourceError when |X|^k exceeds
// `budget`, stating the required budget. Entries are computed independently,
// so the parallel fill is bitwise identical to the serial one.
ExactBlockLaw exact_block_law(const ProcessModel& model, unsigned k,
                              std::uint64_t budget = kDefaultEnumerationBudget,
                              Exec exec = Exec::Parallel);

// H(k) via the enumerated law (the oracle route).
double block_entropy(const ProcessModel& model, unsigned k,
                     std::uint64_t budget = kDefaultEnumerationBudget,
                     Exec exec = Exec::Parallel);

// Independent closed forms: IID -> k H(p); stationary Markov ->
// H(pi) + (k-1) h. Mixtures and functions of Markov have none.
std::optional<double> closed_form_block_entropy(const ProcessModel& model, unsigned k);

// H(X_1^k | I): weighted average of component block entropies for a
// mixture; equals block_entropy for ergodic models.
double conditional_block_entropy(const ProcessModel& model, unsigned k,
                                 std::uint64_t budget = kDefaultEnumerationBudget,
                                 Exec exec = Exec::Parallel);

// Exact log2 P(x) under the model; -infinity for impossible sequences
// (detected exactly from a zero factor, never via underflow).
double log_probability(const ProcessModel& model, const Sample& x);

// E D(k, X_1^n) exactly: closed form when every ergodic component is IID,
// otherwise by enumerating all |X|^n sequences (budget-checked).
double expected_distinct_exact(const ProcessModel& model, unsigned k, std::uint64_t n,
                               std::uint64_t budget = kDefaultEnumerationBudget);

DiscreteDistribution to_distribution(const ExactBlockLaw& law);

// L1 distance between the true law and an empirical table with the same k.
double variational_distance(const ExactBlockLaw& law, const EmpiricalBlockDistribution& d);

}  // namespace entrate
