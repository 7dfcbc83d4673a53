#include "entrate/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "entrate/empirical.hpp"
#include "entrate/rng.hpp"

namespace entrate {

double sigma(double y) { return std::min(std::exp(y), 1.0); }

double sigma(double y, double base) {
  if (base == 2.0) return std::min(std::exp2(y), 1.0);
  return std::min(std::pow(base, y), 1.0);
}

double theorem2_rhs(const Theorem2Instance& inst, double sigma_base) {
  if (!(inst.m >= 1.0)) throw ArgumentError("theorem 2 requires m >= 1");
  if (inst.k < 1 || inst.p < 1) throw ArgumentError("theorem 2 requires k, p >= 1");
  const double k = static_cast<double>(inst.k);
  const double n = static_cast<double>(inst.n());
  const double log_a = std::log2(static_cast<double>(inst.alphabet.size));
  const double sig = sigma(inst.m * inst.h_cond_bits - std::log2(n / k), sigma_base);
  return 2.0 / k + (2.0 / n) * std::log2(k) +
         3.0 * log_a * (1.0 / inst.m + (1.0 - 1.0 / inst.m) * sig + k / n);
}

Theorem2Report verify_theorem2(const ProcessModel& model, unsigned k, std::uint64_t p,
                               std::span<const double> m_grid, double sigma_base,
                               std::uint64_t budget) {
  if (k < 1 || p < 1) throw ArgumentError("theorem 2 requires k, p >= 1");
  const std::uint64_t n = p * static_cast<std::uint64_t>(k);
  const double h_n = block_entropy(model, static_cast<unsigned>(n), budget);
  const double h_cond = conditional_block_entropy(model, k, budget);
  const double lhs = h_n / static_cast<double>(n) - h_cond / static_cast<double>(k);

  Theorem2Report report;
  for (double m : m_grid) {
    Theorem2Instance inst{k, p, m, model.alphabet, h_cond, h_n};
    Theorem2Row row;
    row.k = k;
    row.p = p;
    row.n = n;
    row.m = m;
    row.lhs = lhs;
    row.rhs = theorem2_rhs(inst, sigma_base);
    row.slack = row.rhs - row.lhs;
    if (!(row.lhs <= row.rhs)) report.all_hold = false;
    report.rows.push_back(row);
  }
  return report;
}

double expected_sigma_term(const ProcessModel& model, unsigned k, std::uint64_t n,
                           double sigma_base, std::uint64_t budget) {
  const double log_ratio = std::log2(static_cast<double>(n) / static_cast<double>(k));
  auto component_term = [&](const ProcessModel& comp) {
    const auto law = exact_block_law(comp, k, budget, Exec::Parallel);
    double acc = 0;
    for (double prob : law.probabilities)
      if (prob > 0) acc += prob * sigma(-std::log2(prob) - log_ratio, sigma_base);
    return acc;
  };
  if (const auto* mix = std::get_if<MixtureModel>(&model.variant)) {
    double acc = 0;
    for (const auto& c : mix->components) acc += c.weight * component_term(c.model);
    return acc;
  }
  return component_term(model);
}

DictionaryBoundCheck dictionary_expectation_bound(const ProcessModel& model, unsigned k,
                                                  std::uint64_t n, double m,
                                                  std::uint32_t trials,
                                                  std::uint64_t base_seed, double sigma_base,
                                                  std::uint64_t budget, Exec exec) {
  if (!(m >= 1.0)) throw ArgumentError("dictionary bound requires m >= 1");
  if (k < 1 || n < k || n % k != 0)
    throw ArgumentError("dictionary bound requires n = p k with p >= 1");

  DictionaryBoundCheck out;
  out.k = k;
  out.n = n;
  out.m = m;

  const double h_cond = conditional_block_entropy(model, k, budget);
  const double ratio = static_cast<double>(k) / static_cast<double>(n);
  out.rhs = 1.0 / m + (1.0 - 1.0 / m) * sigma(m * h_cond - std::log2(1.0 / ratio), sigma_base);
  out.chain_mid = expected_sigma_term(model, k, n, sigma_base, budget);

  bool exact_ok = false;
  try {
    out.lhs = ratio * expected_distinct_exact(model, k, n, std::min<std::uint64_t>(budget, 1u << 20));
    out.lhs_se = 0;
    exact_ok = true;
  } catch (const ResourceError&) {
    exact_ok = false;
  }
  if (!exact_ok) {
    if (trials < 1) throw ArgumentError("dictionary bound needs trials >= 1 for Monte Carlo");
    std::vector<double> d(trials);
    for_each_index(trials, exec, [&](std::size_t t) {
      const std::uint64_t seed = mix_seed(mix_seed(base_seed, kStreamDictionary), t);
      d[t] = static_cast<double>(distinct_blocks(sample(model, n, seed), k));
    });
    double mean = 0;
    for (double v : d) mean += v;
    mean /= trials;
    double var = 0;
    for (double v : d) var += (v - mean) * (v - mean);
    var = trials > 1 ? var / (trials - 1) : 0;
    out.lhs = ratio * mean;
    out.lhs_se = ratio * std::sqrt(var / trials);
  }
  out.exact = exact_ok;

  const double tol = 3 * out.lhs_se + 1e-12;
  out.ok = out.lhs <= out.chain_mid + tol && out.chain_mid <= out.rhs + 1e-12 &&
           out.lhs <= out.rhs + tol;
  return out;
}

}  // namespace entrate
