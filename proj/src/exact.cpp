#include "entrate/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace entrate {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Compensated summation: law reductions run over up to 2^24 terms, where
// naive accumulation loses ~1e-8 and the oracle contract is 1e-9.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0, c_ = 0;
};

void fill_iid_law(const IidModel& m, Alphabet a, unsigned k, std::vector<double>& law,
                  Exec exec) {
  for_each_index(law.size(), exec, [&](std::size_t idx) {
    double p = 1;
    std::size_t v = idx;
    for (unsigned i = 0; i < k; ++i) {
      p *= m.probs[v % a.size];
      v /= a.size;
    }
    law[idx] = p;
  });
}

void fill_markov_law(const MarkovModel& m, Alphabet a, unsigned k, std::vector<double>& law,
                     Exec exec) {
  for_each_index(law.size(), exec, [&](std::size_t idx) {
    Symbol digits[64];
    std::size_t v = idx;
    for (unsigned i = k; i-- > 0;) {
      digits[i] = static_cast<Symbol>(v % a.size);
      v /= a.size;
    }
    double p = m.initial[digits[0]];
    for (unsigned i = 0; i + 1 < k && p > 0; ++i) p *= m.transition[digits[i]][digits[i + 1]];
    law[idx] = p;
  });
}

// P(X_1^k = w) for a function of a hidden Markov chain, by the forward sum.
void fill_fom_law(const FunctionOfMarkovModel& m, Alphabet a, unsigned k,
                  std::vector<double>& law, Exec exec) {
  const std::size_t states = m.initial.size();
  for_each_index(law.size(), exec, [&](std::size_t idx) {
    Symbol digits[64];
    std::size_t v = idx;
    for (unsigned i = k; i-- > 0;) {
      digits[i] = static_cast<Symbol>(v % a.size);
      v /= a.size;
    }
    std::vector<double> alpha(states), next(states);
    for (std::size_t s = 0; s < states; ++s)
      alpha[s] = m.output_map[s] == digits[0] ? m.initial[s] : 0.0;
    for (unsigned t = 1; t < k; ++t) {
      for (std::size_t s2 = 0; s2 < states; ++s2) {
        if (m.output_map[s2] != digits[t]) {
          next[s2] = 0;
          continue;
        }
        double acc = 0;
        for (std::size_t s1 = 0; s1 < states; ++s1) acc += alpha[s1] * m.transition[s1][s2];
        next[s2] = acc;
      }
      std::swap(alpha, next);
    }
    double p = 0;
    for (double x : alpha) p += x;
    law[idx] = p;
  });
}

double markov_rate(const MarkovModel& m) {
  double h = 0;
  for (std::size_t i = 0; i < m.initial.size(); ++i)
    h += m.initial[i] * entropy_bits(m.transition[i]);
  return h;
}

}  // namespace

double ExactBlockLaw::entropy_bits() const {
  KahanSum h;
  for (double p : probabilities)
    if (p > 0) h.add(-p * std::log2(p));
  return h.value();
}

ExactBlockLaw exact_block_law(const ProcessModel& model, unsigned k, std::uint64_t budget,
                              Exec exec) {
  if (k < 1) throw ArgumentError("block length must be >= 1");
  const u128 space = block_space_size(model.alphabet, k);
  if (space > budget)
    throw ResourceError("exact block law needs |X|^k = " +
                        u128_to_string(space) +
                        " entries; raise the enumeration budget to at least that (current " +
                        std::to_string(budget) + ")");

  ExactBlockLaw law;
  law.k = k;
  law.alphabet = model.alphabet;
  law.probabilities.resize(static_cast<std::size_t>(space));

  if (const auto* iid = std::get_if<IidModel>(&model.variant)) {
    fill_iid_law(*iid, model.alphabet, k, law.probabilities, exec);
  } else if (const auto* mk = std::get_if<MarkovModel>(&model.variant)) {
    fill_markov_law(*mk, model.alphabet, k, law.probabilities, exec);
  } else if (const auto* fm = std::get_if<FunctionOfMarkovModel>(&model.variant)) {
    fill_fom_law(*fm, model.alphabet, k, law.probabilities, exec);
  } else {
    const auto& mix = std::get<MixtureModel>(model.variant);
    std::vector<std::vector<double>> parts;
    parts.reserve(mix.components.size());
    for (const auto& c : mix.components)
      parts.push_back(exact_block_law(c.model, k, budget, exec).probabilities);
    for_each_index(law.probabilities.size(), exec, [&](std::size_t idx) {
      double p = 0;
      for (std::size_t c = 0; c < parts.size(); ++c) p += mix.components[c].weight * parts[c][idx];
      law.probabilities[idx] = p;
    });
  }
  return law;
}

double block_entropy(const ProcessModel& model, unsigned k, std::uint64_t budget, Exec exec) {
  return exact_block_law(model, k, budget, exec).entropy_bits();
}

std::optional<double> closed_form_block_entropy(const ProcessModel& model, unsigned k) {
  if (const auto* iid = std::get_if<IidModel>(&model.variant))
    return static_cast<double>(k) * entropy_bits(iid->probs);
  if (const auto* mk = std::get_if<MarkovModel>(&model.variant))
    return entropy_bits(mk->initial) + static_cast<double>(k - 1) * markov_rate(*mk);
  return std::nullopt;
}

double conditional_block_entropy(const ProcessModel& model, unsigned k, std::uint64_t budget,
                                 Exec exec) {
  if (const auto* mix = std::get_if<MixtureModel>(&model.variant)) {
    double h = 0;
    for (const auto& c : mix->components)
      h += c.weight * block_entropy(c.model, k, budget, exec);
    return h;
  }
  return block_entropy(model, k, budget, exec);
}

double log_probability(const ProcessModel& model, const Sample& x) {
  const auto& xs = x.symbols;
  const std::uint32_t a = model.alphabet.size;
  for (Symbol s : xs)
    if (s >= a) return kNegInf;

  if (const auto* iid = std::get_if<IidModel>(&model.variant)) {
    double lp = 0;
    for (Symbol s : xs) {
      if (iid->probs[s] == 0) return kNegInf;
      lp += std::log2(iid->probs[s]);
    }
    return lp;
  }
  if (const auto* mk = std::get_if<MarkovModel>(&model.variant)) {
    if (xs.empty()) return 0;
    if (mk->initial[xs[0]] == 0) return kNegInf;
    double lp = std::log2(mk->initial[xs[0]]);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double t = mk->transition[xs[i]][xs[i + 1]];
      if (t == 0) return kNegInf;
      lp += std::log2(t);
    }
    return lp;
  }
  if (const auto* fm = std::get_if<FunctionOfMarkovModel>(&model.variant)) {
    if (xs.empty()) return 0;
    const std::size_t states = fm->initial.size();
    std::vector<double> alpha(states), next(states);
    for (std::size_t s = 0; s < states; ++s)
      alpha[s] = fm->output_map[s] == xs[0] ? fm->initial[s] : 0.0;
    double lp = 0;
    double scale = 0;
    for (double v : alpha) scale += v;
    if (scale == 0) return kNegInf;
    lp += std::log2(scale);
    for (double& v : alpha) v /= scale;
    for (std::size_t t = 1; t < xs.size(); ++t) {
      for (std::size_t s2 = 0; s2 < states; ++s2) {
        if (fm->output_map[s2] != xs[t]) {
          next[s2] = 0;
          continue;
        }
        double acc = 0;
        for (std::size_t s1 = 0; s1 < states; ++s1) acc += alpha[s1] * fm->transition[s1][s2];
        next[s2] = acc;
      }
      scale = 0;
      for (double v : next) scale += v;
      if (scale == 0) return kNegInf;
      lp += std::log2(scale);
      for (std::size_t s = 0; s < states; ++s) alpha[s] = next[s] / scale;
    }
    return lp;
  }

  const auto& mix = std::get<MixtureModel>(model.variant);
  // log2 sum_c w_c 2^{l_c} without underflow
  double lmax = kNegInf;
  std::vector<double> lps(mix.components.size(), kNegInf);
  for (std::size_t c = 0; c < mix.components.size(); ++c) {
    if (mix.components[c].weight == 0) continue;
    lps[c] = log_probability(mix.components[c].model, x);
    lmax = std::max(lmax, lps[c]);
  }
  if (lmax == kNegInf) return kNegInf;
  double acc = 0;
  for (std::size_t c = 0; c < mix.components.size(); ++c)
    if (lps[c] != kNegInf) acc += mix.components[c].weight * std::exp2(lps[c] - lmax);
  return lmax + std::log2(acc);
}

namespace {

bool all_components_iid(const ProcessModel& model) {
  if (std::holds_alternative<IidModel>(model.variant)) return true;
  if (const auto* mix = std::get_if<MixtureModel>(&model.variant))
    return std::all_of(mix->components.begin(), mix->components.end(), [](const auto& c) {
      return std::holds_alternative<IidModel>(c.model.variant);
    });
  return false;
}

double expected_distinct_iid(const ProcessModel& component, unsigned k, std::uint64_t blocks,
                             std::uint64_t budget) {
  const auto law = exact_block_law(component, k, budget, Exec::Serial);
  KahanSum acc;
  for (double p : law.probabilities)
    if (p > 0) acc.add(1.0 - std::pow(1.0 - p, static_cast<double>(blocks)));
  return acc.value();
}

}  // namespace

double expected_distinct_exact(const ProcessModel& model, unsigned k, std::uint64_t n,
                               std::uint64_t budget) {
  if (k < 1 || k > n) throw ArgumentError("need 1 <= k <= n for E D(k, X_1^n)");
  const std::uint64_t blocks = n / k;

  if (all_components_iid(model)) {
    // Non-overlapping blocks of an IID source are themselves IID, so
    // P(w unseen) = (1 - p(w))^B per ergodic component.
    if (const auto* mix = std::get_if<MixtureModel>(&model.variant)) {
      double acc = 0;
      for (const auto& c : mix->components)
        acc += c.weight * expected_distinct_iid(c.model, k, blocks, budget);
      return acc;
    }
    return expected_distinct_iid(model, k, blocks, budget);
  }

  // General stationary case: enumerate all |X|^n sequences (serial, so the
  // summation order is fixed).
  const u128 space = block_space_size(model.alphabet, static_cast<unsigned>(n));
  if (space > budget)
    throw ResourceError("exact E D needs |X|^n = " + u128_to_string(space) +
                        " sequences; raise the enumeration budget or use Monte Carlo");
  const auto law = exact_block_law(model, static_cast<unsigned>(n), budget, Exec::Parallel);

  const std::uint32_t a = model.alphabet.size;
  std::vector<Symbol> buf(n);
  std::vector<u128> seen;
  seen.reserve(blocks);
  KahanSum acc;
  for (std::size_t idx = 0; idx < law.probabilities.size(); ++idx) {
    const double p = law.probabilities[idx];
    if (p == 0) continue;
    unpack_block(static_cast<u128>(idx), model.alphabet, static_cast<unsigned>(n), buf.data());
    seen.clear();
    for (std::uint64_t b = 0; b < blocks; ++b) {
      u128 v = 0;
      for (unsigned i = 0; i < k; ++i) v = v * a + buf[b * k + i];
      seen.push_back(v);
    }
    std::sort(seen.begin(), seen.end());
    const auto distinct = std::unique(seen.begin(), seen.end()) - seen.begin();
    acc.add(p * static_cast<double>(distinct));
  }
  return acc.value();
}

DiscreteDistribution to_distribution(const ExactBlockLaw& law) {
  DiscreteDistribution out;
  for (std::size_t idx = 0; idx < law.probabilities.size(); ++idx)
    if (law.probabilities[idx] > 0) out.probabilities[static_cast<u128>(idx)] = law.probabilities[idx];
  return out;
}

double variational_distance(const ExactBlockLaw& law, const EmpiricalBlockDistribution& d) {
  if (law.k != d.k) throw ArgumentError("variational distance needs equal block lengths");
  const double b = static_cast<double>(d.block_count);
  double dist = 0;
  auto it = d.counts.begin();
  for (std::size_t idx = 0; idx < law.probabilities.size(); ++idx) {
    double emp = 0;
    if (it != d.counts.end() && it->first == static_cast<u128>(idx)) {
      emp = static_cast<double>(it->second) / b;
      ++it;
    }
    dist += std::abs(law.probabilities[idx] - emp);
  }
  return dist;
}

}  // namespace entrate
