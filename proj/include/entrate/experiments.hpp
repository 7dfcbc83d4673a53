#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entrate/bounds.hpp"
#include "entrate/exact.hpp"
#include "entrate/parallel.hpp"
#include "entrate/process_model.hpp"

#include "json.hpp"

namespace entrate {

inline constexpr std::uint64_t kDefaultMaxPointSymbols = 1ull << 30;

enum class RegimeRule { Above, Below, AlphabetRule, CodeBased };

const char* to_string(RegimeRule r);
RegimeRule regime_rule_from_string(const std::string& s);

// Sample-length schedules n(k):
//   above:     ceil(2^{k(h+eps)})
//   below:     ceil(2^{k(h-eps)}), requires h - eps > 0
//   alphabet:  ceil((|X|+eps)^k)
//   code_based: ceil(2^{EK(X_1^k) + k eps}) with E K(X_1^k) = E min_j K(j, X_1^k)
//               estimated by Monte Carlo
struct RegimeSchedule {
  RegimeRule rule = RegimeRule::Above;
  double epsilon = 0.5;
  unsigned k_min = 2;
  unsigned k_max = 12;
  std::optional<double> h_override;  // for models without an exact rate
  std::uint64_t max_point_symbols = kDefaultMaxPointSymbols;
  std::uint32_t code_based_trials = 32;
};

struct RegimeRecord {
  unsigned k = 0;
  std::uint64_t n = 0;
  std::uint32_t trial = 0;
  std::uint64_t trial_seed = 0;
  double estimate = 0;   // H(k, x)/k, bits per symbol
  double hk_bits = 0;    // H(k, x)
  std::uint64_t distinct = 0;
  double k_bound = 0;    // K(k, x)
  double as_bound = 0;   // log2 floor(n/k) / k, the a.s. cap from the
                         // cardinality bound
  bool as_bound_ok = false;
};

struct RegimeSummaryRow {
  unsigned k = 0;
  std::uint64_t n = 0;
  double mean = 0;  // of estimate
  double se = 0;
  std::vector<double> frac_exceed;  // P(estimate - h > eta), per eta
};

struct SkippedPoint {
  unsigned k = 0;
  std::uint64_t required_symbols = 0;
};

struct RegimeResult {
  double h_reference = 0;  // h used by the schedule (exact or override)
  std::vector<RegimeRecord> records;
  std::vector<RegimeSummaryRow> summary;
  std::vector<SkippedPoint> skipped;
};

RegimeResult run_regime(const ProcessModel& model, const RegimeSchedule& schedule,
                        std::uint32_t trials, std::uint64_t base_seed,
                        std::span<const double> eta_grid, Exec exec = Exec::Parallel);

// --- Barron tail check ------------------------------------------------------

struct BarronRecord {
  std::uint32_t trial = 0;
  std::uint64_t trial_seed = 0;
  double k_bound = 0;
  double log_prob = 0;
  double margin = 0;  // K(k, x) + log2 P(x)
};

struct BarronSummary {
  double m = 0;
  double frequency = 0;  // empirical P(margin <= -m)
  double bound = 0;      // 2^-m
  double se = 0;
  bool ok = false;       // frequency <= bound + 3 se
};

struct BarronResult {
  unsigned k = 0;
  std::uint64_t n = 0;
  std::vector<BarronRecord> records;
  std::vector<BarronSummary> summary;
  bool all_ok = true;
};

BarronResult run_barron_check(const ProcessModel& model, unsigned k, std::uint64_t n,
                              std::span<const double> m_grid, std::uint32_t trials,
                              std::uint64_t base_seed, Exec exec = Exec::Parallel);

// --- variational distance ---------------------------------------------------

struct VariationalRecord {
  unsigned k = 0;
  std::uint64_t n = 0;
  std::uint32_t trial = 0;
  std::uint64_t trial_seed = 0;
  double distance = 0;  // |p_k - p_k(., X_1^n)|
};

struct VariationalSummaryRow {
  unsigned k = 0;
  std::uint64_t n = 0;
  double median = 0;
  double mean = 0;
};

struct VariationalResult {
  std::vector<VariationalRecord> records;
  std::vector<VariationalSummaryRow> summary;
  std::vector<SkippedPoint> skipped;
};

VariationalResult run_variational(const ProcessModel& model, const RegimeSchedule& schedule,
                                  std::uint32_t trials, std::uint64_t base_seed,
                                  std::uint64_t budget = kDefaultEnumerationBudget,
                                  Exec exec = Exec::Parallel);

// --- CSV rendering (deterministic; no timestamps) ---------------------------

std::string regime_csv(const RegimeResult& r, const std::string& experiment_id,
                       const std::string& model_id, RegimeRule rule);
std::string barron_csv(const BarronResult& r, const std::string& experiment_id,
                       const std::string& model_id);
std::string variational_csv(const VariationalResult& r, const std::string& experiment_id,
                            const std::string& model_id);
std::string theorem2_csv(const Theorem2Report& r, std::uint64_t seed_base);
std::string dictionary_csv(std::span<const DictionaryBoundCheck> checks,
                           std::uint64_t seed_base);

// --- experiment configs (JSON) ----------------------------------------------

struct ExperimentConfig {
  std::string experiment_id;
  ProcessModel model;
  RegimeSchedule schedule;  // regimes / variational
  std::uint32_t trials = 32;
  bool trials_specified = false;  // tail checks default to 10^4 instead
  std::uint64_t base_seed = 0;
  std::vector<double> eta_grid{0.05, 0.1, 0.2};
  std::vector<double> m_grid{1, 2, 4, 8};
  unsigned k = 4;            // barron
  std::uint64_t n = 1024;    // barron
  std::vector<std::pair<unsigned, std::uint64_t>> cases;  // theorem2 (k, p)
  double sigma_base = 2.0;
  bool chain_check = false;
  std::uint32_t chain_trials = 1000;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

// Reads the schema described in the README; unknown or ill-typed fields are
// reported with their JSON path. The ENTRATE_MAX_POINT_SYMBOLS environment
// variable overrides schedule.max_point_symbols.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace entrate
