#include "entrate/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "entrate/codec.hpp"
#include "entrate/csv.hpp"
#include "entrate/empirical.hpp"
#include "entrate/rng.hpp"

namespace entrate {

const char* to_string(RegimeRule r) {
  switch (r) {
    case RegimeRule::Above:        return "above";
    case RegimeRule::Below:        return "below";
    case RegimeRule::AlphabetRule: return "alphabet";
    case RegimeRule::CodeBased:    return "code_based";
  }
  return "?";
}

RegimeRule regime_rule_from_string(const std::string& s) {
  if (s == "above") return RegimeRule::Above;
  if (s == "below") return RegimeRule::Below;
  if (s == "alphabet") return RegimeRule::AlphabetRule;
  if (s == "code_based") return RegimeRule::CodeBased;
  throw ConfigError("unknown schedule rule \"" + s + "\"");
}

namespace {

struct Point {
  unsigned k;
  std::uint64_t n;
};

double resolve_h(const ProcessModel& model, const RegimeSchedule& s) {
  if (s.h_override) return *s.h_override;
  const RateBounds r = entropy_rate(model);
  if (!r.exact)
    throw ConfigError("model has no exact entropy rate (bounds [" + fmt_double(r.lower) + ", " +
                      fmt_double(r.upper) + "]); set schedule.h_override");
  return r.value();
}

// n(k) for one schedule point as a real, before the cap.
double point_symbols(const ProcessModel& model, const RegimeSchedule& s, double h, unsigned k,
                     std::uint64_t base_seed, Exec exec) {
  switch (s.rule) {
    case RegimeRule::Above:
      return std::ceil(std::exp2(k * (h + s.epsilon)));
    case RegimeRule::Below:
      return std::ceil(std::exp2(k * (h - s.epsilon)));
    case RegimeRule::AlphabetRule:
      return std::ceil(std::pow(static_cast<double>(model.alphabet.size) + s.epsilon,
                                static_cast<double>(k)));
    case RegimeRule::CodeBased: {
      // E K(X_1^k) = E min_j K(j, X_1^k), Monte Carlo
      const std::uint32_t trials = std::max<std::uint32_t>(1, s.code_based_trials);
      std::vector<double> bits(trials);
      for_each_index(trials, exec, [&](std::size_t t) {
        const std::uint64_t seed = mix_seed(mix_seed(mix_seed(base_seed, kStreamCodeLength), k), t);
        bits[t] = min_code_length(sample(model, k, seed)).bits;
      });
      double mean = 0;
      for (double b : bits) mean += b;
      mean /= trials;
      return std::ceil(std::exp2(mean + k * s.epsilon));
    }
  }
  return 0;
}

void validate_schedule(const RegimeSchedule& s, double h) {
  if (!(s.epsilon > 0)) throw ConfigError("schedule.epsilon must be > 0");
  if (s.k_min < 1 || s.k_min > s.k_max) throw ConfigError("schedule needs 1 <= k_min <= k_max");
  if (s.rule == RegimeRule::Below && !(h - s.epsilon > 0))
    throw ConfigError("below-rule needs h - epsilon > 0 (h = " + fmt_double(h) +
                      ", epsilon = " + fmt_double(s.epsilon) + "); n(k) would degenerate");
}

std::pair<std::vector<Point>, std::vector<SkippedPoint>> schedule_points(
    const ProcessModel& model, const RegimeSchedule& s, double h, std::uint64_t base_seed,
    Exec exec) {
  std::vector<Point> points;
  std::vector<SkippedPoint> skipped;
  for (unsigned k = s.k_min; k <= s.k_max; ++k) {
    const double req = point_symbols(model, s, h, k, base_seed, exec);
    if (!(req <= static_cast<double>(s.max_point_symbols))) {
      const double cap = 1.8e19;  // saturate to u64
      skipped.push_back({k, static_cast<std::uint64_t>(std::min(req, cap))});
      continue;
    }
    std::uint64_t n = static_cast<std::uint64_t>(req);
    n = std::max<std::uint64_t>(n, k);  // need at least one block
    points.push_back({k, n});
  }
  return {points, skipped};
}

double mean_of(std::span<const double> v) {
  double m = 0;
  for (double x : v) m += x;
  return v.empty() ? 0 : m / static_cast<double>(v.size());
}

double se_of(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0;
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size() - 1);
  return std::sqrt(var / static_cast<double>(v.size()));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

RegimeResult run_regime(const ProcessModel& model, const RegimeSchedule& schedule,
                        std::uint32_t trials, std::uint64_t base_seed,
                        std::span<const double> eta_grid, Exec exec) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  const double h = resolve_h(model, schedule);
  validate_schedule(schedule, h);

  RegimeResult result;
  result.h_reference = h;
  auto [points, skipped] = schedule_points(model, schedule, h, base_seed, exec);
  result.skipped = std::move(skipped);
  result.records.resize(points.size() * trials);

  for_each_index(result.records.size(), exec, [&](std::size_t idx) {
    const Point pt = points[idx / trials];
    const std::uint32_t trial = static_cast<std::uint32_t>(idx % trials);
    const std::uint64_t seed =
        mix_seed(mix_seed(mix_seed(base_seed, kStreamRegime), pt.k), trial);
    const Sample x = sample(model, pt.n, seed);
    const auto d = empirical_distribution(x, pt.k);

    RegimeRecord& rec = result.records[idx];
    rec.k = pt.k;
    rec.n = pt.n;
    rec.trial = trial;
    rec.trial_seed = seed;
    rec.hk_bits = plug_in_entropy(d);
    rec.estimate = rec.hk_bits / pt.k;
    rec.distinct = d.distinct();
    rec.k_bound = code_length_bound_bits(pt.k, pt.n, rec.hk_bits, rec.distinct, model.alphabet);
    const double cap = std::log2(static_cast<double>(pt.n / pt.k));
    rec.as_bound = cap / pt.k;
    rec.as_bound_ok = rec.hk_bits <= cap + 1e-9;
  });

  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<double> est(trials);
    for (std::uint32_t t = 0; t < trials; ++t) est[t] = result.records[p * trials + t].estimate;
    RegimeSummaryRow row;
    row.k = points[p].k;
    row.n = points[p].n;
    row.mean = mean_of(est);
    row.se = se_of(est, row.mean);
    for (double eta : eta_grid) {
      std::size_t c = 0;
      for (double e : est)
        if (e - h > eta) ++c;
      row.frac_exceed.push_back(static_cast<double>(c) / static_cast<double>(trials));
    }
    result.summary.push_back(std::move(row));
  }
  return result;
}

BarronResult run_barron_check(const ProcessModel& model, unsigned k, std::uint64_t n,
                              std::span<const double> m_grid, std::uint32_t trials,
                              std::uint64_t base_seed, Exec exec) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (k < 1 || k > n) throw ArgumentError("need 1 <= k <= n");

  BarronResult result;
  result.k = k;
  result.n = n;
  result.records.resize(trials);

  for_each_index(trials, exec, [&](std::size_t t) {
    const std::uint64_t seed = mix_seed(mix_seed(base_seed, kStreamBarron), t);
    const Sample x = sample(model, n, seed);
    const auto b = code_length_bound(x, k);
    BarronRecord& rec = result.records[t];
    rec.trial = static_cast<std::uint32_t>(t);
    rec.trial_seed = seed;
    rec.k_bound = b.bound_bits;
    rec.log_prob = log_probability(model, x);
    rec.margin = rec.k_bound + rec.log_prob;
  });

  for (double m : m_grid) {
    std::size_t c = 0;
    for (const auto& rec : result.records)
      if (rec.margin <= -m) ++c;
    BarronSummary s;
    s.m = m;
    s.frequency = static_cast<double>(c) / static_cast<double>(trials);
    s.bound = std::exp2(-m);
    s.se = std::sqrt(s.frequency * (1 - s.frequency) / static_cast<double>(trials));
    s.ok = s.frequency <= s.bound + 3 * s.se;
    result.all_ok = result.all_ok && s.ok;
    result.summary.push_back(s);
  }
  return result;
}

VariationalResult run_variational(const ProcessModel& model, const RegimeSchedule& schedule,
                                  std::uint32_t trials, std::uint64_t base_seed,
                                  std::uint64_t budget, Exec exec) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  const double h = resolve_h(model, schedule);
  validate_schedule(schedule, h);

  VariationalResult result;
  auto [points, skipped] = schedule_points(model, schedule, h, base_seed, exec);
  result.skipped = std::move(skipped);

  // laws first; this is where the enumeration budget bites
  std::vector<ExactBlockLaw> laws(points.size());
  for (std::size_t p = 0; p < points.size(); ++p)
    laws[p] = exact_block_law(model, points[p].k, budget, exec);

  result.records.resize(points.size() * trials);
  for_each_index(result.records.size(), exec, [&](std::size_t idx) {
    const std::size_t p = idx / trials;
    const std::uint32_t trial = static_cast<std::uint32_t>(idx % trials);
    const std::uint64_t seed =
        mix_seed(mix_seed(mix_seed(base_seed, kStreamVariational), points[p].k), trial);
    const Sample x = sample(model, points[p].n, seed);
    VariationalRecord& rec = result.records[idx];
    rec.k = points[p].k;
    rec.n = points[p].n;
    rec.trial = trial;
    rec.trial_seed = seed;
    rec.distance = variational_distance(laws[p], empirical_distribution(x, points[p].k));
  });

  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<double> d(trials);
    for (std::uint32_t t = 0; t < trials; ++t) d[t] = result.records[p * trials + t].distance;
    VariationalSummaryRow row;
    row.k = points[p].k;
    row.n = points[p].n;
    row.mean = mean_of(d);
    row.median = median_of(d);
    result.summary.push_back(row);
  }
  return result;
}

// --- CSV ---------------------------------------------------------------

std::string regime_csv(const RegimeResult& r, const std::string& experiment_id,
                       const std::string& model_id, RegimeRule rule) {
  CsvBuilder b;
  b.field("experiment_id").field("model_id").field("rule").field("k").field("n").field("trial")
      .field("trial_seed").field("estimate").field("hk_bits").field("distinct").field("k_bound")
      .field("as_bound").field("as_bound_ok");
  b.end_row();
  for (const auto& rec : r.records) {
    b.field(experiment_id).field(model_id).field(to_string(rule)).field(std::uint32_t{rec.k})
        .field(rec.n).field(rec.trial).field(rec.trial_seed).field(rec.estimate)
        .field(rec.hk_bits).field(rec.distinct).field(rec.k_bound).field(rec.as_bound)
        .field(rec.as_bound_ok);
    b.end_row();
  }
  return b.str();
}

std::string barron_csv(const BarronResult& r, const std::string& experiment_id,
                       const std::string& model_id) {
  CsvBuilder b;
  b.field("experiment_id").field("model_id").field("k").field("n").field("trial")
      .field("trial_seed").field("k_bound").field("log_prob").field("margin");
  b.end_row();
  for (const auto& rec : r.records) {
    b.field(experiment_id).field(model_id).field(std::uint32_t{r.k}).field(r.n).field(rec.trial)
        .field(rec.trial_seed).field(rec.k_bound).field(rec.log_prob).field(rec.margin);
    b.end_row();
  }
  return b.str();
}

std::string variational_csv(const VariationalResult& r, const std::string& experiment_id,
                            const std::string& model_id) {
  CsvBuilder b;
  b.field("experiment_id").field("model_id").field("k").field("n").field("trial")
      .field("trial_seed").field("distance");
  b.end_row();
  for (const auto& rec : r.records) {
    b.field(experiment_id).field(model_id).field(std::uint32_t{rec.k}).field(rec.n)
        .field(rec.trial).field(rec.trial_seed).field(rec.distance);
    b.end_row();
  }
  return b.str();
}

std::string theorem2_csv(const Theorem2Report& r, std::uint64_t seed_base) {
  CsvBuilder b;
  b.field("k").field("p").field("n").field("m").field("lhs").field("rhs").field("slack")
      .field("seed_base");
  b.end_row();
  for (const auto& row : r.rows) {
    b.field(std::uint32_t{row.k}).field(row.p).field(row.n).field(row.m).field(row.lhs)
        .field(row.rhs).field(row.slack).field(seed_base);
    b.end_row();
  }
  return b.str();
}

std::string dictionary_csv(std::span<const DictionaryBoundCheck> checks,
                           std::uint64_t seed_base) {
  CsvBuilder b;
  b.field("k").field("n").field("m").field("lhs").field("lhs_se").field("chain_mid")
      .field("rhs").field("exact").field("ok").field("seed_base");
  b.end_row();
  for (const auto& c : checks) {
    b.field(std::uint32_t{c.k}).field(c.n).field(c.m).field(c.lhs).field(c.lhs_se)
        .field(c.chain_mid).field(c.rhs).field(c.exact).field(c.ok).field(seed_base);
    b.end_row();
  }
  return b.str();
}

// --- configs -----------------------------------------------------------

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: expected an object");
  ExperimentConfig cfg;
  auto model_it = j.find("model");
  if (model_it == j.end()) throw ConfigError("config.model: missing");
  cfg.model = parse_model(*model_it, "config.model");
  cfg.experiment_id = get_or<std::string>(j, "experiment_id", cfg.model.id, "config");

  if (auto it = j.find("schedule"); it != j.end()) {
    const json& s = *it;
    if (!s.is_object()) throw ConfigError("config.schedule: expected an object");
    cfg.schedule.rule =
        regime_rule_from_string(get_or<std::string>(s, "rule", "above", "config.schedule"));
    cfg.schedule.epsilon = get_or<double>(s, "epsilon", 0.5, "config.schedule");
    cfg.schedule.k_min = get_or<unsigned>(s, "k_min", 2, "config.schedule");
    cfg.schedule.k_max = get_or<unsigned>(s, "k_max", 12, "config.schedule");
    if (auto h = s.find("h_override"); h != s.end() && !h->is_null())
      cfg.schedule.h_override = h->get<double>();
    cfg.schedule.max_point_symbols =
        get_or<std::uint64_t>(s, "max_point_symbols", kDefaultMaxPointSymbols, "config.schedule");
    cfg.schedule.code_based_trials =
        get_or<std::uint32_t>(s, "code_based_trials", 32, "config.schedule");
  }
  if (const char* env = std::getenv("ENTRATE_MAX_POINT_SYMBOLS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw ConfigError("ENTRATE_MAX_POINT_SYMBOLS: not an integer: " + std::string(env));
    cfg.schedule.max_point_symbols = v;
  }

  cfg.trials_specified = j.contains("trials");
  cfg.trials = get_or<std::uint32_t>(j, "trials", 32, "config");
  cfg.base_seed = get_or<std::uint64_t>(j, "base_seed", 0, "config");
  cfg.eta_grid = get_or<std::vector<double>>(j, "eta_grid", cfg.eta_grid, "config");
  cfg.m_grid = get_or<std::vector<double>>(j, "m_grid", cfg.m_grid, "config");
  cfg.k = get_or<unsigned>(j, "k", cfg.k, "config");
  cfg.n = get_or<std::uint64_t>(j, "n", cfg.n, "config");
  cfg.sigma_base = get_or<double>(j, "sigma_base", 2.0, "config");
  cfg.chain_check = get_or<bool>(j, "chain_check", false, "config");
  cfg.chain_trials = get_or<std::uint32_t>(j, "chain_trials", 1000, "config");
  cfg.budget = get_or<std::uint64_t>(j, "budget", kDefaultEnumerationBudget, "config");

  if (auto it = j.find("cases"); it != j.end()) {
    if (!it->is_array()) throw ConfigError("config.cases: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& c = (*it)[i];
      const std::string path = "config.cases[" + std::to_string(i) + "]";
      if (!c.is_object() || !c.contains("k") || !c.contains("p"))
        throw ConfigError(path + ": expected {\"k\": ..., \"p\": ...}");
      cfg.cases.emplace_back(c["k"].get<unsigned>(), c["p"].get<std::uint64_t>());
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  return parse_experiment_config(j);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << content;
}

}  // namespace entrate
