#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "entrate/codec.hpp"
#include "entrate/csv.hpp"
#include "entrate/empirical.hpp"
#include "entrate/exact.hpp"
#include "entrate/experiments.hpp"
#include "entrate/process_model.hpp"

using namespace entrate;

namespace {

// 0 success, 1 assertion/runtime failure, 2 configuration error
constexpr int kExitOk = 0;
constexpr int kExitAssert = 1;
constexpr int kExitConfig = 2;

Exec exec_mode(bool serial) { return serial ? Exec::Serial : Exec::Parallel; }

std::optional<Alphabet> alphabet_opt(std::uint32_t size) {
  if (size == 0) return std::nullopt;
  return Alphabet{size};
}

int cmd_simulate(const std::string& model_path, std::uint64_t n, std::uint64_t seed,
                 const std::string& output) {
  const ProcessModel model = load_model_file(model_path);
  const Sample s = sample(model, n, seed);
  save_sample_file(output, s);
  std::printf("wrote %llu symbols (model %s, seed %llu) to %s\n",
              static_cast<unsigned long long>(n), model.id.c_str(),
              static_cast<unsigned long long>(seed), output.c_str());
  return kExitOk;
}

int cmd_estimate(const std::string& input, unsigned k, std::uint32_t alphabet,
                 const std::string& dist_csv, Exec exec) {
  const Sample x = load_sample_file(input, alphabet_opt(alphabet));
  const auto d = empirical_distribution(x, k, exec);
  const double h = plug_in_entropy(d);
  const double bound = code_length_bound_bits(k, x.size(), h, d.distinct(), x.alphabet);
  std::printf("n = %llu\nk = %u\nalphabet = %u\n", static_cast<unsigned long long>(x.size()), k,
              x.alphabet.size);
  std::printf("H(k,x) = %s\n", fmt_double(h).c_str());
  std::printf("H(k,x)/k = %s\n", fmt_double(h / k).c_str());
  std::printf("D(k,x) = %llu\n", static_cast<unsigned long long>(d.distinct()));
  std::printf("K(k,x) = %s\n", fmt_double(bound).c_str());
  if (!dist_csv.empty()) {
    std::ofstream out(dist_csv, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + dist_csv);
    write_distribution_csv(out, d);
  }
  return kExitOk;
}

int cmd_encode(const std::string& input, unsigned k, std::uint32_t alphabet,
               const std::string& output) {
  const Sample x = load_sample_file(input, alphabet_opt(alphabet));
  const EncodedStream s = encode(x, k);
  write_container_file(output, s);
  const auto bound = code_length_bound(x, k);
  std::printf("encoded %llu symbols at k = %u: %llu payload bits, K bound %s bits\n",
              static_cast<unsigned long long>(s.n), k,
              static_cast<unsigned long long>(s.measured_bits),
              fmt_double(bound.bound_bits).c_str());
  return kExitOk;
}

int cmd_decode(const std::string& input, const std::string& output) {
  const EncodedStream s = read_container_file(input);
  const Sample x = decode(s);
  save_sample_file(output, x);
  std::printf("decoded %llu symbols to %s\n", static_cast<unsigned long long>(x.size()),
              output.c_str());
  return kExitOk;
}

void print_skipped(const std::vector<SkippedPoint>& skipped, std::uint64_t cap) {
  for (const auto& s : skipped)
    std::printf("skipped k = %u: needs %llu symbols, cap is %llu\n", s.k,
                static_cast<unsigned long long>(s.required_symbols),
                static_cast<unsigned long long>(cap));
}

int cmd_regimes(const std::string& config_path, const std::string& output, Exec exec) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  const RegimeResult r =
      run_regime(cfg.model, cfg.schedule, cfg.trials, cfg.base_seed, cfg.eta_grid, exec);
  write_text_file(output, regime_csv(r, cfg.experiment_id, cfg.model.id, cfg.schedule.rule));

  std::printf("rule %s, h = %s, trials = %u\n", to_string(cfg.schedule.rule),
              fmt_double(r.h_reference).c_str(), cfg.trials);
  for (const auto& row : r.summary) {
    std::printf("k = %2u  n = %10llu  mean H/k = %8s  se = %8s ", row.k,
                static_cast<unsigned long long>(row.n), fmt_double(row.mean).c_str(),
                fmt_double(row.se).c_str());
    for (std::size_t i = 0; i < row.frac_exceed.size(); ++i)
      std::printf(" P(>h+%s) = %s", fmt_double(cfg.eta_grid[i]).c_str(),
                  fmt_double(row.frac_exceed[i]).c_str());
    std::printf("\n");
  }
  print_skipped(r.skipped, cfg.schedule.max_point_symbols);

  for (const auto& rec : r.records)
    if (!rec.as_bound_ok) {
      std::fprintf(stderr, "cardinality bound violated at k = %u trial %u\n", rec.k, rec.trial);
      return kExitAssert;
    }
  return kExitOk;
}

int cmd_barron(const std::string& config_path, const std::string& output, Exec exec) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  const std::uint32_t trials = cfg.trials_specified ? cfg.trials : 10000;  // tail checks need mass
  const BarronResult r =
      run_barron_check(cfg.model, cfg.k, cfg.n, cfg.m_grid, trials, cfg.base_seed, exec);
  write_text_file(output, barron_csv(r, cfg.experiment_id, cfg.model.id));
  for (const auto& s : r.summary)
    std::printf("m = %s: frequency = %s, bound 2^-m = %s, se = %s -> %s\n",
                fmt_double(s.m).c_str(), fmt_double(s.frequency).c_str(),
                fmt_double(s.bound).c_str(), fmt_double(s.se).c_str(), s.ok ? "ok" : "VIOLATED");
  return r.all_ok ? kExitOk : kExitAssert;
}

int cmd_variational(const std::string& config_path, const std::string& output, Exec exec) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  const VariationalResult r = run_variational(cfg.model, cfg.schedule, cfg.trials, cfg.base_seed,
                                              cfg.budget, exec);
  write_text_file(output, variational_csv(r, cfg.experiment_id, cfg.model.id));
  for (const auto& row : r.summary)
    std::printf("k = %2u  n = %10llu  median |p - p_hat| = %s  mean = %s\n", row.k,
                static_cast<unsigned long long>(row.n), fmt_double(row.median).c_str(),
                fmt_double(row.mean).c_str());
  print_skipped(r.skipped, cfg.schedule.max_point_symbols);
  return kExitOk;
}

int cmd_theorem2(const std::string& config_path, const std::string& output, Exec exec) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  if (!cfg.model.is_mixture())
    std::printf("note: model is ergodic; H(X^k|I) equals H(k) and the bound is loose\n");

  auto cases = cfg.cases;
  if (cases.empty())  // every (k, p) with n = p k <= 16
    for (unsigned k = 1; k <= 16; ++k)
      for (std::uint64_t p = 1; p * k <= 16; ++p) cases.emplace_back(k, p);

  Theorem2Report all;
  std::vector<DictionaryBoundCheck> chain;
  for (const auto& [k, p] : cases) {
    const Theorem2Report r =
        verify_theorem2(cfg.model, k, p, cfg.m_grid, cfg.sigma_base, cfg.budget);
    all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
    all.all_hold = all.all_hold && r.all_hold;
    if (cfg.chain_check)
      for (double m : cfg.m_grid)
        chain.push_back(dictionary_expectation_bound(cfg.model, k, p * k, m, cfg.chain_trials,
                                                     cfg.base_seed, cfg.sigma_base, cfg.budget,
                                                     exec));
  }
  write_text_file(output, theorem2_csv(all, cfg.base_seed));

  double min_slack = std::numeric_limits<double>::infinity();
  for (const auto& row : all.rows) min_slack = std::min(min_slack, row.slack);
  std::printf("theorem 2: %zu instances, %s, min slack = %s\n", all.rows.size(),
              all.all_hold ? "all hold" : "VIOLATED", fmt_double(min_slack).c_str());

  // corollary trend: at fixed k and m the bound sinks toward 2/k as n grows
  {
    const unsigned k = cases.back().first;
    const double m = cfg.m_grid.back();
    const double h_cond = conditional_block_entropy(cfg.model, k, cfg.budget);
    std::printf("corollary trend at k = %u, m = %s (limit 2/k = %s):\n", k,
                fmt_double(m).c_str(), fmt_double(2.0 / k).c_str());
    for (std::uint64_t p : {4ull, 64ull, 1024ull, 16384ull, 262144ull}) {
      Theorem2Instance inst{k, p, m, cfg.model.alphabet, h_cond, 0.0};
      std::printf("  n = %10llu  rhs = %s\n", static_cast<unsigned long long>(p * k),
                  fmt_double(theorem2_rhs(inst, cfg.sigma_base)).c_str());
    }
  }

  bool chain_ok = true;
  if (cfg.chain_check) {
    write_text_file(output + ".chain.csv", dictionary_csv(chain, cfg.base_seed));
    for (const auto& c : chain) chain_ok = chain_ok && c.ok;
    std::printf("dictionary chain: %zu checks, %s\n", chain.size(),
                chain_ok ? "all hold" : "VIOLATED");
  }
  return all.all_hold && chain_ok ? kExitOk : kExitAssert;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plug-in entropy-rate estimation, k-block coding, and bound experiments"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "run single-threaded (results are identical either way)");

  std::string model_path, input, output = "out.csv", config_path, dist_csv;
  std::uint64_t n = 0, seed = 0;
  unsigned k = 1;
  std::uint32_t alphabet = 0;

  auto* sim = app.add_subcommand("simulate", "draw a sample from a model JSON into a byte file");
  sim->add_option("--model", model_path, "model JSON file")->required();
  sim->add_option("--n", n, "sample length")->required();
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--output", output, "output sample file")->required();

  auto* est = app.add_subcommand("estimate", "plug-in block entropy of a sample file");
  est->add_option("--input", input, "sample file, one symbol per byte")->required();
  est->add_option("--k", k, "block length")->required();
  est->add_option("--alphabet", alphabet, "alphabet size (default: max symbol + 1)");
  est->add_option("--dist-csv", dist_csv, "also write the block frequency table as CSV");

  auto* enc = app.add_subcommand("encode", "modified k-block code, sample file -> container");
  enc->add_option("--input", input, "sample file")->required();
  enc->add_option("--k", k, "block length")->required();
  enc->add_option("--alphabet", alphabet, "alphabet size (default: max symbol + 1)");
  enc->add_option("--output", output, "output container file")->required();

  auto* dec = app.add_subcommand("decode", "container -> sample file");
  dec->add_option("--input", input, "container file")->required();
  dec->add_option("--output", output, "output sample file")->required();

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config JSON")->required();
    sub->add_option("--output", output, "output CSV path")->required();
  };
  add_config(app.add_subcommand("regimes", "Monte Carlo H(k, X^n(k))/k under a sample-size rule"));
  add_config(app.add_subcommand("barron", "tail frequencies of K(k,X^n) + log2 P(X^n)"));
  add_config(app.add_subcommand("variational", "|p_k - p_k(., X^n(k))| under a sample-size rule"));
  add_config(app.add_subcommand("theorem2", "nonlinear block-entropy bound on mixtures"));

  try {
    app.parse(argc, argv);
    const Exec exec = exec_mode(serial);
    if (app.got_subcommand("simulate")) return cmd_simulate(model_path, n, seed, output);
    if (app.got_subcommand("estimate")) return cmd_estimate(input, k, alphabet, dist_csv, exec);
    if (app.got_subcommand("encode")) return cmd_encode(input, k, alphabet, output);
    if (app.got_subcommand("decode")) return cmd_decode(input, output);
    if (app.got_subcommand("regimes")) return cmd_regimes(config_path, output, exec);
    if (app.got_subcommand("barron")) return cmd_barron(config_path, output, exec);
    if (app.got_subcommand("variational")) return cmd_variational(config_path, output, exec);
    if (app.got_subcommand("theorem2")) return cmd_theorem2(config_path, output, exec);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return kExitConfig;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitAssert;
  }
  return kExitConfig;
}
