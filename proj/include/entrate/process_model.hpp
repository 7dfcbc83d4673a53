#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "entrate/alphabet.hpp"

#include "json.hpp"

namespace entrate {

struct IidModel {
  std::vector<double> probs;  // one per symbol
};

struct MarkovModel {
  std::vector<double> initial;                    // stationary: pi P = pi
  std::vector<std::vector<double>> transition;    // row-stochastic
};

// Deterministic function of a hidden Markov chain: state s emits output_map[s].
struct FunctionOfMarkovModel {
  std::vector<double> initial;
  std::vector<std::vector<double>> transition;
  std::vector<Symbol> output_map;  // one symbol per hidden state
};

struct MixtureComponent;

struct MixtureModel {
  std::vector<MixtureComponent> components;
};

struct ProcessModel {
  Alphabet alphabet;
  std::string id;
  std::variant<IidModel, MarkovModel, FunctionOfMarkovModel, MixtureModel> variant;

  bool is_mixture() const { return std::holds_alternative<MixtureModel>(variant); }
};

struct MixtureComponent {
  double weight = 0;
  ProcessModel model;  // IID or irreducible Markov, same alphabet
};

struct Sample {
  Alphabet alphabet;
  std::vector<Symbol> symbols;
  std::uint64_t seed = 0;
  std::string model_id;

  std::size_t size() const { return symbols.size(); }
};

// Throws ConfigError naming the offending field. Tolerances: probability
// vectors sum to 1 within 1e-12; stationarity pi P = pi within 1e-10.
void validate_model(const ProcessModel& model);

Sample sample(const ProcessModel& model, std::size_t n, std::uint64_t seed);

struct RateBounds {
  double lower = 0;
  double upper = 0;
  bool exact = true;  // false only for FunctionOfMarkov (no closed form)

  double value() const { return lower; }
};

// IID: H(p). Markov: -sum_i pi_i sum_j P_ij log2 P_ij. Mixture: weighted
// average of component rates. FunctionOfMarkov: bracketing bounds
// H(X_{d+1} | X_1^d, S_1) <= h <= H(X_{d+1} | X_1^d) at depth d.
RateBounds entropy_rate(const ProcessModel& model, unsigned fom_depth = 10);

// --- JSON model documents -------------------------------------------------

ProcessModel parse_model(const nlohmann::json& j, const std::string& path = "model");
nlohmann::json model_to_json(const ProcessModel& model);
ProcessModel load_model_file(const std::string& path);

// --- raw sample files: one symbol per byte (valid for |X| <= 256) ----------

void save_sample(std::ostream& out, const Sample& s);
void save_sample_file(const std::string& path, const Sample& s);
// Alphabet inferred as max(symbol)+1 (at least 2) unless given.
Sample load_sample(std::istream& in, std::optional<Alphabet> alphabet = {});
Sample load_sample_file(const std::string& path, std::optional<Alphabet> alphabet = {});

// Shannon entropy of a probability vector, in bits (0 log 0 = 0).
double entropy_bits(std::span<const double> probs);

}  // namespace entrate
