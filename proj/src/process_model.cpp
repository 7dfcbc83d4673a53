#include "entrate/process_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "entrate/exact.hpp"
#include "entrate/rng.hpp"

namespace entrate {

namespace {

constexpr double kProbSumTol = 1e-12;
constexpr double kStationaryTol = 1e-10;

void check_prob_vector(const std::vector<double>& p, std::size_t expected,
                       const std::string& path) {
  if (p.size() != expected)
    throw ConfigError(path + ": expected " + std::to_string(expected) + " entries, got " +
                      std::to_string(p.size()));
  double sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0) || !std::isfinite(p[i]))
      throw ConfigError(path + "[" + std::to_string(i) + "]: negative or non-finite probability");
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > kProbSumTol)
    throw ConfigError(path + ": probabilities sum to " + std::to_string(sum) + ", not 1");
}

void check_stationary(const std::vector<double>& pi,
                      const std::vector<std::vector<double>>& P, const std::string& path) {
  const std::size_t s = pi.size();
  for (std::size_t j = 0; j < s; ++j) {
    double acc = 0;
    for (std::size_t i = 0; i < s; ++i) acc += pi[i] * P[i][j];
    if (std::abs(acc - pi[j]) > kStationaryTol)
      throw ConfigError(path + ".initial: not stationary (pi P != pi at state " +
                        std::to_string(j) + ", residual " + std::to_string(acc - pi[j]) + ")");
  }
}

void check_transition(const std::vector<std::vector<double>>& P, std::size_t states,
                      const std::string& path) {
  if (P.size() != states)
    throw ConfigError(path + ".transition: expected " + std::to_string(states) + " rows");
  for (std::size_t i = 0; i < states; ++i)
    check_prob_vector(P[i], states, path + ".transition[" + std::to_string(i) + "]");
}

// Strong connectivity of the support of pi under positive-probability edges.
// With pi stationary, edges out of the support have probability zero.
bool irreducible_on_support(const std::vector<double>& pi,
                            const std::vector<std::vector<double>>& P) {
  const std::size_t s = pi.size();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < s; ++i)
    if (pi[i] > 0) support.push_back(i);
  if (support.empty()) return false;

  auto reach = [&](bool forward) {
    std::vector<bool> seen(s, false);
    std::vector<std::size_t> stack{support[0]};
    seen[support[0]] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < s; ++v) {
        const double w = forward ? P[u][v] : P[v][u];
        if (w > 0 && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(support.begin(), support.end(), [&](std::size_t i) { return seen[i]; });
  };
  return reach(true) && reach(false);
}

void validate_impl(const ProcessModel& model, const std::string& path, bool as_component) {
  model.alphabet.validate();
  const std::size_t a = model.alphabet.size;

  if (const auto* iid = std::get_if<IidModel>(&model.variant)) {
    check_prob_vector(iid->probs, a, path + ".probs");
  } else if (const auto* mk = std::get_if<MarkovModel>(&model.variant)) {
    check_prob_vector(mk->initial, a, path + ".initial");
    check_transition(mk->transition, a, path);
    check_stationary(mk->initial, mk->transition, path);
    if (as_component && !irreducible_on_support(mk->initial, mk->transition))
      throw ConfigError(path + ": mixture components must be ergodic; this Markov chain "
                        "is reducible on the support of its stationary distribution");
  } else if (const auto* fm = std::get_if<FunctionOfMarkovModel>(&model.variant)) {
    if (as_component)
      throw ConfigError(path + ": mixture components must be IID or Markov");
    const std::size_t states = fm->initial.size();
    if (states == 0) throw ConfigError(path + ".initial: empty");
    check_prob_vector(fm->initial, states, path + ".initial");
    check_transition(fm->transition, states, path);
    check_stationary(fm->initial, fm->transition, path);
    if (fm->output_map.size() != states)
      throw ConfigError(path + ".output_map: expected one symbol per hidden state");
    for (std::size_t i = 0; i < states; ++i)
      if (fm->output_map[i] >= a)
        throw ConfigError(path + ".output_map[" + std::to_string(i) + "]: symbol out of range");
  } else {
    const auto& mix = std::get<MixtureModel>(model.variant);
    if (as_component) throw ConfigError(path + ": nested mixtures are not supported");
    if (mix.components.empty()) throw ConfigError(path + ".components: empty");
    double sum = 0;
    for (std::size_t c = 0; c < mix.components.size(); ++c) {
      const auto& comp = mix.components[c];
      const std::string cpath = path + ".components[" + std::to_string(c) + "]";
      if (!(comp.weight >= 0) || !std::isfinite(comp.weight))
        throw ConfigError(cpath + ".weight: negative or non-finite");
      sum += comp.weight;
      if (comp.model.alphabet != model.alphabet)
        throw ConfigError(cpath + ".model: alphabet differs from the mixture alphabet");
      validate_impl(comp.model, cpath + ".model", true);
    }
    if (std::abs(sum - 1.0) > kProbSumTol)
      throw ConfigError(path + ".components: weights sum to " + std::to_string(sum) + ", not 1");
  }
}

std::vector<double> cumulative(std::span<const double> p) {
  std::vector<double> c(p.size());
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    c[i] = acc;
  }
  c.back() = std::max(c.back(), 1.0);  // guard the top bucket against rounding
  return c;
}

void sample_into(const ProcessModel& model, Rng& rng, std::span<Symbol> out);

void sample_iid(const IidModel& m, Rng& rng, std::span<Symbol> out) {
  const auto cum = cumulative(m.probs);
  for (auto& s : out) s = static_cast<Symbol>(draw_index(rng, cum));
}

void sample_markov(const MarkovModel& m, Rng& rng, std::span<Symbol> out) {
  if (out.empty()) return;
  const auto init_cum = cumulative(m.initial);
  std::vector<std::vector<double>> row_cum(m.transition.size());
  for (std::size_t i = 0; i < m.transition.size(); ++i) row_cum[i] = cumulative(m.transition[i]);
  std::uint32_t state = draw_index(rng, init_cum);
  out[0] = static_cast<Symbol>(state);
  for (std::size_t t = 1; t < out.size(); ++t) {
    state = draw_index(rng, row_cum[state]);
    out[t] = static_cast<Symbol>(state);
  }
}

void sample_fom(const FunctionOfMarkovModel& m, Rng& rng, std::span<Symbol> out) {
  if (out.empty()) return;
  const auto init_cum = cumulative(m.initial);
  std::vector<std::vector<double>> row_cum(m.transition.size());
  for (std::size_t i = 0; i < m.transition.size(); ++i) row_cum[i] = cumulative(m.transition[i]);
  std::uint32_t state = draw_index(rng, init_cum);
  out[0] = m.output_map[state];
  for (std::size_t t = 1; t < out.size(); ++t) {
    state = draw_index(rng, row_cum[state]);
    out[t] = m.output_map[state];
  }
}

void sample_into(const ProcessModel& model, Rng& rng, std::span<Symbol> out) {
  if (const auto* iid = std::get_if<IidModel>(&model.variant)) {
    sample_iid(*iid, rng, out);
  } else if (const auto* mk = std::get_if<MarkovModel>(&model.variant)) {
    sample_markov(*mk, rng, out);
  } else if (const auto* fm = std::get_if<FunctionOfMarkovModel>(&model.variant)) {
    sample_fom(*fm, rng, out);
  } else {
    // One component per realization: each sample path is a path of a single
    // ergodic component.
    const auto& mix = std::get<MixtureModel>(model.variant);
    std::vector<double> w(mix.components.size());
    for (std::size_t c = 0; c < w.size(); ++c) w[c] = mix.components[c].weight;
    const auto cum = cumulative(w);
    const std::uint32_t c = draw_index(rng, cum);
    sample_into(mix.components[c].model, rng, out);
  }
}

}  // namespace

void validate_model(const ProcessModel& model) { validate_impl(model, "model", false); }

Sample sample(const ProcessModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("sample length must be >= 1");
  validate_model(model);
  Sample s;
  s.alphabet = model.alphabet;
  s.seed = seed;
  s.model_id = model.id;
  s.symbols.resize(n);
  Rng rng(seed);
  sample_into(model, rng, s.symbols);
  return s;
}

double entropy_bits(std::span<const double> probs) {
  double h = 0;
  for (double p : probs)
    if (p > 0) h -= p * std::log2(p);
  return h;
}

RateBounds entropy_rate(const ProcessModel& model, unsigned fom_depth) {
  validate_model(model);
  if (const auto* iid = std::get_if<IidModel>(&model.variant)) {
    const double h = entropy_bits(iid->probs);
    return {h, h, true};
  }
  if (const auto* mk = std::get_if<MarkovModel>(&model.variant)) {
    double h = 0;
    for (std::size_t i = 0; i < mk->initial.size(); ++i)
      h += mk->initial[i] * entropy_bits(mk->transition[i]);
    return {h, h, true};
  }
  if (const auto* mix = std::get_if<MixtureModel>(&model.variant)) {
    double h = 0;
    for (const auto& c : mix->components) h += c.weight * entropy_rate(c.model).value();
    return {h, h, true};
  }

  // Function of Markov: no closed form. Bracket by conditional entropies,
  // H(X_{d+1} | X_1^d, S_1) <= h <= H(X_{d+1} | X_1^d).
  unsigned d = std::max(1u, fom_depth);
  while (d > 1 && std::pow(static_cast<double>(model.alphabet.size), d + 1) > (1 << 20)) --d;
  const double upper =
      block_entropy(model, d + 1, 1ull << 21) - block_entropy(model, d, 1ull << 21);

  const auto& fm = std::get<FunctionOfMarkovModel>(model.variant);
  double lower = 0;
  for (std::size_t s = 0; s < fm.initial.size(); ++s) {
    if (fm.initial[s] == 0) continue;
    ProcessModel pinned = model;
    auto& pf = std::get<FunctionOfMarkovModel>(pinned.variant);
    std::fill(pf.initial.begin(), pf.initial.end(), 0.0);
    pf.initial[s] = 1.0;
    // entropy of the law started from state s; stationarity does not hold for
    // the pinned chain, which is fine: we only need conditional entropies.
    const double hs1 = exact_block_law(pinned, d + 1, 1ull << 21).entropy_bits();
    const double hs0 = exact_block_law(pinned, d, 1ull << 21).entropy_bits();
    lower += fm.initial[s] * (hs1 - hs0);
  }
  return {lower, upper, false};
}

// --- JSON ---------------------------------------------------------------

namespace {

using nlohmann::json;

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key + ": missing");
  return *it;
}

double need_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

std::uint64_t need_uint(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ConfigError(path + ": expected a nonnegative integer");
}

std::vector<double> need_prob_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(need_number(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

std::vector<std::vector<double>> need_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of rows");
  std::vector<std::vector<double>> m;
  m.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    m.push_back(need_prob_array(j[i], path + "[" + std::to_string(i) + "]"));
  return m;
}

ProcessModel parse_model_impl(const json& j, const std::string& path,
                              std::optional<Alphabet> inherited) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  ProcessModel m;
  if (auto it = j.find("alphabet_size"); it != j.end()) {
    m.alphabet.size = static_cast<std::uint32_t>(need_uint(*it, path + ".alphabet_size"));
  } else if (inherited) {
    m.alphabet = *inherited;
  } else {
    throw ConfigError(path + ".alphabet_size: missing");
  }
  m.alphabet.validate();
  if (auto it = j.find("id"); it != j.end()) {
    if (!it->is_string()) throw ConfigError(path + ".id: expected a string");
    m.id = it->get<std::string>();
  }

  const json& var = need(j, "variant", path);
  if (!var.is_string()) throw ConfigError(path + ".variant: expected a string");
  const std::string v = var.get<std::string>();

  if (v == "iid") {
    IidModel iid;
    iid.probs = need_prob_array(need(j, "probs", path), path + ".probs");
    m.variant = std::move(iid);
  } else if (v == "markov") {
    MarkovModel mk;
    mk.initial = need_prob_array(need(j, "initial", path), path + ".initial");
    mk.transition = need_matrix(need(j, "transition", path), path + ".transition");
    m.variant = std::move(mk);
  } else if (v == "function_of_markov") {
    FunctionOfMarkovModel fm;
    fm.initial = need_prob_array(need(j, "initial", path), path + ".initial");
    fm.transition = need_matrix(need(j, "transition", path), path + ".transition");
    const json& om = need(j, "output_map", path);
    if (!om.is_array()) throw ConfigError(path + ".output_map: expected an array");
    for (std::size_t i = 0; i < om.size(); ++i) {
      const std::string ipath = path + ".output_map[" + std::to_string(i) + "]";
      const std::uint64_t s = need_uint(om[i], ipath);
      if (s >= m.alphabet.size) throw ConfigError(ipath + ": symbol out of range");
      fm.output_map.push_back(static_cast<Symbol>(s));
    }
    m.variant = std::move(fm);
  } else if (v == "mixture") {
    MixtureModel mix;
    const json& comps = need(j, "components", path);
    if (!comps.is_array()) throw ConfigError(path + ".components: expected an array");
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const std::string cpath = path + ".components[" + std::to_string(c) + "]";
      MixtureComponent comp;
      comp.weight = need_number(need(comps[c], "weight", cpath), cpath + ".weight");
      comp.model = parse_model_impl(need(comps[c], "model", cpath), cpath + ".model", m.alphabet);
      mix.components.push_back(std::move(comp));
    }
    m.variant = std::move(mix);
  } else {
    throw ConfigError(path + ".variant: unknown variant \"" + v + "\"");
  }

  if (m.id.empty()) m.id = v;
  validate_model(m);
  return m;
}

}  // namespace

ProcessModel parse_model(const nlohmann::json& j, const std::string& path) {
  return parse_model_impl(j, path, std::nullopt);
}

nlohmann::json model_to_json(const ProcessModel& model) {
  json j;
  j["alphabet_size"] = model.alphabet.size;
  if (!model.id.empty()) j["id"] = model.id;
  if (const auto* iid = std::get_if<IidModel>(&model.variant)) {
    j["variant"] = "iid";
    j["probs"] = iid->probs;
  } else if (const auto* mk = std::get_if<MarkovModel>(&model.variant)) {
    j["variant"] = "markov";
    j["initial"] = mk->initial;
    j["transition"] = mk->transition;
  } else if (const auto* fm = std::get_if<FunctionOfMarkovModel>(&model.variant)) {
    j["variant"] = "function_of_markov";
    j["initial"] = fm->initial;
    j["transition"] = fm->transition;
    j["output_map"] = json::array();
    for (Symbol s : fm->output_map) j["output_map"].push_back(static_cast<unsigned>(s));
  } else {
    const auto& mix = std::get<MixtureModel>(model.variant);
    j["variant"] = "mixture";
    j["components"] = json::array();
    for (const auto& c : mix.components)
      j["components"].push_back(json{{"weight", c.weight}, {"model", model_to_json(c.model)}});
  }
  return j;
}

ProcessModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("model file " + path + ": " + e.what());
  }
  return parse_model(j);
}

void save_sample(std::ostream& out, const Sample& s) {
  out.write(reinterpret_cast<const char*>(s.symbols.data()),
            static_cast<std::streamsize>(s.symbols.size()));
}

void save_sample_file(const std::string& path, const Sample& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  save_sample(out, s);
}

Sample load_sample(std::istream& in, std::optional<Alphabet> alphabet) {
  Sample s;
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  s.symbols.assign(bytes.begin(), bytes.end());
  if (alphabet) {
    alphabet->validate();
    for (Symbol sym : s.symbols)
      if (sym >= alphabet->size)
        throw ConfigError("sample symbol " + std::to_string(sym) +
                          " out of range for alphabet size " + std::to_string(alphabet->size));
    s.alphabet = *alphabet;
  } else {
    Symbol mx = 0;
    for (Symbol sym : s.symbols) mx = std::max(mx, sym);
    s.alphabet.size = std::max<std::uint32_t>(2, static_cast<std::uint32_t>(mx) + 1);
  }
  return s;
}

Sample load_sample_file(const std::string& path, std::optional<Alphabet> alphabet) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open sample file: " + path);
  return load_sample(in, alphabet);
}

}  // namespace entrate
