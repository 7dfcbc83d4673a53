#pragma once

#include <string>
#include <vector>

#include "entrate/process_model.hpp"

namespace entrate::testing {

inline ProcessModel iid_model(std::vector<double> probs, std::string id = "iid") {
  ProcessModel m;
  m.alphabet = {static_cast<std::uint32_t>(probs.size())};
  m.id = std::move(id);
  m.variant = IidModel{std::move(probs)};
  return m;
}

inline ProcessModel fair_coin() { return iid_model({0.5, 0.5}, "fair-coin"); }

// IID point mass on `sym` over a binary alphabet.
inline ProcessModel delta_iid(Symbol sym, std::string id = "delta") {
  std::vector<double> p(2, 0.0);
  p[sym] = 1.0;
  return iid_model(std::move(p), std::move(id));
}

inline ProcessModel markov_model(std::vector<double> initial,
                                 std::vector<std::vector<double>> transition,
                                 std::string id = "markov") {
  ProcessModel m;
  m.alphabet = {static_cast<std::uint32_t>(initial.size())};
  m.id = std::move(id);
  m.variant = MarkovModel{std::move(initial), std::move(transition)};
  return m;
}

// 2-state symmetric chain, stationary uniform.
inline ProcessModel markov_flip(double flip) {
  return markov_model({0.5, 0.5}, {{1 - flip, flip}, {flip, 1 - flip}},
                      "markov-flip-" + std::to_string(flip));
}

// Doubly stochastic 3-state hidden chain collapsed to a binary output.
inline ProcessModel fom_model() {
  ProcessModel m;
  m.alphabet = {2};
  m.id = "fom";
  m.variant = FunctionOfMarkovModel{
      {1.0 / 3, 1.0 / 3, 1.0 / 3},
      {{0.2, 0.5, 0.3}, {0.3, 0.2, 0.5}, {0.5, 0.3, 0.2}},
      {0, 1, 1}};
  return m;
}

inline ProcessModel mixture(std::vector<std::pair<double, ProcessModel>> comps,
                            std::string id = "mixture") {
  ProcessModel m;
  m.alphabet = comps.front().second.alphabet;
  m.id = std::move(id);
  MixtureModel mix;
  for (auto& [w, c] : comps) mix.components.push_back({w, std::move(c)});
  m.variant = std::move(mix);
  return m;
}

inline ProcessModel mixture_deltas() {
  return mixture({{0.5, delta_iid(0)}, {0.5, delta_iid(1)}}, "mix-deltas");
}

inline ProcessModel mixture_coin_delta() {
  return mixture({{0.5, fair_coin()}, {0.5, delta_iid(0)}}, "mix-coin-delta");
}

inline ProcessModel mixture_coin_markov() {
  return mixture({{0.3, fair_coin()}, {0.7, markov_flip(0.1)}}, "mix-coin-markov");
}

inline u128 pack(std::initializer_list<Symbol> syms, Alphabet a) {
  u128 v = 0;
  for (Symbol s : syms) v = v * a.size + s;
  return v;
}

// "aabb" -> symbols {0,0,1,1} over the alphabet of letters used (min size 2).
inline Sample sample_from_string(const std::string& letters) {
  Sample s;
  Symbol mx = 0;
  for (char c : letters) {
    const Symbol v = static_cast<Symbol>(c - 'a');
    s.symbols.push_back(v);
    mx = std::max(mx, v);
  }
  s.alphabet.size = std::max<std::uint32_t>(2, mx + 1u);
  s.model_id = "literal";
  return s;
}

}  // namespace entrate::testing
