#pragma once

// The revolt game as data: agent types, priors over states, identity-agnostic
// contexts and their exact likelihoods and posteriors, and payoffs.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "factional/rational.hpp"

namespace factional {

enum class AgentType { kAlpha = 0, kNu = 1, kChi = 2 };
inline constexpr std::size_t kNumTypes = 3;
inline constexpr std::array<AgentType, kNumTypes> kAllTypes = {AgentType::kAlpha, AgentType::kNu,
                                                               AgentType::kChi};

inline std::size_t Index(AgentType t) { return static_cast<std::size_t>(t); }
const char* TypeName(AgentType t);  // "alpha", "nu", "chi"
AgentType ParseType(const std::string& name);

enum class Action { kRevolt, kYield };

class TypeDistribution {
 public:
  TypeDistribution() = default;
  TypeDistribution(Rational alpha, Rational nu, Rational chi);

  const Rational& operator[](AgentType t) const { return probs_[Index(t)]; }
  // Validates non-negativity and that the masses sum to exactly one.
  void Validate(const std::string& where) const;
  bool operator==(const TypeDistribution& other) const { return probs_ == other.probs_; }

 private:
  std::array<Rational, kNumTypes> probs_;
};

struct StateSpec {
  std::string id;
  Rational prob;
  TypeDistribution types;
};

// The common prior: thresholds (p, mu), per-state type distributions and the
// state distribution. States keep their declaration order; the two-state
// algorithms address them by the labels "A" and "B".
class Prior {
 public:
  Prior(Rational p, Rational mu, std::vector<StateSpec> states);

  const Rational& p() const { return p_; }
  const Rational& mu() const { return mu_; }
  const std::vector<StateSpec>& states() const { return states_; }
  std::size_t num_states() const { return states_.size(); }
  const StateSpec& state(std::size_t s) const { return states_[s]; }

  // Throws Error{kInvalidArgument} for an unknown id.
  std::size_t state_index(const std::string& id) const;

  // Same distributions, new thresholds (re-validated).
  Prior WithThresholds(Rational p, Rational mu) const;

 private:
  Rational p_;
  Rational mu_;
  std::vector<StateSpec> states_;
};

// The canonical two-state example: p = 2/5, mu = 1/2, equally likely states,
// A: chi 4/5, nu 1/5; B: chi 1/5, nu 4/5; no alpha agents.
Prior MotivatingPrior();

// An agent's own type plus the counts of its neighbours' types.
struct ContextClass {
  int degree = 0;
  AgentType own_type = AgentType::kChi;
  std::array<int, kNumTypes> neighbor_counts{};

  int count(AgentType t) const { return neighbor_counts[Index(t)]; }
  auto operator<=>(const ContextClass&) const = default;
};

ContextClass MakeContext(AgentType own, int alpha_neighbors, int nu_neighbors, int chi_neighbors);

// Pr[own type] * multinomial(degree; counts) * prod Pr[type]^count under the
// state's type distribution.
Rational ContextLikelihood(const ContextClass& c, const std::string& state, const Prior& prior);
Rational ContextLikelihood(const ContextClass& c, std::size_t state, const Prior& prior);

// Bayes posterior over states (aligned with prior.states()); throws
// Error{kImpossibleContext} if every state gives the context zero likelihood.
std::vector<Rational> StatePosterior(const ContextClass& c, const Prior& prior);

// Every composition of `degree` neighbours into the three types, for one own
// type or for all three.
std::vector<ContextClass> EnumerateContexts(int degree, std::optional<AgentType> own_type = std::nullopt);

// f^alpha, f^nu, f^chi with revolt_count >= mu * n compared exactly.
Rational Payoff(AgentType t, Action own_action, long revolt_count, long n, const Prior& prior);

// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
class ConcreteGraph {
 public:
  explicit ConcreteGraph(int n = 0);
  ConcreteGraph(int n, const std::vector<std::pair<int, int>>& edges);

  int num_vertices() const { return n_; }
  std::size_t num_edges() const { return num_edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  bool has_edge(int u, int v) const;

  // Rejects self-loops and duplicates with Error{kInvalidArgument}.
  void AddEdge(int u, int v);
  void RemoveEdge(int u, int v);

  std::vector<int> Degrees() const;
  std::vector<std::pair<int, int>> Edges() const;  // u < v, sorted

 private:
  int n_;
  std::size_t num_edges_ = 0;
  std::vector<std::vector<int>> adjacency_;
};

}  // namespace factional
