#pragma once

// Exhaustive ground truth on small concrete graphs: threshold-strategy
// equilibria computed from exact conditional probabilities, the ex ante
// Revolt decision, and the Clique reduction.

#include <cstddef>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "factional/rational.hpp"
#include "factional/revolt_model.hpp"

namespace factional {

inline constexpr std::uint64_t kDefaultOracleBudget = 200000;

// Enumeration cost of a graph: 3^n full assignments plus 3^(deg+1) local
// views per vertex.
std::uint64_t OracleCost(const ConcreteGraph& graph);

// What a vertex observes: the types on its closed neighbourhood, the vertex
// itself first and then its neighbours in increasing id order.
struct LocalView {
  int vertex = 0;
  std::vector<AgentType> types;

  ContextClass context() const;
  auto operator<=>(const LocalView&) const = default;
};

struct StrategyProfile {
  // Every revolting (vertex, view) pair with positive probability, including
  // the alpha-occupied ones.
  std::set<LocalView> revolt_set;
  int iterations = 0;
  // Revolting sets after each round, so the fixpoint can be audited.
  std::vector<std::size_t> trace;

  bool revolts(const LocalView& view) const { return revolt_set.count(view) > 0; }
  // Identity-agnostic projection: (vertex, context) pairs with some
  // revolting view.
  std::set<std::pair<int, ContextClass>> ContextPairs() const;
};

// All assignments of types to vertices with their prior weights, enumerated
// once and reused by every query on the same (graph, prior).
class OracleModel {
 public:
  OracleModel(const ConcreteGraph& graph, const Prior& prior, std::uint64_t budget = kDefaultOracleBudget);

  const ConcreteGraph& graph() const { return graph_; }
  const Prior& prior() const { return prior_; }

  StrategyProfile Greatest() const;
  StrategyProfile Least() const;

  // Pr[at least mu*n agents revolt | the view], where the view's own agent is
  // counted as revolting and everyone else follows `profile`.
  Rational RevoltProbability(const StrategyProfile& profile, const LocalView& view) const;

  // Ex ante Pr[|R| >= mu_star * n] under `profile`.
  Rational SupportProbability(const StrategyProfile& profile, const Rational& mu_star) const;

  // E[|R| / n | state] under `profile`, aligned with the prior's states.
  std::vector<Rational> ExpectedRevoltFraction(const StrategyProfile& profile) const;

  // Every chi view with positive probability.
  std::vector<LocalView> ChiViews() const;

 private:
  struct Assignment {
    std::uint32_t code;            // base-3 digits, vertex 0 least significant
    std::vector<BigInt> weight;    // per state, scaled by scale_
    BigInt total;                  // sum of weight
  };

  std::uint32_t ViewCode(std::uint32_t assignment, int vertex) const;
  LocalView DecodeView(int vertex, std::uint32_t view_code) const;
  std::vector<std::vector<bool>> ToTable(const StrategyProfile& profile) const;
  StrategyProfile FromTable(const std::vector<std::vector<bool>>& table) const;
  // Per assignment, number of revolters under the table.
  std::vector<int> RevoltCounts(const std::vector<std::vector<bool>>& table) const;
  // For every (vertex, chi view): does the view meet p when the vertex revolts?
  std::vector<std::vector<bool>> ThresholdMet(const std::vector<std::vector<bool>>& table) const;
  void CheckSoundness(const std::vector<std::vector<bool>>& table) const;

  ConcreteGraph graph_;
  Prior prior_;
  int n_;
  BigInt threshold_;  // smallest revolt count meeting mu*n
  Rational scale_;    // true probability = weight / scale_
  std::vector<Assignment> assignments_;
  std::vector<std::uint32_t> pow3_;
  // Per vertex and view code: total weight of assignments showing that view.
  std::vector<std::vector<BigInt>> view_weight_;
};

StrategyProfile GreatestEquilibrium(const ConcreteGraph& graph, const Prior& prior,
                                    std::uint64_t budget = kDefaultOracleBudget);
StrategyProfile LeastEquilibrium(const ConcreteGraph& graph, const Prior& prior,
                                 std::uint64_t budget = kDefaultOracleBudget);

struct RevoltInstance {
  ConcreteGraph graph;
  Prior prior;
  Rational mu_star;
  Rational q_star;
};

struct RevoltDecision {
  bool supported = false;
  Rational probability;
};

RevoltDecision DecideRevolt(const RevoltInstance& inst, std::uint64_t budget = kDefaultOracleBudget);

// p = 1, mu = mu* = k/n, q* = (99/100)^k / 2, uniform states; in A chi has mass
// 99/100 and nu 1/100, in B every agent is nu.
RevoltInstance CliqueReduction(const ConcreteGraph& graph, int k);

bool CliqueExists(const ConcreteGraph& graph, int k);

// One representative of every isomorphism class of simple graphs on n
// vertices (n <= 7).
std::vector<ConcreteGraph> GraphCatalog(int n);

}  // namespace factional
