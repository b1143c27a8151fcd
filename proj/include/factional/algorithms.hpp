#pragma once

// Polynomial-time analysis of the revolt game from a degree sequence: the
// largest supported revolt per state, the Promise Revolt decision, and the
// smallest-revolt, high-degree and many-state variants.

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "factional/rational.hpp"
#include "factional/revolt_model.hpp"

namespace factional {

struct DegreeSequence {
  std::vector<int> degrees;

  DegreeSequence() = default;
  explicit DegreeSequence(std::vector<int> d);
  static DegreeSequence Constant(std::size_t n, int d);

  std::size_t size() const { return degrees.size(); }
  int max_degree() const;
  // Multiset view: distinct degree -> multiplicity.
  std::map<int, long> Histogram() const;
};

// Expected revolt fraction per state, aligned with the prior's state order.
struct RevoltSizes {
  std::vector<std::string> states;
  std::vector<Rational> x;

  const Rational& at(const std::string& state) const;
  bool operator==(const RevoltSizes&) const = default;
};

enum class PromiseOutcome { kOmega, kA, kEmpty, kNull };
const char* OutcomeName(PromiseOutcome outcome);  // "Omega", "A", "Empty", "Null"

struct PromiseInstance {
  DegreeSequence degseq;
  Prior prior;
  Rational mu_star;
  Rational epsilon;
  Rational delta;
};

// e_s over a set of types; independent of the degree sequence.
Rational ExpectedFraction(std::size_t state, std::span<const AgentType> types, const Prior& prior);

// e_s over a set of contexts: (1/n) * sum over the sequence of the probability
// that a vertex of that degree has a context in the set.
Rational ExpectedFraction(std::size_t state, const std::set<ContextClass>& contexts, const Prior& prior,
                          const DegreeSequence& degseq);

// e_s(contexts ∪ types). Contexts whose own type is already in `types` are
// subsumed rather than double counted.
Rational ExpectedFraction(std::size_t state, const std::set<ContextClass>& contexts,
                         std::span<const AgentType> types, const Prior& prior, const DegreeSequence& degseq);

// Likelihoods of every possible chi-centred context for each distinct degree
// of a sequence. Depends on the type distributions and state probabilities
// only, so one table serves any number of (p, mu) thresholds.
class ContextTable {
 public:
  struct Row {
    ContextClass context;
    std::vector<Rational> likelihood;  // per state
    std::vector<Rational> joint;       // likelihood * Pr[state]
    Rational evidence;                 // sum of joint
  };

  ContextTable(const DegreeSequence& degseq, const Prior& prior);

  std::size_t n() const { return n_; }
  std::size_t num_states() const { return num_states_; }
  // Rows for degree d; contexts impossible in every state are omitted.
  const std::vector<Row>& rows(int degree) const;
  const std::map<int, long>& histogram() const { return histogram_; }

  // Pr[state in subset | row]  >= p, decided exactly.
  static bool PosteriorAtLeast(const Row& row, const std::vector<bool>& subset, const Rational& p);
  static Rational Posterior(const Row& row, const std::vector<bool>& subset);

 private:
  std::size_t n_ = 0;
  std::size_t num_states_ = 0;
  std::map<int, long> histogram_;
  std::map<int, std::vector<Row>> rows_;
};

enum class Algorithm1Branch { kNoCandidates, kBothCandidates, kOnlyACandidateRevolt, kOnlyACandidateCollapse };
const char* BranchName(Algorithm1Branch branch);

// One comparison the algorithm actually made, kept so a user can judge how
// far the instance sits from every decision boundary.
struct ThresholdComparison {
  std::string label;
  Rational value;
  Rational against;
  bool passed = false;
};

struct Algorithm1Result {
  RevoltSizes sizes;
  Algorithm1Branch branch = Algorithm1Branch::kNoCandidates;
  std::vector<std::string> candidate_states;
  std::set<ContextClass> candidate_contexts;
  std::vector<ThresholdComparison> comparisons;
};

// Largest supported revolt per state for a two-state prior with states "A"
// and "B". Throws Error{kNotTwoStates} for other arities or labels and
// Error{kMislabeledStates} when only B is a candidate state or the result
// would have X_A < X_B.
RevoltSizes Algorithm1(const DegreeSequence& degseq, const Prior& prior);
Algorithm1Result Algorithm1Detailed(const DegreeSequence& degseq, const Prior& prior);
Algorithm1Result Algorithm1Detailed(const ContextTable& table, const Prior& prior);

// Runs Algorithm1; on a label error retries with A and B swapped. Sizes are
// always reported against the caller's state ids.
struct RelabeledResult {
  Algorithm1Result result;
  bool relabeled = false;
};
RelabeledResult Algorithm1AutoRelabel(const DegreeSequence& degseq, const Prior& prior);
RelabeledResult Algorithm1AutoRelabel(const ContextTable& table, const Prior& prior);

// Prior with the ids "A" and "B" exchanged.
Prior SwapStateLabels(const Prior& prior);

PromiseOutcome Algorithm2(const RevoltSizes& sizes, const Rational& mu_star);

struct PromiseResult {
  PromiseOutcome outcome = PromiseOutcome::kNull;
  Algorithm1Result raised;   // p + delta/3, mu + epsilon/3
  Algorithm1Result lowered;  // p - delta/3, mu - epsilon/3
  PromiseOutcome raised_outcome = PromiseOutcome::kNull;
  PromiseOutcome lowered_outcome = PromiseOutcome::kNull;
};

PromiseOutcome Algorithm3(const PromiseInstance& inst);
PromiseResult Algorithm3Detailed(const PromiseInstance& inst);
PromiseResult Algorithm3Detailed(const ContextTable& table, const PromiseInstance& inst);

// Smallest supported revolt per original state via the alpha/nu swap with
// thresholds (1 - p, 1 - mu).
RevoltSizes SmallestRevolt(const DegreeSequence& degseq, const Prior& prior);
// The transformed prior: A' from B and B' from A with alpha/nu masses swapped;
// each transformed state keeps the probability of the state it was built from.
Prior SmallestRevoltPrior(const Prior& prior);

struct GeneralResult {
  RevoltSizes sizes;
  int cutoff_degree = 0;      // degrees >= cutoff are high
  Rational high_fraction;     // share of the sequence at or above the cutoff
  bool high_ignored = false;  // high_fraction < epsilon: plain Algorithm1 was used
};

// Algorithm1 with high-degree chi agents (degree >= ceil(c * n^(1/3))) treated
// as knowing the state.
GeneralResult Algorithm1General(const DegreeSequence& degseq, const Prior& prior,
                                const Rational& cutoff_c = Rational(1), const Rational& epsilon = Rational(1, 100));

// ceil(c * n^(1/3)) computed exactly.
int HighDegreeCutoff(const Rational& c, std::size_t n);

enum class RemovalOrder { kBatch, kOneAtATime };

struct MultistateResult {
  RevoltSizes sizes;
  std::vector<std::string> initial_candidates;
  std::vector<std::string> survivors;
  int iterations = 0;
};

MultistateResult Algorithm1Multistate(const DegreeSequence& degseq, const Prior& prior,
                                      RemovalOrder order = RemovalOrder::kBatch);

std::vector<std::pair<Rational, PromiseOutcome>> EquilibriaMap(const DegreeSequence& degseq, const Prior& prior,
                                                               const std::vector<Rational>& mu_grid,
                                                               const Rational& epsilon, const Rational& delta);

}  // namespace factional
