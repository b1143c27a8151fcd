#pragma once

// Finite epistemic models: belief operators, evident (p, mu)-belief and
// common (p, mu)-belief on a finite probability space with the full power set
// as sigma-algebra.

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "factional/rational.hpp"

namespace factional::epistemic {

class FiniteProbSpace {
 public:
  // Probabilities must be strictly positive and sum to exactly one.
  FiniteProbSpace(std::vector<std::string> outcomes, std::vector<Rational> prob);

  std::size_t size() const { return outcomes_.size(); }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<Rational>& prob() const { return prob_; }
  const Rational& prob(std::size_t outcome) const { return prob_[outcome]; }

  // Index of an outcome label; throws Error{kInvalidArgument} if unknown.
  std::size_t index_of(const std::string& label) const;

 private:
  std::vector<std::string> outcomes_;
  std::vector<Rational> prob_;
  std::unordered_map<std::string, std::size_t> index_;
};

// A subset of the outcomes of one space, as a bitset indexed by outcome.
class Event {
 public:
  Event() = default;
  explicit Event(std::size_t space_size) : members_(space_size) {}
  explicit Event(boost::dynamic_bitset<> members) : members_(std::move(members)) {}

  static Event Full(std::size_t space_size);
  static Event FromIndices(std::size_t space_size, const std::vector<std::size_t>& indices);
  static Event FromLabels(const FiniteProbSpace& space, const std::vector<std::string>& labels);
  // Bit i of `mask` selects outcome i; the space must have at most 64 outcomes.
  static Event FromMask(std::size_t space_size, unsigned long long mask);

  std::size_t space_size() const { return members_.size(); }
  bool contains(std::size_t outcome) const { return members_.test(outcome); }
  void insert(std::size_t outcome) { members_.set(outcome); }
  bool empty() const { return members_.none(); }
  std::size_t count() const { return members_.count(); }
  bool is_subset_of(const Event& other) const { return members_.is_subset_of(other.members_); }
  std::vector<std::size_t> indices() const;
  std::vector<std::string> labels(const FiniteProbSpace& space) const;
  const boost::dynamic_bitset<>& bits() const { return members_; }

  Event operator&(const Event& other) const { return Event(members_ & other.members_); }
  Event operator|(const Event& other) const { return Event(members_ | other.members_); }
  bool operator==(const Event& other) const { return members_ == other.members_; }
  bool operator<(const Event& other) const { return members_ < other.members_; }

 private:
  boost::dynamic_bitset<> members_;
};

class AgentPartition {
 public:
  // Cells must be nonempty, pairwise disjoint and cover 0..space_size-1.
  AgentPartition(std::size_t space_size, std::vector<std::vector<std::size_t>> cells);

  const std::vector<std::vector<std::size_t>>& cells() const { return cells_; }
  std::size_t cell_of(std::size_t outcome) const { return cell_of_[outcome]; }

 private:
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<std::size_t> cell_of_;
};

class EpistemicModel {
 public:
  EpistemicModel(FiniteProbSpace space, std::vector<std::string> agents,
                 std::vector<AgentPartition> partitions);

  const FiniteProbSpace& space() const { return space_; }
  const std::vector<std::string>& agents() const { return agents_; }
  std::size_t num_agents() const { return agents_.size(); }
  const AgentPartition& partition(std::size_t agent) const { return partitions_[agent]; }

  // Throws Error{kInvalidAgent} for an unknown id.
  std::size_t agent_index(const std::string& agent) const;

 private:
  FiniteProbSpace space_;
  std::vector<std::string> agents_;
  std::vector<AgentPartition> partitions_;
};

// B_i^p(E): outcomes whose information cell gives E conditional probability
// at least p.
Event BeliefOperator(const EpistemicModel& model, const std::string& agent, const Rational& p,
                     const Event& e);
Event BeliefOperator(const EpistemicModel& model, std::size_t agent, const Rational& p,
                     const Event& e);

// count >= mu * total, decided exactly.
bool MeetsFraction(std::size_t count, const Rational& mu, std::size_t total);

struct EvidentVerdict {
  bool evident = false;
  // Maximal witness set: every agent j with e ⊆ B_j^p(e), in model order.
  std::vector<std::string> witnesses;
};

EvidentVerdict IsEvidentBelief(const EpistemicModel& model, const Rational& p, const Rational& mu,
                               const Event& e);

struct HierarchyTrace {
  // levels[k] is F^{k+1}; the sequence stops at the first repeated iterate.
  std::vector<Event> levels;
  // Intersection of all levels n >= 1.
  Event result;
  // True when two consecutive levels were equal (as opposed to a longer
  // cycle).
  bool stabilized = false;
};

// One level of the hierarchy: outcomes where at least a mu fraction of agents
// p-believe `previous`.
Event FractionBelief(const EpistemicModel& model, const Rational& p, const Rational& mu,
                     const Event& previous);

// E^{p,mu}(F) = ⋂_{n>=1} F^n with F^0 = F.
Event CommonBeliefFixpoint(const EpistemicModel& model, const Rational& p, const Rational& mu,
                           const Event& f);
HierarchyTrace CommonBeliefHierarchy(const EpistemicModel& model, const Rational& p,
                                     const Rational& mu, const Event& f);

inline constexpr std::size_t kMaxSearchOutcomes = 20;

// F is common (p, mu)-belief at omega iff some evident (p, mu)-belief event
// containing omega is contained in B_j^p(F) for a mu fraction of agents.
// Enumerates all 2^|Ω| events; throws Error{kSpaceTooLarge} above
// kMaxSearchOutcomes outcomes.
bool CommonBeliefBySearch(const EpistemicModel& model, const Rational& p, const Rational& mu,
                          const Event& f, std::size_t omega);

// Same search for every outcome at once; the returned event holds the
// outcomes at which F is common (p, mu)-belief.
Event CommonBeliefSearchSet(const EpistemicModel& model, const Rational& p, const Rational& mu,
                            const Event& f);

}  // namespace factional::epistemic
