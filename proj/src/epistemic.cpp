#include "factional/epistemic.hpp"

#include <algorithm>
#include <set>

#include "factional/error.hpp"

namespace factional::epistemic {

FiniteProbSpace::FiniteProbSpace(std::vector<std::string> outcomes, std::vector<Rational> prob)
    : outcomes_(std::move(outcomes)), prob_(std::move(prob)) {
  if (outcomes_.empty()) Fail(ErrorKind::kInvalidArgument, "probability space has no outcomes");
  if (outcomes_.size() != prob_.size()) {
    Fail(ErrorKind::kInvalidArgument, "outcome and probability counts differ");
  }
  Rational total = 0;
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (sgn(prob_[i]) <= 0) {
      Fail(ErrorKind::kInvalidArgument, "outcome '" + outcomes_[i] + "' has non-positive probability");
    }
    if (!index_.emplace(outcomes_[i], i).second) {
      Fail(ErrorKind::kInvalidArgument, "duplicate outcome '" + outcomes_[i] + "'");
    }
    total += prob_[i];
  }
  if (total != 1) {
    Fail(ErrorKind::kInvalidArgument, "probabilities sum to " + FormatRational(total) + ", not 1");
  }
}

std::size_t FiniteProbSpace::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) Fail(ErrorKind::kInvalidArgument, "unknown outcome '" + label + "'");
  return it->second;
}

Event Event::Full(std::size_t space_size) {
  Event e(space_size);
  e.members_.set();
  return e;
}

Event Event::FromIndices(std::size_t space_size, const std::vector<std::size_t>& indices) {
  Event e(space_size);
  for (std::size_t i : indices) {
    if (i >= space_size) Fail(ErrorKind::kInvalidArgument, "event member outside the space");
    e.members_.set(i);
  }
  return e;
}

Event Event::FromLabels(const FiniteProbSpace& space, const std::vector<std::string>& labels) {
  Event e(space.size());
  for (const auto& label : labels) e.members_.set(space.index_of(label));
  return e;
}

Event Event::FromMask(std::size_t space_size, unsigned long long mask) {
  Event e(space_size);
  for (std::size_t i = 0; i < space_size && i < 64; ++i) {
    if ((mask >> i) & 1ULL) e.members_.set(i);
  }
  return e;
}

std::vector<std::size_t> Event::indices() const {
  std::vector<std::size_t> out;
  for (auto i = members_.find_first(); i != boost::dynamic_bitset<>::npos; i = members_.find_next(i)) {
    out.push_back(i);
  }
  return out;
}

std::vector<std::string> Event::labels(const FiniteProbSpace& space) const {
  std::vector<std::string> out;
  for (std::size_t i : indices()) out.push_back(space.outcomes()[i]);
  return out;
}

AgentPartition::AgentPartition(std::size_t space_size, std::vector<std::vector<std::size_t>> cells)
    : cells_(std::move(cells)), cell_of_(space_size, space_size) {
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c].empty()) Fail(ErrorKind::kInvalidArgument, "partition has an empty cell");
    for (std::size_t outcome : cells_[c]) {
      if (outcome >= space_size) Fail(ErrorKind::kInvalidArgument, "partition cell outside the space");
      if (cell_of_[outcome] != space_size) {
        Fail(ErrorKind::kInvalidArgument, "partition cells overlap");
      }
      cell_of_[outcome] = c;
    }
  }
  for (std::size_t outcome = 0; outcome < space_size; ++outcome) {
    if (cell_of_[outcome] == space_size) {
      Fail(ErrorKind::kInvalidArgument, "partition does not cover every outcome");
    }
  }
}

EpistemicModel::EpistemicModel(FiniteProbSpace space, std::vector<std::string> agents,
                               std::vector<AgentPartition> partitions)
    : space_(std::move(space)), agents_(std::move(agents)), partitions_(std::move(partitions)) {
  if (agents_.empty()) Fail(ErrorKind::kInvalidArgument, "model has no agents");
  if (agents_.size() != partitions_.size()) {
    Fail(ErrorKind::kInvalidArgument, "need exactly one partition per agent");
  }
  std::set<std::string> seen;
  for (const auto& a : agents_) {
    if (!seen.insert(a).second) Fail(ErrorKind::kInvalidArgument, "duplicate agent '" + a + "'");
  }
  for (const auto& part : partitions_) {
    for (const auto& cell : part.cells()) {
      for (std::size_t outcome : cell) {
        if (outcome >= space_.size()) {
          Fail(ErrorKind::kInvalidArgument, "partition defined over a different space");
        }
      }
    }
  }
}

std::size_t EpistemicModel::agent_index(const std::string& agent) const {
  auto it = std::find(agents_.begin(), agents_.end(), agent);
  if (it == agents_.end()) Fail(ErrorKind::kInvalidAgent, "unknown agent '" + agent + "'");
  return static_cast<std::size_t>(it - agents_.begin());
}

Event BeliefOperator(const EpistemicModel& model, const std::string& agent, const Rational& p,
                     const Event& e) {
  return BeliefOperator(model, model.agent_index(agent), p, e);
}

Event BeliefOperator(const EpistemicModel& model, std::size_t agent, const Rational& p,
                     const Event& e) {
  if (agent >= model.num_agents()) Fail(ErrorKind::kInvalidAgent, "agent index out of range");
  const auto& space = model.space();
  if (e.space_size() != space.size()) {
    Fail(ErrorKind::kInvalidArgument, "event does not belong to the model's space");
  }
  Event out(space.size());
  for (const auto& cell : model.partition(agent).cells()) {
    Rational cell_mass = 0;
    Rational hit_mass = 0;
    for (std::size_t outcome : cell) {
      cell_mass += space.prob(outcome);
      if (e.contains(outcome)) hit_mass += space.prob(outcome);
    }
    if (hit_mass >= p * cell_mass) {
      for (std::size_t outcome : cell) out.insert(outcome);
    }
  }
  return out;
}

bool MeetsFraction(std::size_t count, const Rational& mu, std::size_t total) {
  return Rational(static_cast<unsigned long>(count)) >= mu * static_cast<unsigned long>(total);
}

EvidentVerdict IsEvidentBelief(const EpistemicModel& model, const Rational& p, const Rational& mu,
                               const Event& e) {
  EvidentVerdict verdict;
  for (std::size_t j = 0; j < model.num_agents(); ++j) {
    if (e.is_subset_of(BeliefOperator(model, j, p, e))) verdict.witnesses.push_back(model.agents()[j]);
  }
  verdict.evident = MeetsFraction(verdict.witnesses.size(), mu, model.num_agents());
  return verdict;
}

Event FractionBelief(const EpistemicModel& model, const Rational& p, const Rational& mu,
                     const Event& previous) {
  const std::size_t n = model.space().size();
  std::vector<std::size_t> believers(n, 0);
  for (std::size_t j = 0; j < model.num_agents(); ++j) {
    Event b = BeliefOperator(model, j, p, previous);
    for (std::size_t w = 0; w < n; ++w) {
      if (b.contains(w)) ++believers[w];
    }
  }
  Event out(n);
  for (std::size_t w = 0; w < n; ++w) {
    if (MeetsFraction(believers[w], mu, model.num_agents())) out.insert(w);
  }
  return out;
}

HierarchyTrace CommonBeliefHierarchy(const EpistemicModel& model, const Rational& p,
                                     const Rational& mu, const Event& f) {
  if (f.space_size() != model.space().size()) {
    Fail(ErrorKind::kInvalidArgument, "event does not belong to the model's space");
  }
  HierarchyTrace trace;
  std::set<Event> seen;
  Event current = f;
  // The level map is deterministic on a finite set of events, so the sequence
  // is eventually periodic; stop at the first repeated level.
  while (true) {
    Event next = FractionBelief(model, p, mu, current);
    if (seen.count(next)) {
      trace.stabilized = !trace.levels.empty() && next == trace.levels.back();
      break;
    }
    seen.insert(next);
    trace.levels.push_back(next);
    current = std::move(next);
  }
  trace.result = trace.levels.front();
  for (const auto& level : trace.levels) trace.result = trace.result & level;
  return trace;
}

Event CommonBeliefFixpoint(const EpistemicModel& model, const Rational& p, const Rational& mu,
                           const Event& f) {
  return CommonBeliefHierarchy(model, p, mu, f).result;
}

namespace {

// Integer weights over a common denominator so each subset test is a sum of
// integers rather than of rationals.
struct IntegerBeliefTable {
  std::vector<BigInt> weight;  // per outcome
  BigInt p_num, p_den;

  IntegerBeliefTable(const FiniteProbSpace& space, const Rational& p) {
    BigInt lcd = 1;
    for (const auto& q : space.prob()) lcd = lcm(lcd, q.get_den());
    for (const auto& q : space.prob()) weight.push_back(q.get_num() * (lcd / q.get_den()));
    p_num = p.get_num();
    p_den = p.get_den();
  }

  unsigned long long Believe(const AgentPartition& part, unsigned long long event) const {
    unsigned long long out = 0;
    for (const auto& cell : part.cells()) {
      BigInt cell_w = 0, hit_w = 0;
      unsigned long long cell_mask = 0;
      for (std::size_t w : cell) {
        cell_w += weight[w];
        cell_mask |= 1ULL << w;
        if ((event >> w) & 1ULL) hit_w += weight[w];
      }
      if (hit_w * p_den >= p_num * cell_w) out |= cell_mask;
    }
    return out;
  }
};

}  // namespace

Event CommonBeliefSearchSet(const EpistemicModel& model, const Rational& p, const Rational& mu,
                            const Event& f) {
  const std::size_t n = model.space().size();
  if (n > kMaxSearchOutcomes) {
    Fail(ErrorKind::kSpaceTooLarge, "event search needs at most " + std::to_string(kMaxSearchOutcomes) +
                                        " outcomes, model has " + std::to_string(n));
  }
  IntegerBeliefTable table(model.space(), p);
  unsigned long long f_mask = 0;
  for (std::size_t w : f.indices()) f_mask |= 1ULL << w;

  const std::size_t agents = model.num_agents();
  std::vector<unsigned long long> believes_f(agents);
  for (std::size_t j = 0; j < agents; ++j) believes_f[j] = table.Believe(model.partition(j), f_mask);

  unsigned long long covered = 0;
  const unsigned long long full = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  for (unsigned long long e = 1; e <= full; ++e) {
    if ((e | covered) == covered) continue;  // adds nothing new
    std::size_t about_f = 0;
    for (std::size_t j = 0; j < agents; ++j) {
      if ((e & believes_f[j]) == e) ++about_f;
    }
    if (!MeetsFraction(about_f, mu, agents)) continue;
    std::size_t evident = 0;
    for (std::size_t j = 0; j < agents; ++j) {
      if ((e & table.Believe(model.partition(j), e)) == e) ++evident;
    }
    if (MeetsFraction(evident, mu, agents)) covered |= e;
  }
  return Event::FromMask(n, covered);
}

bool CommonBeliefBySearch(const EpistemicModel& model, const Rational& p, const Rational& mu,
                          const Event& f, std::size_t omega) {
  if (omega >= model.space().size()) Fail(ErrorKind::kInvalidArgument, "outcome index out of range");
  return CommonBeliefSearchSet(model, p, mu, f).contains(omega);
}

}  // namespace factional::epistemic
