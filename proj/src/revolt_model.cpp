#include "factional/revolt_model.hpp"

#include <algorithm>
#include <set>

#include "factional/error.hpp"

namespace factional {

const char* TypeName(AgentType t) {
  switch (t) {
    case AgentType::kAlpha: return "alpha";
    case AgentType::kNu: return "nu";
    case AgentType::kChi: return "chi";
  }
  return "?";
}

AgentType ParseType(const std::string& name) {
  if (name == "alpha") return AgentType::kAlpha;
  if (name == "nu") return AgentType::kNu;
  if (name == "chi") return AgentType::kChi;
  Fail(ErrorKind::kParse, "unknown agent type '" + name + "' (expected alpha, nu or chi)");
}

TypeDistribution::TypeDistribution(Rational alpha, Rational nu, Rational chi)
    : probs_{std::move(alpha), std::move(nu), std::move(chi)} {}

void TypeDistribution::Validate(const std::string& where) const {
  Rational total = 0;
  for (AgentType t : kAllTypes) {
    if (sgn(probs_[Index(t)]) < 0) {
      Fail(ErrorKind::kInvalidArgument, where + ": negative mass for type " + TypeName(t));
    }
    total += probs_[Index(t)];
  }
  if (total != 1) {
    Fail(ErrorKind::kInvalidArgument, where + ": type masses sum to " + FormatRational(total) + ", not 1");
  }
}

Prior::Prior(Rational p, Rational mu, std::vector<StateSpec> states)
    : p_(std::move(p)), mu_(std::move(mu)), states_(std::move(states)) {
  if (p_ < 0 || p_ > 1) Fail(ErrorKind::kInvalidArgument, "p must lie in [0, 1], got " + FormatRational(p_));
  if (mu_ < 0 || mu_ > 1) Fail(ErrorKind::kInvalidArgument, "mu must lie in [0, 1], got " + FormatRational(mu_));
  if (states_.size() < 2) Fail(ErrorKind::kInvalidArgument, "prior needs at least two states");
  std::set<std::string> ids;
  Rational total = 0;
  for (const auto& s : states_) {
    if (!ids.insert(s.id).second) Fail(ErrorKind::kInvalidArgument, "duplicate state id '" + s.id + "'");
    if (sgn(s.prob) < 0) Fail(ErrorKind::kInvalidArgument, "state '" + s.id + "' has negative probability");
    s.types.Validate("state '" + s.id + "'");
    total += s.prob;
  }
  if (total != 1) {
    Fail(ErrorKind::kInvalidArgument, "state probabilities sum to " + FormatRational(total) + ", not 1");
  }
}

std::size_t Prior::state_index(const std::string& id) const {
  for (std::size_t s = 0; s < states_.size(); ++s) {
    if (states_[s].id == id) return s;
  }
  Fail(ErrorKind::kInvalidArgument, "unknown state '" + id + "'");
}

Prior Prior::WithThresholds(Rational p, Rational mu) const {
  return Prior(std::move(p), std::move(mu), states_);
}

Prior MotivatingPrior() {
  return Prior(Rational(2, 5), Rational(1, 2),
               {StateSpec{"A", Rational(1, 2), TypeDistribution(0, Rational(1, 5), Rational(4, 5))},
                StateSpec{"B", Rational(1, 2), TypeDistribution(0, Rational(4, 5), Rational(1, 5))}});
}

ContextClass MakeContext(AgentType own, int alpha_neighbors, int nu_neighbors, int chi_neighbors) {
  if (alpha_neighbors < 0 || nu_neighbors < 0 || chi_neighbors < 0) {
    Fail(ErrorKind::kInvalidArgument, "negative neighbour count");
  }
  ContextClass c;
  c.own_type = own;
  c.neighbor_counts = {alpha_neighbors, nu_neighbors, chi_neighbors};
  c.degree = alpha_neighbors + nu_neighbors + chi_neighbors;
  return c;
}

namespace {

void CheckContext(const ContextClass& c) {
  int total = 0;
  for (int k : c.neighbor_counts) {
    if (k < 0) Fail(ErrorKind::kInvalidArgument, "negative neighbour count");
    total += k;
  }
  if (total != c.degree) Fail(ErrorKind::kInvalidArgument, "neighbour counts do not sum to the degree");
}

}  // namespace

Rational ContextLikelihood(const ContextClass& c, const std::string& state, const Prior& prior) {
  return ContextLikelihood(c, prior.state_index(state), prior);
}

Rational ContextLikelihood(const ContextClass& c, std::size_t state, const Prior& prior) {
  CheckContext(c);
  if (state >= prior.num_states()) Fail(ErrorKind::kInvalidArgument, "state index out of range");
  const TypeDistribution& dist = prior.state(state).types;
  const auto d = static_cast<unsigned>(c.degree);
  const auto a = static_cast<unsigned>(c.count(AgentType::kAlpha));
  const auto v = static_cast<unsigned>(c.count(AgentType::kNu));
  Rational result = dist[c.own_type];
  result *= Rational(Binomial(d, a) * Binomial(d - a, v));
  for (AgentType t : kAllTypes) result *= Pow(dist[t], static_cast<unsigned>(c.count(t)));
  return result;
}

std::vector<Rational> StatePosterior(const ContextClass& c, const Prior& prior) {
  std::vector<Rational> joint(prior.num_states());
  Rational total = 0;
  for (std::size_t s = 0; s < prior.num_states(); ++s) {
    joint[s] = ContextLikelihood(c, s, prior) * prior.state(s).prob;
    total += joint[s];
  }
  if (sgn(total) == 0) Fail(ErrorKind::kImpossibleContext, "context has zero likelihood in every state");
  for (auto& x : joint) x /= total;
  return joint;
}

std::vector<ContextClass> EnumerateContexts(int degree, std::optional<AgentType> own_type) {
  if (degree < 0) Fail(ErrorKind::kInvalidArgument, "degree must be non-negative");
  std::vector<AgentType> owns;
  if (own_type) {
    owns.push_back(*own_type);
  } else {
    owns.assign(kAllTypes.begin(), kAllTypes.end());
  }
  std::vector<ContextClass> out;
  for (AgentType own : owns) {
    for (int a = 0; a <= degree; ++a) {
      for (int v = 0; a + v <= degree; ++v) out.push_back(MakeContext(own, a, v, degree - a - v));
    }
  }
  return out;
}

Rational Payoff(AgentType t, Action own_action, long revolt_count, long n, const Prior& prior) {
  if (n < 0 || revolt_count < 0 || revolt_count > n) {
    Fail(ErrorKind::kInvalidArgument, "revolt count must lie in [0, n]");
  }
  switch (t) {
    case AgentType::kAlpha: return own_action == Action::kRevolt ? Rational(1) : Rational(0);
    case AgentType::kNu: return own_action == Action::kYield ? Rational(1) : Rational(0);
    case AgentType::kChi: {
      const bool threshold_met = Rational(revolt_count) >= prior.mu() * n;
      if (threshold_met && own_action == Action::kRevolt) return 1 - prior.p();
      if (!threshold_met && own_action == Action::kYield) return prior.p();
      return 0;
    }
  }
  return 0;
}

ConcreteGraph::ConcreteGraph(int n) : n_(n) {
  if (n < 0) Fail(ErrorKind::kInvalidArgument, "graph size must be non-negative");
  adjacency_.resize(static_cast<std::size_t>(n));
}

ConcreteGraph::ConcreteGraph(int n, const std::vector<std::pair<int, int>>& edges) : ConcreteGraph(n) {
  for (auto [u, v] : edges) AddEdge(u, v);
}

bool ConcreteGraph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
  const auto& nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

void ConcreteGraph::AddEdge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) {
    Fail(ErrorKind::kInvalidArgument, "edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                          ") outside vertex range 0.." + std::to_string(n_ - 1));
  }
  if (u == v) Fail(ErrorKind::kInvalidArgument, "self-loop at vertex " + std::to_string(u));
  if (has_edge(u, v)) {
    Fail(ErrorKind::kInvalidArgument, "duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
  }
  auto insert_sorted = [](std::vector<int>& list, int x) {
    list.insert(std::upper_bound(list.begin(), list.end(), x), x);
  };
  insert_sorted(adjacency_[static_cast<std::size_t>(u)], v);
  insert_sorted(adjacency_[static_cast<std::size_t>(v)], u);
  ++num_edges_;
}

void ConcreteGraph::RemoveEdge(int u, int v) {
  if (!has_edge(u, v)) Fail(ErrorKind::kInvalidArgument, "no such edge");
  auto erase = [](std::vector<int>& list, int x) {
    list.erase(std::lower_bound(list.begin(), list.end(), x));
  };
  erase(adjacency_[static_cast<std::size_t>(u)], v);
  erase(adjacency_[static_cast<std::size_t>(v)], u);
  --num_edges_;
}

std::vector<int> ConcreteGraph::Degrees() const {
  std::vector<int> out;
  out.reserve(adjacency_.size());
  for (const auto& nb : adjacency_) out.push_back(static_cast<int>(nb.size()));
  return out;
}

std::vector<std::pair<int, int>> ConcreteGraph::Edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n_; ++u) {
    for (int v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

}  // namespace factional
