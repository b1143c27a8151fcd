#include <doctest.h>

#include "factional/error.hpp"
#include "factional/revolt_model.hpp"

using namespace factional;

namespace {

Rational Q(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

long Choose(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Pr[k of 5 samples are chi] in the motivating example: C(5,k) 4^k / 5^5 in A
// and C(5,k) 4^(5-k) / 5^5 in B.
Rational FiveSampleLikelihood(int k, bool state_a) {
  long w = 1;
  for (int i = 0; i < (state_a ? k : 5 - k); ++i) w *= 4;
  return Q(Choose(5, k) * w, 3125);
}

}  // namespace

TEST_CASE("motivating prior") {
  const Prior prior = MotivatingPrior();
  CHECK(prior.p() == Q(2, 5));
  CHECK(prior.mu() == Q(1, 2));
  CHECK(prior.num_states() == 2);
  CHECK(prior.state(0).id == "A");
  CHECK(prior.state(0).types[AgentType::kChi] == Q(4, 5));
  CHECK(prior.state(1).types[AgentType::kNu] == Q(4, 5));
  CHECK(prior.state_index("B") == 1);
  CHECK_THROWS_AS(prior.state_index("C"), Error);
}

TEST_CASE("prior validation") {
  const TypeDistribution ok(Q(0, 1), Q(1, 2), Q(1, 2));
  CHECK_THROWS_AS(Prior(Q(1, 2), Q(1, 2), {StateSpec{"A", Q(1, 2), ok}, StateSpec{"B", Q(1, 3), ok}}), Error);
  CHECK_THROWS_AS(
      Prior(Q(1, 2), Q(1, 2),
            {StateSpec{"A", Q(1, 2), TypeDistribution(Q(1, 2), Q(1, 2), Q(1, 2))}, StateSpec{"B", Q(1, 2), ok}}),
      Error);
  CHECK_THROWS_AS(Prior(Q(1, 2), Q(1, 2), {StateSpec{"A", Q(1, 1), ok}}), Error);
  CHECK_THROWS_AS(Prior(Q(3, 2), Q(1, 2), {StateSpec{"A", Q(1, 2), ok}, StateSpec{"B", Q(1, 2), ok}}), Error);
}

TEST_CASE("context likelihood examples") {
  const Prior prior = MotivatingPrior();
  const ContextClass all_chi = MakeContext(AgentType::kChi, 0, 0, 4);
  CHECK(ContextLikelihood(all_chi, "A", prior) == Q(1024, 3125));
  CHECK(ContextLikelihood(all_chi, "B", prior) == Q(1, 3125));
  CHECK(ContextLikelihood(MakeContext(AgentType::kNu, 0, 0, 0), "B", prior) == Q(4, 5));
  CHECK_THROWS_AS(ContextLikelihood(all_chi, "Z", prior), Error);
}

TEST_CASE("five-sample likelihoods and posteriors") {
  const Prior prior = MotivatingPrior();
  for (int k = 0; k <= 5; ++k) {
    // k chi among own type and four neighbours: own chi with k-1 chi
    // neighbours, or own nu with k chi neighbours.
    Rational a = 0;
    Rational b = 0;
    if (k >= 1) {
      const auto c = MakeContext(AgentType::kChi, 0, 5 - k, k - 1);
      a += ContextLikelihood(c, "A", prior);
      b += ContextLikelihood(c, "B", prior);
    }
    if (k <= 4) {
      const auto c = MakeContext(AgentType::kNu, 0, 4 - k, k);
      a += ContextLikelihood(c, "A", prior);
      b += ContextLikelihood(c, "B", prior);
    }
    CHECK(a == FiveSampleLikelihood(k, true));
    CHECK(b == FiveSampleLikelihood(k, false));
    const Rational expected = FiveSampleLikelihood(k, true) / (FiveSampleLikelihood(k, true) + FiveSampleLikelihood(k, false));
    if (k >= 1) CHECK(StatePosterior(MakeContext(AgentType::kChi, 0, 5 - k, k - 1), prior)[0] == expected);
    if (k <= 4) CHECK(StatePosterior(MakeContext(AgentType::kNu, 0, 4 - k, k), prior)[0] == expected);
  }
}

TEST_CASE("posterior properties") {
  const Prior prior = MotivatingPrior();
  Rational last = -1;
  for (int k = 0; k <= 4; ++k) {
    const auto post = StatePosterior(MakeContext(AgentType::kChi, 0, 4 - k, k), prior);
    CHECK(post[0] + post[1] == 1);
    CHECK(post[0] > last);
    last = post[0];
  }
  const TypeDistribution same(Q(1, 5), Q(3, 10), Q(1, 2));
  const Prior symmetric(Q(1, 2), Q(1, 2), {StateSpec{"A", Q(1, 2), same}, StateSpec{"B", Q(1, 2), same}});
  for (int d = 0; d <= 4; ++d) {
    for (const auto& c : EnumerateContexts(d)) CHECK(StatePosterior(c, symmetric)[0] == Q(1, 2));
  }
  // Alpha never occurs in the motivating prior.
  try {
    StatePosterior(MakeContext(AgentType::kAlpha, 0, 0, 0), prior);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kImpossibleContext);
  }
}

TEST_CASE("context enumeration") {
  CHECK(EnumerateContexts(0, AgentType::kChi).size() == 1);
  CHECK(EnumerateContexts(4, AgentType::kChi).size() == 15);
  CHECK(EnumerateContexts(2).size() == 18);
  for (const auto& c : EnumerateContexts(3)) {
    CHECK(c.count(AgentType::kAlpha) + c.count(AgentType::kNu) + c.count(AgentType::kChi) == 3);
  }
}

TEST_CASE("likelihoods of one degree sum to one") {
  const Prior prior(Q(1, 3), Q(1, 2),
                    {StateSpec{"A", Q(1, 3), TypeDistribution(Q(1, 7), Q(2, 7), Q(4, 7))},
                     StateSpec{"B", Q(2, 3), TypeDistribution(Q(1, 2), Q(1, 3), Q(1, 6))}});
  for (int d = 0; d <= 6; ++d) {
    for (std::size_t s = 0; s < 2; ++s) {
      Rational total = 0;
      for (const auto& c : EnumerateContexts(d)) total += ContextLikelihood(c, s, prior);
      CHECK(total == 1);
    }
  }
}

TEST_CASE("payoffs") {
  const Prior prior = MotivatingPrior();
  CHECK(Payoff(AgentType::kAlpha, Action::kRevolt, 0, 10, prior) == 1);
  CHECK(Payoff(AgentType::kAlpha, Action::kYield, 10, 10, prior) == 0);
  CHECK(Payoff(AgentType::kNu, Action::kRevolt, 3, 10, prior) == 0);
  CHECK(Payoff(AgentType::kNu, Action::kYield, 3, 10, prior) == 1);
  CHECK(Payoff(AgentType::kChi, Action::kRevolt, 500, 1000, prior) == Q(3, 5));
  CHECK(Payoff(AgentType::kChi, Action::kRevolt, 499, 1000, prior) == 0);
  CHECK(Payoff(AgentType::kChi, Action::kYield, 499, 1000, prior) == Q(2, 5));
  CHECK(Payoff(AgentType::kChi, Action::kYield, 500, 1000, prior) == 0);
  // mu * n = 3/2: two revolters are needed.
  CHECK(Payoff(AgentType::kChi, Action::kRevolt, 1, 3, prior) == 0);
  CHECK(Payoff(AgentType::kChi, Action::kRevolt, 2, 3, prior) == Q(3, 5));
  for (long r = 0; r <= 7; ++r) {
    for (AgentType t : kAllTypes) {
      for (Action a : {Action::kRevolt, Action::kYield}) {
        const Rational v = Payoff(t, a, r, 7, prior);
        CHECK(v >= 0);
        CHECK(v <= 1);
      }
    }
  }
}

TEST_CASE("concrete graph") {
  ConcreteGraph g(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(g.num_edges() == 3);
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(0, 3));
  CHECK(g.Degrees() == std::vector<int>{1, 2, 2, 1});
  CHECK_THROWS_AS(g.AddEdge(1, 1), Error);
  CHECK_THROWS_AS(g.AddEdge(0, 1), Error);
  g.RemoveEdge(0, 1);
  CHECK(g.degree(0) == 0);
  CHECK(g.Edges() == std::vector<std::pair<int, int>>{{1, 2}, {2, 3}});
}
