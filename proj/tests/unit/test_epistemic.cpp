#include <doctest.h>

#include "factional/epistemic.hpp"
#include "factional/error.hpp"
#include "factional/experiments.hpp"
#include "factional/netgen.hpp"

using namespace factional;
using namespace factional::epistemic;

namespace {

Rational Q(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

FiniteProbSpace Die() {
  return FiniteProbSpace({"1", "2", "3", "4", "5", "6"}, std::vector<Rational>(6, Q(1, 6)));
}

Event Labels(const FiniteProbSpace& s, std::vector<std::string> labels) { return Event::FromLabels(s, labels); }

// Two agents over a fair die: agent 1 sees pairs, agent 2 sees nothing.
EpistemicModel PairsAndBlind() {
  const auto die = Die();
  return EpistemicModel(die, {"1", "2"},
                        {AgentPartition(6, {{0, 1}, {2, 3}, {4, 5}}), AgentPartition(6, {{0, 1, 2, 3, 4, 5}})});
}

// B_i^p(E) straight from the definition, one outcome at a time.
Event BeliefByDefinition(const EpistemicModel& m, std::size_t agent, const Rational& p, const Event& e) {
  Event out(m.space().size());
  for (std::size_t w = 0; w < m.space().size(); ++w) {
    const auto& cell = m.partition(agent).cells()[m.partition(agent).cell_of(w)];
    Rational in = 0;
    Rational total = 0;
    for (std::size_t o : cell) {
      total += m.space().prob(o);
      if (e.contains(o)) in += m.space().prob(o);
    }
    if (in >= p * total) out.insert(w);
  }
  return out;
}

}  // namespace

TEST_CASE("probability space validation") {
  CHECK_THROWS_AS(FiniteProbSpace({"a", "b"}, {Q(1, 2), Q(1, 3)}), Error);
  CHECK_THROWS_AS(FiniteProbSpace({"a", "b"}, {Q(1, 1), Q(0, 1)}), Error);
  CHECK_THROWS_AS(AgentPartition(3, {{0, 1}}), Error);
  CHECK_THROWS_AS(AgentPartition(3, {{0, 1}, {1, 2}}), Error);
  CHECK_THROWS_AS(AgentPartition(3, {{0, 1, 2}, {}}), Error);
  const auto die = Die();
  CHECK(die.index_of("4") == 3);
  CHECK_THROWS_AS(die.index_of("7"), Error);
}

TEST_CASE("belief operator examples") {
  const auto die = Die();
  const EpistemicModel blind(die, {"i"}, {AgentPartition(6, {{0, 1, 2, 3, 4, 5}})});
  const Event even = Labels(die, {"2", "4", "6"});
  CHECK(BeliefOperator(blind, "i", Q(1, 2), even) == Event::Full(6));
  CHECK(BeliefOperator(blind, "i", Q(0, 1), Event(6)) == Event::Full(6));
  CHECK(BeliefOperator(blind, "i", Q(3, 5), even).empty());

  const EpistemicModel halves(die, {"i"}, {AgentPartition(6, {{0, 1, 2}, {3, 4, 5}})});
  CHECK(BeliefOperator(halves, "i", Q(2, 3), Labels(die, {"1", "2", "5"})) == Labels(die, {"1", "2", "3"}));

  try {
    BeliefOperator(halves, "nobody", Q(1, 2), even);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidAgent);
  }
}

TEST_CASE("belief operator agrees with the definition on random models") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Rng rng(seed);
    const EpistemicModel m = RandomModel(rng);
    const Rational p = RandomEighth(rng);
    const std::size_t size = m.space().size();
    for (unsigned long long mask = 0; mask < (1ULL << size); ++mask) {
      const Event e = Event::FromMask(size, mask);
      for (std::size_t a = 0; a < m.num_agents(); ++a) {
        REQUIRE(BeliefOperator(m, a, p, e) == BeliefByDefinition(m, a, p, e));
      }
    }
  }
}

TEST_CASE("fraction threshold is exact") {
  CHECK(MeetsFraction(1, Q(1, 2), 2));
  CHECK_FALSE(MeetsFraction(1, Q(2, 3), 2));
  CHECK(MeetsFraction(2, Q(2, 3), 3));
  CHECK(MeetsFraction(0, Q(0, 1), 3));
}

TEST_CASE("evident belief examples") {
  const auto m = PairsAndBlind();
  const auto& s = m.space();
  const auto whole = IsEvidentBelief(m, Q(9, 10), Q(1, 1), Event::Full(6));
  CHECK(whole.evident);
  CHECK(whole.witnesses == std::vector<std::string>{"1", "2"});
  const auto none = IsEvidentBelief(m, Q(9, 10), Q(1, 1), Event(6));
  CHECK(none.evident);
  CHECK(none.witnesses.size() == 2);

  const auto pair = IsEvidentBelief(m, Q(1, 1), Q(1, 2), Labels(s, {"1", "2"}));
  CHECK(pair.evident);
  CHECK(pair.witnesses == std::vector<std::string>{"1"});
  CHECK_FALSE(IsEvidentBelief(m, Q(1, 1), Q(1, 1), Labels(s, {"1", "2"})).evident);
}

TEST_CASE("common belief fixpoint examples") {
  const auto m = PairsAndBlind();
  const auto& s = m.space();
  CHECK(CommonBeliefFixpoint(m, Q(1, 2), Q(1, 2), Event::Full(6)) == Event::Full(6));
  CHECK(CommonBeliefFixpoint(m, Q(1, 3), Q(1, 1), Event(6)).empty());
  CHECK(CommonBeliefFixpoint(m, Q(1, 1), Q(1, 2), Labels(s, {"1", "2"})) == Labels(s, {"1", "2"}));

  // Die with a blind agent: "even" is believed at exactly 1/2 everywhere.
  const EpistemicModel blind(Die(), {"i"}, {AgentPartition(6, {{0, 1, 2, 3, 4, 5}})});
  const Event even = Labels(blind.space(), {"2", "4", "6"});
  CHECK(CommonBeliefFixpoint(blind, Q(1, 2), Q(1, 1), even) == Event::Full(6));
  CHECK(CommonBeliefFixpoint(blind, Q(1, 3), Q(1, 1), even) == Event::Full(6));
  CHECK(CommonBeliefFixpoint(blind, Q(2, 3), Q(1, 1), even).empty());
}

// Restricted to mu * |I| in {0, |I|}; see the pinned counterexample below
// for intermediate fractions.
TEST_CASE("hierarchy levels decrease when the fraction is none or all") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const EpistemicModel m = RandomModel(rng);
    const Rational p = RandomEighth(rng);
    const Rational mu = rng.Below(2) ? Q(1, 1) : Q(0, 1);
    const std::size_t size = m.space().size();
    for (unsigned long long mask = 0; mask < (1ULL << size); ++mask) {
      const auto trace = CommonBeliefHierarchy(m, p, mu, Event::FromMask(size, mask));
      REQUIRE(!trace.levels.empty());
      for (std::size_t k = 1; k < trace.levels.size(); ++k) {
        REQUIRE(trace.levels[k].is_subset_of(trace.levels[k - 1]));
      }
      REQUIRE(trace.stabilized);
      REQUIRE(trace.result == trace.levels.back());
    }
  }
}

TEST_CASE("search examples and guard") {
  const auto m = PairsAndBlind();
  for (std::size_t w = 0; w < 6; ++w) {
    CHECK(CommonBeliefBySearch(m, Q(1, 2), Q(1, 2), Event::Full(6), w));
    CHECK_FALSE(CommonBeliefBySearch(m, Q(1, 4), Q(1, 2), Event(6), w));
  }
  std::vector<std::string> labels;
  for (int i = 0; i < 21; ++i) labels.push_back(std::to_string(i));
  const EpistemicModel big(FiniteProbSpace(labels, std::vector<Rational>(21, Q(1, 21))), {"i"},
                           {AgentPartition(21, {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20}})});
  try {
    CommonBeliefBySearch(big, Q(1, 2), Q(1, 2), Event::Full(21), 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSpaceTooLarge);
  }
}

// When mu * |I| is 0 or |I| the fraction condition means "no agent" or
// "every agent", and the two characterizations coincide.
TEST_CASE("search matches fixpoint when the fraction is none or all") {
  long checks = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(DeriveSeed(99, 1, seed));
    const EpistemicModel m = RandomModel(rng);
    const Rational p = RandomEighth(rng);
    for (const Rational& mu : {Q(0, 1), Q(1, 1)}) {
      const std::size_t size = m.space().size();
      for (unsigned long long mask = 0; mask < (1ULL << size); ++mask) {
        const Event f = Event::FromMask(size, mask);
        const Event fix = CommonBeliefFixpoint(m, p, mu, f);
        REQUIRE(fix == CommonBeliefSearchSet(m, p, mu, f));
        REQUIRE(IsEvidentBelief(m, p, mu, fix).evident);
        ++checks;
      }
    }
  }
  CHECK(checks > 1000);
}

// With an intermediate fraction a level may be met by different agents at
// different outcomes, so the fixpoint need not be evident and the search can
// be strictly smaller. This instance is the smallest one found.
TEST_CASE("intermediate fraction counterexample is pinned") {
  const FiniteProbSpace space({"0", "1", "2", "3", "4", "5"},
                              {Q(6, 28), Q(5, 28), Q(3, 28), Q(3, 28), Q(5, 28), Q(6, 28)});
  const EpistemicModel m(space, {"1", "2", "3"},
                         {AgentPartition(6, {{0, 4}, {1, 3, 5}, {2}}), AgentPartition(6, {{0, 2, 5}, {1}, {3}, {4}}),
                          AgentPartition(6, {{0, 5}, {1, 3}, {2}, {4}})});
  const Rational p = Q(3, 4);
  const Rational mu = Q(5, 8);
  const Event f = Labels(space, {"0", "1", "5"});
  const Event fix = CommonBeliefFixpoint(m, p, mu, f);
  const Event search = CommonBeliefSearchSet(m, p, mu, f);
  CHECK(fix == Labels(space, {"0", "1", "5"}));
  CHECK(search == Labels(space, {"0", "5"}));
  CHECK(search.is_subset_of(fix));
  CHECK_FALSE(IsEvidentBelief(m, p, mu, fix).evident);
}

TEST_CASE("search is always contained in the fixpoint") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(DeriveSeed(5, 1, seed));
    const EpistemicModel m = RandomModel(rng);
    const Rational p = RandomEighth(rng);
    const Rational mu = RandomEighth(rng);
    const std::size_t size = m.space().size();
    for (unsigned long long mask = 0; mask < (1ULL << size); ++mask) {
      const Event f = Event::FromMask(size, mask);
      REQUIRE(CommonBeliefSearchSet(m, p, mu, f).is_subset_of(CommonBeliefFixpoint(m, p, mu, f)));
    }
  }
}

TEST_CASE("operator laws on the random battery") {
  const LawReport r = RunOperatorLawBattery(200, 11);
  CHECK(r.monotonicity_checks > 0);
  CHECK(r.monotonicity_failures == 0);
  CHECK(r.idempotence_failures == 0);
  CHECK(r.continuity_failures == 0);
}
