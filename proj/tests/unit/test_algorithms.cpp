#include <doctest.h>

#include <algorithm>
#include <map>

#include "factional/algorithms.hpp"
#include "factional/error.hpp"
#include "factional/netgen.hpp"

using namespace factional;

namespace {

Rational Q(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt Choose(int n, int k) {
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Rational PowQ(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Reference evaluation straight from the definitions: every chi context of
// every degree, its per-state likelihood, and candidate membership by Bayes.
struct Reference {
  const Prior& prior;
  std::map<int, long> hist;
  long n = 0;

  Reference(const Prior& pr, const std::vector<int>& degrees) : prior(pr) {
    for (int d : degrees) ++hist[d];
    n = static_cast<long>(degrees.size());
  }

  const TypeDistribution& T(std::size_t s) const { return prior.state(s).types; }

  std::vector<Rational> Likelihoods(int d, int a, int v) const {
    std::vector<Rational> out;
    const int c = d - a - v;
    for (std::size_t s = 0; s < prior.num_states(); ++s) {
      out.push_back(T(s)[AgentType::kChi] * Rational(Choose(d, a) * Choose(d - a, v)) *
                    PowQ(T(s)[AgentType::kAlpha], a) * PowQ(T(s)[AgentType::kNu], v) * PowQ(T(s)[AgentType::kChi], c));
    }
    return out;
  }

  // e_s(C_C(S) ∪ alpha) per state, with C_C(S) the chi contexts whose
  // posterior on S is at least p.
  std::vector<Rational> WithCandidates(const std::vector<bool>& subset, const Rational& p) const {
    std::vector<Rational> mass(prior.num_states(), Rational(0));
    for (const auto& [d, count] : hist) {
      for (int a = 0; a <= d; ++a) {
        for (int v = 0; v + a <= d; ++v) {
          const auto lik = Likelihoods(d, a, v);
          Rational in = 0;
          Rational all = 0;
          for (std::size_t s = 0; s < lik.size(); ++s) {
            all += lik[s] * prior.state(s).prob;
            if (subset[s]) in += lik[s] * prior.state(s).prob;
          }
          if (all == 0 || in < p * all) continue;
          for (std::size_t s = 0; s < lik.size(); ++s) mass[s] += lik[s] * count;
        }
      }
    }
    for (std::size_t s = 0; s < mass.size(); ++s) mass[s] = mass[s] / n + T(s)[AgentType::kAlpha];
    return mass;
  }

  Rational Alpha(std::size_t s) const { return T(s)[AgentType::kAlpha]; }
  Rational AlphaChi(std::size_t s) const { return T(s)[AgentType::kAlpha] + T(s)[AgentType::kChi]; }
};

// Two-state branches from the definitions. Returns false on a label error.
bool ReferenceAlgorithm1(const Prior& prior, const std::vector<int>& degrees, Rational& xa, Rational& xb) {
  Reference ref(prior, degrees);
  const bool a = ref.AlphaChi(0) >= prior.mu();
  const bool b = ref.AlphaChi(1) >= prior.mu();
  if (!a && !b) {
    xa = ref.Alpha(0);
    xb = ref.Alpha(1);
  } else if (a && b) {
    xa = ref.AlphaChi(0);
    xb = ref.AlphaChi(1);
  } else if (b) {
    return false;
  } else {
    const auto with = ref.WithCandidates({true, false}, prior.p());
    if (with[0] >= prior.mu()) {
      xa = with[0];
      xb = with[1];
    } else {
      xa = ref.Alpha(0);
      xb = ref.Alpha(1);
    }
  }
  return xa >= xb;
}

// Exhaustive scan for the maximal self-consistent candidate set.
std::vector<bool> MaximalConsistent(const Prior& prior, const std::vector<int>& degrees) {
  Reference ref(prior, degrees);
  const std::size_t m = prior.num_states();
  std::vector<bool> best(m, false);
  std::vector<std::vector<bool>> consistent;
  for (unsigned mask = 1; mask < (1U << m); ++mask) {
    std::vector<bool> subset(m);
    for (std::size_t s = 0; s < m; ++s) subset[s] = (mask >> s) & 1U;
    const auto with = ref.WithCandidates(subset, prior.p());
    bool ok = true;
    for (std::size_t s = 0; s < m; ++s) ok = ok && (!subset[s] || with[s] >= prior.mu());
    if (ok) consistent.push_back(subset);
  }
  for (const auto& c : consistent) {
    for (std::size_t s = 0; s < m; ++s) best[s] = best[s] || c[s];
  }
  // The union must itself be consistent for the maximal set to be unique.
  if (std::find(best.begin(), best.end(), true) != best.end()) {
    REQUIRE(std::find(consistent.begin(), consistent.end(), best) != consistent.end());
  }
  return best;
}

Rational Grid(Rng& rng, int den) {
  Rational r(static_cast<unsigned long>(rng.Below(static_cast<std::uint64_t>(den) + 1)), static_cast<unsigned long>(den));
  r.canonicalize();
  return r;
}

TypeDistribution RandomTypes(Rng& rng, int den) {
  const Rational alpha = Grid(rng, den) / 2;
  const Rational chi = (1 - alpha) * Grid(rng, den);
  return TypeDistribution(alpha, 1 - alpha - chi, chi);
}

Prior RandomPrior(Rng& rng, std::size_t m) {
  std::vector<StateSpec> states;
  std::vector<unsigned long> w;
  unsigned long total = 0;
  for (std::size_t s = 0; s < m; ++s) {
    w.push_back(1 + rng.Below(4));
    total += w.back();
  }
  for (std::size_t s = 0; s < m; ++s) {
    const std::string id = m == 2 ? std::string(s == 0 ? "A" : "B") : "s" + std::to_string(s + 1);
    Rational prob(w[s], total);
    prob.canonicalize();
    states.push_back(StateSpec{id, prob, RandomTypes(rng, 10)});
  }
  const Rational p = Q(1 + static_cast<long>(rng.Below(19)), 20);
  const Rational mu = Q(1 + static_cast<long>(rng.Below(19)), 20);
  return Prior(p, mu, states);
}

std::vector<int> RandomDegrees(Rng& rng) {
  const std::size_t n = 2 + rng.Below(30);
  std::vector<int> d(n);
  for (auto& x : d) x = static_cast<int>(rng.Below(6));
  return d;
}

}  // namespace

TEST_CASE("expected fraction examples") {
  const Prior prior = MotivatingPrior();
  const std::vector<AgentType> chi_alpha = {AgentType::kChi, AgentType::kAlpha};
  CHECK(ExpectedFraction(0, chi_alpha, prior) == Q(4, 5));
  CHECK(ExpectedFraction(0, std::vector<AgentType>{}, prior) == 0);

  // (4/5) * Pr[Binomial(4, 4/5) >= 2], enumerated over the 15 degree-4 chi
  // contexts.
  std::set<ContextClass> two_or_more;
  for (const auto& c : EnumerateContexts(4, AgentType::kChi)) {
    if (c.count(AgentType::kChi) >= 2) two_or_more.insert(c);
  }
  const DegreeSequence four = DegreeSequence::Constant(1000, 4);
  Rational binom = 0;
  for (int k = 2; k <= 4; ++k) binom += Rational(Choose(4, k)) * PowQ(Q(4, 5), k) * PowQ(Q(1, 5), 4 - k);
  CHECK(ExpectedFraction(0, two_or_more, prior, four) == Q(4, 5) * binom);
  CHECK(Q(4, 5) * binom == Q(2432, 3125));
  CHECK(ExpectedFraction(0, two_or_more, chi_alpha, prior, four) == Q(4, 5));
}

TEST_CASE("algorithm 1 on the motivating prior") {
  const Prior prior = MotivatingPrior();
  const auto r = Algorithm1Detailed(DegreeSequence::Constant(1000, 4), prior);
  CHECK(r.sizes.at("A") == Q(2432, 3125));
  CHECK(r.sizes.at("B") == Q(113, 3125));
  CHECK(r.branch == Algorithm1Branch::kOnlyACandidateRevolt);
  CHECK(r.candidate_states == std::vector<std::string>{"A"});
  for (const auto& c : r.candidate_contexts) CHECK(c.count(AgentType::kChi) >= 2);
  CHECK(r.candidate_contexts.size() == 3);

  const auto one = Algorithm1(DegreeSequence::Constant(1000, 1), prior);
  CHECK(one.at("A") == Q(4, 5));
  CHECK(one.at("B") == Q(1, 5));

  // mu above e_A(chi ∪ alpha): nobody is a candidate.
  const auto none = Algorithm1Detailed(DegreeSequence::Constant(10, 4), prior.WithThresholds(Q(2, 5), Q(9, 10)));
  CHECK(none.branch == Algorithm1Branch::kNoCandidates);
  CHECK(none.sizes.at("A") == 0);
  CHECK(none.sizes.at("B") == 0);
}

TEST_CASE("algorithm 1 label errors") {
  const Prior swapped = SwapStateLabels(MotivatingPrior());
  try {
    Algorithm1(DegreeSequence::Constant(10, 4), swapped);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMislabeledStates);
  }
  const auto fixed = Algorithm1AutoRelabel(DegreeSequence::Constant(10, 4), swapped);
  CHECK(fixed.relabeled);
  CHECK(fixed.result.sizes.at("B") == Q(2432, 3125));
  CHECK(fixed.result.sizes.at("A") == Q(113, 3125));

  const TypeDistribution t(Q(0, 1), Q(1, 2), Q(1, 2));
  const Prior three(Q(1, 2), Q(1, 2),
                    {StateSpec{"A", Q(1, 3), t}, StateSpec{"B", Q(1, 3), t}, StateSpec{"C", Q(1, 3), t}});
  try {
    Algorithm1(DegreeSequence::Constant(4, 1), three);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotTwoStates);
  }
}

TEST_CASE("algorithm 1 matches the reference on random instances") {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 800; ++seed) {
    Rng rng(DeriveSeed(3, 0, seed));
    const Prior prior = RandomPrior(rng, 2);
    const auto degrees = RandomDegrees(rng);
    Rational xa;
    Rational xb;
    const bool ok = ReferenceAlgorithm1(prior, degrees, xa, xb);
    if (!ok) {
      CHECK_THROWS_AS(Algorithm1(DegreeSequence(degrees), prior), Error);
      continue;
    }
    const auto r = Algorithm1(DegreeSequence(degrees), prior);
    REQUIRE(r.at("A") == xa);
    REQUIRE(r.at("B") == xb);
    ++compared;
  }
  CHECK(compared > 300);
}

TEST_CASE("algorithm 1 invariants") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(DeriveSeed(4, 0, seed));
    const Prior prior = RandomPrior(rng, 2);
    auto degrees = RandomDegrees(rng);
    RevoltSizes r;
    try {
      r = Algorithm1(DegreeSequence(degrees), prior);
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::kMislabeledStates);
      continue;
    }
    CHECK(r.at("A") >= r.at("B"));
    for (std::size_t s = 0; s < 2; ++s) {
      const auto& t = prior.state(s).types;
      CHECK(t[AgentType::kAlpha] <= r.x[s]);
      CHECK(r.x[s] <= t[AgentType::kAlpha] + t[AgentType::kChi]);
    }
    // Only the multiset matters.
    std::reverse(degrees.begin(), degrees.end());
    CHECK(Algorithm1(DegreeSequence(degrees), prior) == r);
  }
}

TEST_CASE("algorithm 1 is weakly decreasing in p") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Rng rng(DeriveSeed(6, 0, seed));
    const Prior base = RandomPrior(rng, 2);
    const DegreeSequence seq(RandomDegrees(rng));
    const ContextTable table(seq, base);
    std::optional<Algorithm1Result> last;
    for (long k = 1; k < 20; ++k) {
      Algorithm1Result r;
      try {
        r = Algorithm1Detailed(table, base.WithThresholds(Q(k, 20), base.mu()));
      } catch (const Error&) {
        last.reset();
        continue;
      }
      if (last) {
        CHECK(r.sizes.x[0] <= last->sizes.x[0]);
        CHECK(r.sizes.x[1] <= last->sizes.x[1]);
        if (r.branch == Algorithm1Branch::kOnlyACandidateRevolt &&
            last->branch == Algorithm1Branch::kOnlyACandidateRevolt) {
          CHECK(std::includes(last->candidate_contexts.begin(), last->candidate_contexts.end(),
                              r.candidate_contexts.begin(), r.candidate_contexts.end()));
        }
      }
      last = r;
    }
  }
}

TEST_CASE("algorithm 2") {
  RevoltSizes s{{"A", "B"}, {Q(2432, 3125), Q(113, 3125)}};
  CHECK(Algorithm2(s, Q(3, 5)) == PromiseOutcome::kA);
  CHECK(Algorithm2(s, Q(0, 1)) == PromiseOutcome::kOmega);
  CHECK(Algorithm2(s, Q(9, 10)) == PromiseOutcome::kEmpty);
  CHECK(Algorithm2(s, Q(113, 3125)) == PromiseOutcome::kOmega);
  CHECK(Algorithm2(s, Q(2432, 3125)) == PromiseOutcome::kA);
}

TEST_CASE("algorithm 3") {
  const Prior prior = MotivatingPrior();
  const DegreeSequence seq = DegreeSequence::Constant(1000, 4);
  const auto r = Algorithm3Detailed(PromiseInstance{seq, prior, Q(3, 5), Q(1, 200), Q(1, 200)});
  CHECK(r.outcome == PromiseOutcome::kA);
  CHECK(r.raised_outcome == PromiseOutcome::kA);
  CHECK(r.lowered_outcome == PromiseOutcome::kA);
  CHECK(r.raised.candidate_contexts == r.lowered.candidate_contexts);
  CHECK(Algorithm3(PromiseInstance{seq, prior, Q(1, 100), Q(1, 200), Q(1, 200)}) == PromiseOutcome::kOmega);
  CHECK(Algorithm3(PromiseInstance{seq, prior, Q(9, 10), Q(1, 200), Q(1, 200)}) == PromiseOutcome::kEmpty);

  // mu sits within eps/3 of e_B(chi ∪ alpha) = 1/5, so the two runs disagree
  // on whether B is a candidate state.
  const Rational eps = Q(1, 200);
  const Prior close = prior.WithThresholds(prior.p(), Q(1, 5) + eps / 6);
  const auto null = Algorithm3Detailed(PromiseInstance{seq, close, Q(1, 10), eps, eps});
  CHECK(null.outcome == PromiseOutcome::kNull);
  CHECK(null.raised.branch == Algorithm1Branch::kOnlyACandidateRevolt);
  CHECK(null.lowered.branch == Algorithm1Branch::kBothCandidates);

  CHECK_THROWS_AS(Algorithm3(PromiseInstance{seq, prior, Q(1, 2), Q(0, 1), Q(1, 200)}), Error);
  CHECK_THROWS_AS(Algorithm3(PromiseInstance{seq, prior, Q(1, 2), Q(1, 200), Q(6, 5)}), Error);
}

TEST_CASE("algorithm 3 sub-runs agree with a non-Null answer") {
  const Prior prior = MotivatingPrior();
  for (int d = 1; d <= 6; ++d) {
    const DegreeSequence seq = DegreeSequence::Constant(100, d);
    for (long k = 0; k <= 20; ++k) {
      const auto r = Algorithm3Detailed(PromiseInstance{seq, prior, Q(k, 20), Q(1, 200), Q(1, 200)});
      if (r.outcome != PromiseOutcome::kNull) {
        CHECK(r.raised_outcome == r.outcome);
        CHECK(r.lowered_outcome == r.outcome);
      } else {
        CHECK(r.raised_outcome != r.lowered_outcome);
      }
    }
  }
}

TEST_CASE("equilibria map") {
  const auto map = EquilibriaMap(DegreeSequence::Constant(1000, 4), MotivatingPrior(),
                                 {Q(0, 1), Q(1, 100), Q(3, 5), Q(9, 10)}, Q(1, 200), Q(1, 200));
  REQUIRE(map.size() == 4);
  CHECK(map[0].second == PromiseOutcome::kOmega);
  CHECK(map[1].second == PromiseOutcome::kOmega);
  CHECK(map[2].second == PromiseOutcome::kA);
  CHECK(map[3].second == PromiseOutcome::kEmpty);
}

TEST_CASE("smallest revolt") {
  const Prior prior = MotivatingPrior();
  const DegreeSequence seq = DegreeSequence::Constant(1000, 4);
  const auto small = SmallestRevolt(seq, prior);
  const auto large = Algorithm1(seq, prior);
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(small.x[s] >= 0);
    CHECK(small.x[s] <= large.x[s]);
  }
  const Prior t = SmallestRevoltPrior(prior);
  CHECK(t.p() == Q(3, 5));
  CHECK(t.mu() == Q(1, 2));
  // A' is B with alpha and nu exchanged; B' is A likewise.
  CHECK(t.state(0).types == TypeDistribution(Q(4, 5), Q(0, 1), Q(1, 5)));
  CHECK(t.state(1).types == TypeDistribution(Q(1, 5), Q(0, 1), Q(4, 5)));

  // No alpha anywhere and mu above both transformed chi ∪ alpha masses: the
  // smallest revolt is 1 - e_{s'}(alpha'), i.e. the alpha mass, zero.
  const Prior no_alpha(Q(1, 2), Q(1, 10),
                       {StateSpec{"A", Q(1, 2), TypeDistribution(Q(0, 1), Q(1, 2), Q(1, 2))},
                        StateSpec{"B", Q(1, 2), TypeDistribution(Q(0, 1), Q(7, 10), Q(3, 10))}});
  const auto zero = SmallestRevolt(DegreeSequence::Constant(10, 3), no_alpha);
  CHECK(zero.at("A") == 0);
  CHECK(zero.at("B") == 0);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(DeriveSeed(8, 0, seed));
    const Prior pr = RandomPrior(rng, 2);
    const DegreeSequence d(RandomDegrees(rng));
    RevoltSizes lo;
    RevoltSizes hi;
    try {
      lo = SmallestRevolt(d, pr);
      hi = Algorithm1AutoRelabel(d, pr).result.sizes;
    } catch (const Error&) {
      continue;
    }
    CHECK(lo.x[0] <= hi.x[0]);
    CHECK(lo.x[1] <= hi.x[1]);
  }
}

TEST_CASE("high-degree cutoff") {
  CHECK(HighDegreeCutoff(Q(1, 1), 1000) == 10);
  CHECK(HighDegreeCutoff(Q(1, 1), 1001) == 11);
  CHECK(HighDegreeCutoff(Q(1, 1), 1) == 1);
  CHECK(HighDegreeCutoff(Q(2, 1), 1000) == 20);
  CHECK(HighDegreeCutoff(Q(1, 2), 1000) == 5);
}

TEST_CASE("general variant") {
  const Prior prior = MotivatingPrior();
  const DegreeSequence low = DegreeSequence::Constant(1000, 4);
  const auto same = Algorithm1General(low, prior);
  CHECK(same.high_fraction == 0);
  CHECK(same.sizes == Algorithm1(low, prior));

  std::vector<int> one_hub(999, 4);
  one_hub.push_back(990);
  const auto hub = Algorithm1General(DegreeSequence(one_hub), prior);
  CHECK(hub.high_ignored);
  CHECK(hub.high_fraction == Q(1, 1000));
  CHECK(hub.sizes == Algorithm1(DegreeSequence(one_hub), prior));

  // 700 low-degree agents of degree 4, 300 of degree 20 (cutoff 10).
  std::vector<int> mixed(700, 4);
  mixed.insert(mixed.end(), 300, 20);
  const auto g = Algorithm1General(DegreeSequence(mixed), prior);
  CHECK_FALSE(g.high_ignored);
  CHECK(g.cutoff_degree == 10);
  CHECK(g.high_fraction == Q(3, 10));
  // Low part: (7/10) * e_s(C_C) on degree 4; high part: (3/10) * Pr[chi | s].
  const Rational low_a = Q(7, 10) * Q(2432, 3125);
  const Rational low_b = Q(7, 10) * Q(113, 3125);
  const Rational h_a = Q(3, 10) * Q(4, 5);
  const Rational h_b = Q(3, 10) * Q(1, 5);
  REQUIRE(low_a + h_a >= prior.mu());
  CHECK(g.sizes.at("A") == low_a + h_a);
  // Gate for B: low_b + h_b = 0.0253 + 0.06 < 1/2, so H stays out of X_B.
  CHECK(low_b + h_b < prior.mu());
  CHECK(g.sizes.at("B") == low_b);
}

TEST_CASE("general variant equals algorithm 1 below the cutoff") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(DeriveSeed(9, 0, seed));
    const Prior prior = RandomPrior(rng, 2);
    std::vector<int> degrees(1000);
    for (auto& d : degrees) d = static_cast<int>(rng.Below(10));
    const DegreeSequence seq(degrees);
    bool threw = false;
    RevoltSizes plain;
    try {
      plain = Algorithm1(seq, prior);
    } catch (const Error&) {
      threw = true;
    }
    if (threw) {
      CHECK_THROWS_AS(Algorithm1General(seq, prior), Error);
    } else {
      CHECK(Algorithm1General(seq, prior).sizes == plain);
    }
  }
}

TEST_CASE("multistate: two states agree with algorithm 1") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(DeriveSeed(10, 0, seed));
    const Prior prior = RandomPrior(rng, 2);
    const DegreeSequence seq(RandomDegrees(rng));
    RevoltSizes two;
    try {
      two = Algorithm1(seq, prior);
    } catch (const Error&) {
      continue;
    }
    CHECK(Algorithm1Multistate(seq, prior).sizes == two);
  }
}

TEST_CASE("multistate: hand-traced three-state removal") {
  const Prior prior(Q(4, 5), Q(3, 5),
                    {StateSpec{"s1", Q(1, 3), TypeDistribution(Q(0, 1), Q(1, 10), Q(9, 10))},
                     StateSpec{"s2", Q(1, 3), TypeDistribution(Q(3, 10), Q(3, 10), Q(2, 5))},
                     StateSpec{"s3", Q(1, 3), TypeDistribution(Q(0, 1), Q(9, 10), Q(1, 10))}});
  const DegreeSequence seq = DegreeSequence::Constant(10, 1);
  const auto r = Algorithm1Multistate(seq, prior);
  CHECK(r.initial_candidates == std::vector<std::string>{"s1", "s2"});
  CHECK(r.survivors == std::vector<std::string>{"s1"});
  // Round 1 (S = {s1, s2}): chi-chi has posterior 97/98 and chi-alpha has 1,
  // chi-nu only 21/30, so e_s2 = 3/10 + 4/25 + 3/25 = 29/50 < 3/5 drops s2.
  // Round 2 (S = {s1}): chi-chi has posterior 81/98 >= 4/5 and s1 keeps
  // e_s1 = 81/100.
  CHECK(r.sizes.at("s1") == Q(81, 100));
  CHECK(r.sizes.at("s2") == Q(3, 10) + Q(4, 25));
  CHECK(r.sizes.at("s3") == Q(1, 100));
}

TEST_CASE("multistate: removal order and exhaustive scan") {
  int instances = 0;
  for (std::uint64_t seed = 0; seed < 250; ++seed) {
    Rng rng(DeriveSeed(12, 0, seed));
    const std::size_t m = 2 + rng.Below(4);
    const Prior prior = RandomPrior(rng, m);
    std::vector<int> degrees(1 + rng.Below(12));
    for (auto& d : degrees) d = static_cast<int>(rng.Below(5));
    const DegreeSequence seq(degrees);
    const auto batch = Algorithm1Multistate(seq, prior, RemovalOrder::kBatch);
    const auto one = Algorithm1Multistate(seq, prior, RemovalOrder::kOneAtATime);
    CHECK(batch.survivors == one.survivors);
    CHECK(batch.sizes == one.sizes);
    const auto best = MaximalConsistent(prior, degrees);
    std::vector<std::string> expected;
    for (std::size_t s = 0; s < m; ++s) {
      if (best[s]) expected.push_back(prior.state(s).id);
    }
    CHECK(batch.survivors == expected);
    ++instances;
  }
  CHECK(instances == 250);
}
