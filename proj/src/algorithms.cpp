#include "factional/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "factional/error.hpp"

namespace factional {

DegreeSequence::DegreeSequence(std::vector<int> d) : degrees(std::move(d)) {
  if (degrees.empty()) Fail(ErrorKind::kInvalidArgument, "degree sequence is empty");
  for (int x : degrees) {
    if (x < 0) Fail(ErrorKind::kInvalidArgument, "negative degree " + std::to_string(x));
  }
}

DegreeSequence DegreeSequence::Constant(std::size_t n, int d) {
  return DegreeSequence(std::vector<int>(n, d));
}

int DegreeSequence::max_degree() const {
  return degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
}

std::map<int, long> DegreeSequence::Histogram() const {
  std::map<int, long> h;
  for (int d : degrees) ++h[d];
  return h;
}

const Rational& RevoltSizes::at(const std::string& state) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == state) return x[i];
  }
  Fail(ErrorKind::kInvalidArgument, "no revolt size for state '" + state + "'");
}

const char* OutcomeName(PromiseOutcome outcome) {
  switch (outcome) {
    case PromiseOutcome::kOmega: return "Omega";
    case PromiseOutcome::kA: return "A";
    case PromiseOutcome::kEmpty: return "Empty";
    case PromiseOutcome::kNull: return "Null";
  }
  return "?";
}

const char* BranchName(Algorithm1Branch branch) {
  switch (branch) {
    case Algorithm1Branch::kNoCandidates: return "no-candidate-states";
    case Algorithm1Branch::kBothCandidates: return "both-candidate-states";
    case Algorithm1Branch::kOnlyACandidateRevolt: return "only-A-candidate-revolt";
    case Algorithm1Branch::kOnlyACandidateCollapse: return "only-A-candidate-collapse";
  }
  return "?";
}

Rational ExpectedFraction(std::size_t state, std::span<const AgentType> types, const Prior& prior) {
  if (state >= prior.num_states()) Fail(ErrorKind::kInvalidArgument, "state index out of range");
  std::set<AgentType> unique(types.begin(), types.end());
  Rational total = 0;
  for (AgentType t : unique) total += prior.state(state).types[t];
  return total;
}

Rational ExpectedFraction(std::size_t state, const std::set<ContextClass>& contexts, const Prior& prior,
                          const DegreeSequence& degseq) {
  return ExpectedFraction(state, contexts, {}, prior, degseq);
}

Rational ExpectedFraction(std::size_t state, const std::set<ContextClass>& contexts,
                         std::span<const AgentType> types, const Prior& prior, const DegreeSequence& degseq) {
  if (degseq.size() == 0) Fail(ErrorKind::kInvalidArgument, "degree sequence is empty");
  Rational total = ExpectedFraction(state, types, prior);
  const std::set<AgentType> covered(types.begin(), types.end());
  const auto histogram = degseq.Histogram();
  Rational context_mass = 0;
  for (const auto& c : contexts) {
    if (covered.count(c.own_type)) continue;
    auto it = histogram.find(c.degree);
    if (it == histogram.end()) continue;
    context_mass += ContextLikelihood(c, state, prior) * it->second;
  }
  total += context_mass / static_cast<unsigned long>(degseq.size());
  return total;
}

namespace {

bool SameDistributions(const Prior& a, const std::vector<TypeDistribution>& dists,
                       const std::vector<Rational>& probs) {
  if (a.num_states() != dists.size()) return false;
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    if (!(a.state(s).types == dists[s]) || a.state(s).prob != probs[s]) return false;
  }
  return true;
}

}  // namespace

ContextTable::ContextTable(const DegreeSequence& degseq, const Prior& prior)
    : n_(degseq.size()), num_states_(prior.num_states()), histogram_(degseq.Histogram()) {
  if (n_ == 0) Fail(ErrorKind::kInvalidArgument, "degree sequence is empty");
  const int max_degree = degseq.max_degree();

  // powers[s][t][k] = Pr_s[t]^k
  std::vector<std::array<std::vector<Rational>, kNumTypes>> powers(num_states_);
  std::array<bool, kNumTypes> live{};
  for (std::size_t s = 0; s < num_states_; ++s) {
    for (AgentType t : kAllTypes) {
      auto& row = powers[s][Index(t)];
      row.resize(static_cast<std::size_t>(max_degree) + 1);
      row[0] = 1;
      for (int k = 1; k <= max_degree; ++k) row[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k) - 1] * prior.state(s).types[t];
      if (sgn(prior.state(s).types[t]) > 0) live[Index(t)] = true;
    }
  }

  for (const auto& [d, count] : histogram_) {
    (void)count;
    std::vector<Row> rows;
    const int alpha_max = live[Index(AgentType::kAlpha)] ? d : 0;
    for (int a = 0; a <= alpha_max; ++a) {
      const int nu_max = live[Index(AgentType::kNu)] ? d - a : 0;
      for (int v = 0; v <= nu_max; ++v) {
        const int c = d - a - v;
        if (c > 0 && !live[Index(AgentType::kChi)]) continue;
        Row row;
        row.context = MakeContext(AgentType::kChi, a, v, c);
        const Rational multinomial(Binomial(static_cast<unsigned>(d), static_cast<unsigned>(a)) *
                                   Binomial(static_cast<unsigned>(d - a), static_cast<unsigned>(v)));
        row.likelihood.resize(num_states_);
        row.joint.resize(num_states_);
        row.evidence = 0;
        for (std::size_t s = 0; s < num_states_; ++s) {
          const auto& pw = powers[s];
          row.likelihood[s] = prior.state(s).types[AgentType::kChi] * multinomial *
                              pw[Index(AgentType::kAlpha)][static_cast<std::size_t>(a)] *
                              pw[Index(AgentType::kNu)][static_cast<std::size_t>(v)] *
                              pw[Index(AgentType::kChi)][static_cast<std::size_t>(c)];
          row.joint[s] = row.likelihood[s] * prior.state(s).prob;
          row.evidence += row.joint[s];
        }
        if (sgn(row.evidence) == 0) continue;
        rows.push_back(std::move(row));
      }
    }
    rows_.emplace(d, std::move(rows));
  }
}

const std::vector<ContextTable::Row>& ContextTable::rows(int degree) const {
  static const std::vector<Row> kEmpty;
  auto it = rows_.find(degree);
  return it == rows_.end() ? kEmpty : it->second;
}

bool ContextTable::PosteriorAtLeast(const Row& row, const std::vector<bool>& subset, const Rational& p) {
  Rational mass = 0;
  for (std::size_t s = 0; s < row.joint.size(); ++s) {
    if (subset[s]) mass += row.joint[s];
  }
  return mass >= p * row.evidence;
}

Rational ContextTable::Posterior(const Row& row, const std::vector<bool>& subset) {
  Rational mass = 0;
  for (std::size_t s = 0; s < row.joint.size(); ++s) {
    if (subset[s]) mass += row.joint[s];
  }
  return mass / row.evidence;
}

namespace {

struct TwoStates {
  std::size_t a;
  std::size_t b;
};

TwoStates RequireTwoStates(const Prior& prior) {
  if (prior.num_states() != 2) {
    Fail(ErrorKind::kNotTwoStates, "this algorithm needs exactly two states, prior has " +
                                       std::to_string(prior.num_states()));
  }
  const auto& s0 = prior.state(0).id;
  const auto& s1 = prior.state(1).id;
  if (s0 == "A" && s1 == "B") return {0, 1};
  if (s0 == "B" && s1 == "A") return {1, 0};
  Fail(ErrorKind::kNotTwoStates, "two-state algorithms need states labelled A and B, got '" + s0 + "' and '" +
                                     s1 + "'");
}

void RequireMatchingTable(const ContextTable& table, const Prior& prior) {
  if (table.num_states() != prior.num_states()) {
    Fail(ErrorKind::kInvalidArgument, "context table was built for a different number of states");
  }
}

Rational AlphaMass(const Prior& prior, std::size_t s) { return prior.state(s).types[AgentType::kAlpha]; }

Rational ChiAlphaMass(const Prior& prior, std::size_t s) {
  return prior.state(s).types[AgentType::kAlpha] + prior.state(s).types[AgentType::kChi];
}

RevoltSizes MakeSizes(const Prior& prior, std::vector<Rational> x) {
  RevoltSizes sizes;
  for (const auto& s : prior.states()) sizes.states.push_back(s.id);
  sizes.x = std::move(x);
  return sizes;
}

// Candidate chi contexts for the subset of states `subset`, restricted to
// degrees accepted by `keep_degree`; accumulates each state's context mass
// (before division by n) and the closest posteriors on either side of p.
struct CandidateScan {
  std::vector<Rational> mass;  // per state, sum over candidates of count_d * likelihood
  std::set<ContextClass> contexts;
  std::optional<Rational> below;     // largest posterior < p
  std::optional<Rational> at_least;  // smallest posterior >= p
};

template <typename KeepDegree>
CandidateScan ScanCandidates(const ContextTable& table, const std::vector<bool>& subset, const Rational& p,
                             bool collect, KeepDegree keep_degree) {
  CandidateScan scan;
  scan.mass.assign(table.num_states(), Rational(0));
  for (const auto& [d, count] : table.histogram()) {
    if (!keep_degree(d)) continue;
    std::vector<Rational> degree_mass(table.num_states(), Rational(0));
    for (const auto& row : table.rows(d)) {
      const bool candidate = ContextTable::PosteriorAtLeast(row, subset, p);
      if (collect) {
        Rational post = ContextTable::Posterior(row, subset);
        if (candidate) {
          if (!scan.at_least || post < *scan.at_least) scan.at_least = post;
        } else if (!scan.below || post > *scan.below) {
          scan.below = post;
        }
      }
      if (!candidate) continue;
      if (collect) scan.contexts.insert(row.context);
      for (std::size_t s = 0; s < table.num_states(); ++s) degree_mass[s] += row.likelihood[s];
    }
    for (std::size_t s = 0; s < table.num_states(); ++s) scan.mass[s] += degree_mass[s] * count;
  }
  return scan;
}

void CheckLabelOrder(const Algorithm1Result& result, const TwoStates& ab) {
  if (result.sizes.x[ab.a] < result.sizes.x[ab.b]) {
    Fail(ErrorKind::kMislabeledStates, "states appear mislabelled: X_A = " + FormatRational(result.sizes.x[ab.a]) +
                                           " < X_B = " + FormatRational(result.sizes.x[ab.b]) +
                                           "; swap the labels or use auto-relabel");
  }
}

}  // namespace

Algorithm1Result Algorithm1Detailed(const DegreeSequence& degseq, const Prior& prior) {
  RequireTwoStates(prior);
  return Algorithm1Detailed(ContextTable(degseq, prior), prior);
}

Algorithm1Result Algorithm1Detailed(const ContextTable& table, const Prior& prior) {
  const TwoStates ab = RequireTwoStates(prior);
  RequireMatchingTable(table, prior);
  const Rational& mu = prior.mu();
  const Rational& p = prior.p();
  const auto n = static_cast<unsigned long>(table.n());

  Algorithm1Result result;
  std::vector<Rational> chi_alpha = {ChiAlphaMass(prior, 0), ChiAlphaMass(prior, 1)};
  std::vector<Rational> alpha = {AlphaMass(prior, 0), AlphaMass(prior, 1)};
  const bool a_candidate = chi_alpha[ab.a] >= mu;
  const bool b_candidate = chi_alpha[ab.b] >= mu;
  result.comparisons.push_back({"e_A(chi+alpha) >= mu", chi_alpha[ab.a], mu, a_candidate});
  result.comparisons.push_back({"e_B(chi+alpha) >= mu", chi_alpha[ab.b], mu, b_candidate});
  if (a_candidate) result.candidate_states.push_back("A");
  if (b_candidate) result.candidate_states.push_back("B");

  if (!a_candidate && !b_candidate) {
    result.branch = Algorithm1Branch::kNoCandidates;
    result.sizes = MakeSizes(prior, alpha);
  } else if (a_candidate && b_candidate) {
    result.branch = Algorithm1Branch::kBothCandidates;
    result.sizes = MakeSizes(prior, chi_alpha);
  } else if (!a_candidate) {
    Fail(ErrorKind::kMislabeledStates,
         "only state B is a candidate state (e_B(chi+alpha) = " + FormatRational(chi_alpha[ab.b]) +
             " >= mu); the labels A and B appear swapped");
  } else {
    std::vector<bool> subset(2, false);
    subset[ab.a] = true;
    CandidateScan scan = ScanCandidates(table, subset, p, true, [](int) { return true; });
    result.candidate_contexts = std::move(scan.contexts);
    if (scan.below) result.comparisons.push_back({"largest posterior(A) below p", *scan.below, p, false});
    if (scan.at_least) result.comparisons.push_back({"smallest posterior(A) at or above p", *scan.at_least, p, true});
    std::vector<Rational> with_candidates(2);
    for (std::size_t s = 0; s < 2; ++s) with_candidates[s] = scan.mass[s] / n + alpha[s];
    const bool gate = with_candidates[ab.a] >= mu;
    result.comparisons.push_back({"e_A(C_C+alpha) >= mu", with_candidates[ab.a], mu, gate});
    if (gate) {
      result.branch = Algorithm1Branch::kOnlyACandidateRevolt;
      result.sizes = MakeSizes(prior, with_candidates);
    } else {
      result.branch = Algorithm1Branch::kOnlyACandidateCollapse;
      result.sizes = MakeSizes(prior, alpha);
    }
  }
  CheckLabelOrder(result, ab);
  return result;
}

RevoltSizes Algorithm1(const DegreeSequence& degseq, const Prior& prior) {
  return Algorithm1Detailed(degseq, prior).sizes;
}

Prior SwapStateLabels(const Prior& prior) {
  RequireTwoStates(prior);
  std::vector<StateSpec> states = prior.states();
  for (auto& s : states) s.id = (s.id == "A") ? "B" : "A";
  return Prior(prior.p(), prior.mu(), std::move(states));
}

RelabeledResult Algorithm1AutoRelabel(const DegreeSequence& degseq, const Prior& prior) {
  RequireTwoStates(prior);
  return Algorithm1AutoRelabel(ContextTable(degseq, prior), prior);
}

RelabeledResult Algorithm1AutoRelabel(const ContextTable& table, const Prior& prior) {
  try {
    return {Algorithm1Detailed(table, prior), false};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kMislabeledStates) throw;
  }
  RelabeledResult out{Algorithm1Detailed(table, SwapStateLabels(prior)), true};
  // Sizes are index-aligned with the caller's states; restore their ids.
  for (std::size_t s = 0; s < prior.num_states(); ++s) out.result.sizes.states[s] = prior.state(s).id;
  for (auto& id : out.result.candidate_states) id = (id == "A") ? "B" : "A";
  return out;
}

PromiseOutcome Algorithm2(const RevoltSizes& sizes, const Rational& mu_star) {
  const Rational& xa = sizes.at("A");
  const Rational& xb = sizes.at("B");
  const bool a_ok = xa >= mu_star;
  const bool b_ok = xb >= mu_star;
  if (a_ok && b_ok) return PromiseOutcome::kOmega;
  if (a_ok) return PromiseOutcome::kA;
  if (!b_ok) return PromiseOutcome::kEmpty;
  Fail(ErrorKind::kInvalidArgument, "revolt sizes violate X_A >= X_B");
}

namespace {

void ValidatePromise(const PromiseInstance& inst) {
  if (sgn(inst.epsilon) <= 0 || sgn(inst.delta) <= 0) {
    Fail(ErrorKind::kInvalidArgument, "epsilon and delta must be positive");
  }
  const Rational dp = inst.delta / 3;
  const Rational dm = inst.epsilon / 3;
  const Prior& prior = inst.prior;
  auto inside = [](const Rational& x) { return sgn(x) > 0 && x < 1; };
  if (!inside(prior.p() - dp) || !inside(prior.p() + dp)) {
    Fail(ErrorKind::kInvalidArgument, "p +/- delta/3 leaves (0, 1)");
  }
  if (!inside(prior.mu() - dm) || !inside(prior.mu() + dm)) {
    Fail(ErrorKind::kInvalidArgument, "mu +/- epsilon/3 leaves (0, 1)");
  }
}

struct PerturbedRuns {
  Algorithm1Result raised;
  Algorithm1Result lowered;
};

PerturbedRuns RunPerturbed(const ContextTable& table, const PromiseInstance& inst) {
  ValidatePromise(inst);
  const Rational dp = inst.delta / 3;
  const Rational dm = inst.epsilon / 3;
  const Prior& prior = inst.prior;
  return {Algorithm1Detailed(table, prior.WithThresholds(prior.p() + dp, prior.mu() + dm)),
          Algorithm1Detailed(table, prior.WithThresholds(prior.p() - dp, prior.mu() - dm))};
}

PromiseResult Combine(PerturbedRuns runs, const Rational& mu_star) {
  PromiseResult out;
  out.raised_outcome = Algorithm2(runs.raised.sizes, mu_star);
  out.lowered_outcome = Algorithm2(runs.lowered.sizes, mu_star);
  out.outcome = out.raised_outcome == out.lowered_outcome ? out.raised_outcome : PromiseOutcome::kNull;
  out.raised = std::move(runs.raised);
  out.lowered = std::move(runs.lowered);
  return out;
}

}  // namespace

PromiseResult Algorithm3Detailed(const PromiseInstance& inst) {
  RequireTwoStates(inst.prior);
  return Algorithm3Detailed(ContextTable(inst.degseq, inst.prior), inst);
}

PromiseResult Algorithm3Detailed(const ContextTable& table, const PromiseInstance& inst) {
  return Combine(RunPerturbed(table, inst), inst.mu_star);
}

PromiseOutcome Algorithm3(const PromiseInstance& inst) { return Algorithm3Detailed(inst).outcome; }

std::vector<std::pair<Rational, PromiseOutcome>> EquilibriaMap(const DegreeSequence& degseq, const Prior& prior,
                                                               const std::vector<Rational>& mu_grid,
                                                               const Rational& epsilon, const Rational& delta) {
  RequireTwoStates(prior);
  for (const auto& mu_star : mu_grid) {
    if (sgn(mu_star) < 0 || mu_star > 1) {
      Fail(ErrorKind::kInvalidArgument, "grid value " + FormatRational(mu_star) + " outside [0, 1]");
    }
  }
  ContextTable table(degseq, prior);
  // The perturbed Algorithm1 runs do not depend on mu*, so they are shared by
  // every grid point.
  PerturbedRuns runs = RunPerturbed(table, PromiseInstance{degseq, prior, Rational(0), epsilon, delta});
  std::vector<std::pair<Rational, PromiseOutcome>> out;
  out.reserve(mu_grid.size());
  for (const auto& mu_star : mu_grid) {
    const PromiseOutcome hi = Algorithm2(runs.raised.sizes, mu_star);
    const PromiseOutcome lo = Algorithm2(runs.lowered.sizes, mu_star);
    out.emplace_back(mu_star, hi == lo ? hi : PromiseOutcome::kNull);
  }
  return out;
}

Prior SmallestRevoltPrior(const Prior& prior) {
  const TwoStates ab = RequireTwoStates(prior);
  auto swapped = [](const TypeDistribution& d) {
    return TypeDistribution(d[AgentType::kNu], d[AgentType::kAlpha], d[AgentType::kChi]);
  };
  const StateSpec& a = prior.state(ab.a);
  const StateSpec& b = prior.state(ab.b);
  return Prior(1 - prior.p(), 1 - prior.mu(),
               {StateSpec{"A", b.prob, swapped(b.types)}, StateSpec{"B", a.prob, swapped(a.types)}});
}

RevoltSizes SmallestRevolt(const DegreeSequence& degseq, const Prior& prior) {
  const TwoStates ab = RequireTwoStates(prior);
  const Prior transformed = SmallestRevoltPrior(prior);
  // Transformed A' comes from original B and B' from original A.
  const RevoltSizes largest = Algorithm1AutoRelabel(degseq, transformed).result.sizes;
  std::vector<Rational> x(2);
  x[ab.a] = 1 - largest.at("B");
  x[ab.b] = 1 - largest.at("A");
  return MakeSizes(prior, std::move(x));
}

int HighDegreeCutoff(const Rational& c, std::size_t n) {
  if (sgn(c) <= 0) Fail(ErrorKind::kInvalidArgument, "cutoff constant c must be positive");
  // Smallest integer D with D^3 >= c^3 * n.
  const Rational target = c * c * c * static_cast<unsigned long>(n);
  auto cube = [](long d) { return Rational(BigInt(d) * d * d); };
  long d = std::max(0L, static_cast<long>(std::cbrt(target.get_d())) - 2);
  while (cube(d) < target) ++d;
  while (d > 0 && cube(d - 1) >= target) --d;
  return static_cast<int>(d);
}

GeneralResult Algorithm1General(const DegreeSequence& degseq, const Prior& prior, const Rational& cutoff_c,
                                const Rational& epsilon) {
  const TwoStates ab = RequireTwoStates(prior);
  GeneralResult out;
  const std::size_t n = degseq.size();
  if (n == 0) Fail(ErrorKind::kInvalidArgument, "degree sequence is empty");
  out.cutoff_degree = HighDegreeCutoff(cutoff_c, n);
  std::vector<int> low;
  for (int d : degseq.degrees) {
    if (d < out.cutoff_degree) low.push_back(d);
  }
  const std::size_t high = n - low.size();
  out.high_fraction = Ratio(high, n);

  if (out.high_fraction < epsilon) {
    out.high_ignored = true;
    out.sizes = Algorithm1(degseq, prior);
    return out;
  }

  const Rational& mu = prior.mu();
  std::vector<Rational> alpha = {AlphaMass(prior, 0), AlphaMass(prior, 1)};
  std::vector<Rational> chi_alpha = {ChiAlphaMass(prior, 0), ChiAlphaMass(prior, 1)};
  const bool a_candidate = chi_alpha[ab.a] >= mu;
  const bool b_candidate = chi_alpha[ab.b] >= mu;
  if (!a_candidate && !b_candidate) {
    out.sizes = MakeSizes(prior, alpha);
  } else if (a_candidate && b_candidate) {
    out.sizes = MakeSizes(prior, chi_alpha);
  } else if (!a_candidate) {
    Fail(ErrorKind::kMislabeledStates, "only state B is a candidate state; the labels A and B appear swapped");
  } else {
    std::vector<Rational> candidates(2, Rational(0));
    if (!low.empty()) {
      ContextTable table{DegreeSequence(low), prior};
      std::vector<bool> subset(2, false);
      subset[ab.a] = true;
      CandidateScan scan = ScanCandidates(table, subset, prior.p(), false, [](int) { return true; });
      for (std::size_t s = 0; s < 2; ++s) candidates[s] = scan.mass[s] / static_cast<unsigned long>(n);
    }
    std::vector<Rational> high_chi(2);
    for (std::size_t s = 0; s < 2; ++s) high_chi[s] = out.high_fraction * prior.state(s).types[AgentType::kChi];

    const Rational gate_a = candidates[ab.a] + alpha[ab.a] + high_chi[ab.a];
    if (gate_a >= mu) {
      std::vector<Rational> x(2);
      x[ab.a] = gate_a;
      const Rational with_high_b = candidates[ab.b] + alpha[ab.b] + high_chi[ab.b];
      x[ab.b] = with_high_b >= mu ? with_high_b : Rational(candidates[ab.b] + alpha[ab.b]);
      out.sizes = MakeSizes(prior, std::move(x));
    } else {
      out.sizes = MakeSizes(prior, alpha);
    }
  }
  if (out.sizes.x[ab.a] < out.sizes.x[ab.b]) {
    Fail(ErrorKind::kMislabeledStates, "states appear mislabelled: X_A < X_B");
  }
  return out;
}

MultistateResult Algorithm1Multistate(const DegreeSequence& degseq, const Prior& prior, RemovalOrder order) {
  const std::size_t m = prior.num_states();
  const Rational& mu = prior.mu();
  MultistateResult out;
  std::vector<Rational> alpha(m), chi_alpha(m);
  std::vector<bool> in_set(m, false);
  std::size_t remaining = 0;
  for (std::size_t s = 0; s < m; ++s) {
    alpha[s] = AlphaMass(prior, s);
    chi_alpha[s] = ChiAlphaMass(prior, s);
    if (chi_alpha[s] >= mu) {
      in_set[s] = true;
      ++remaining;
      out.initial_candidates.push_back(prior.state(s).id);
    }
  }

  auto finish = [&](std::vector<Rational> x) {
    out.sizes = MakeSizes(prior, std::move(x));
    for (std::size_t s = 0; s < m; ++s) {
      if (in_set[s]) out.survivors.push_back(prior.state(s).id);
    }
    return out;
  };

  if (remaining == m) return finish(chi_alpha);
  if (remaining == 0) return finish(alpha);

  ContextTable table(degseq, prior);
  const auto n = static_cast<unsigned long>(table.n());
  std::vector<Rational> with_candidates(m);
  while (true) {
    ++out.iterations;
    CandidateScan scan = ScanCandidates(table, in_set, prior.p(), false, [](int) { return true; });
    for (std::size_t s = 0; s < m; ++s) with_candidates[s] = scan.mass[s] / n + alpha[s];
    std::vector<std::size_t> failing;
    for (std::size_t s = 0; s < m; ++s) {
      if (in_set[s] && with_candidates[s] < mu) failing.push_back(s);
    }
    if (failing.empty()) break;
    if (order == RemovalOrder::kOneAtATime) failing.resize(1);
    for (std::size_t s : failing) in_set[s] = false;
    remaining -= failing.size();
    if (remaining == 0) break;
  }
  // Candidate contexts revolt whatever the realised state, so every state
  // sees the same candidate mass once some candidate state survives.
  if (remaining == 0) return finish(alpha);
  return finish(with_candidates);
}

}  // namespace factional
