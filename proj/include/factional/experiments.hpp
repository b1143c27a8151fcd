#pragma once

// Parameter sweeps, Monte-Carlo concentration checks and randomized model
// batteries behind the CLI subcommands and the acceptance run.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "factional/algorithms.hpp"
#include "factional/epistemic.hpp"
#include "factional/io.hpp"
#include "factional/netgen.hpp"
#include "factional/rational.hpp"
#include "factional/revolt_model.hpp"

namespace factional {

// Runs fn(0..count-1) on `jobs` threads. fn must only write to its own slot
// of a pre-sized result. If any call throws, the exception from the lowest
// index is rethrown after all workers finish.
void ParallelFor(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

// Inclusive arithmetic range from, from + step, ... <= to.
std::vector<Rational> RationalRange(const Rational& from, const Rational& to, const Rational& step);

enum class SweepAxis { kParam, kP, kMu };
SweepAxis ParseSweepAxis(const std::string& name);  // "param", "p", "mu"
const char* SweepAxisName(SweepAxis axis);

struct SweepSpec {
  Family family = Family::kConstant;
  int n = 1000;
  SweepAxis axis = SweepAxis::kParam;
  std::vector<Rational> values;
  Rational fixed_param;  // family parameter when the axis is p or mu
  int trials = 100;      // ignored for the constant family
  std::uint64_t seed = 0;
  Prior prior = MotivatingPrior();
};

struct SweepRow {
  Rational value;
  Rational mean_a;
  Rational mean_b;
  double stddev_a = 0;
  double stddev_b = 0;
  int runs = 0;
  int relabeled = 0;
};

// Graph seeds: DeriveSeed(seed, point, trial) on the param axis; on the p and
// mu axes the graphs depend on the trial only (point 0), so every axis value
// sees the same graphs.
std::vector<SweepRow> RunSweep(const SweepSpec& spec, int jobs = 1);
Table SweepTable(const SweepSpec& spec, const std::vector<SweepRow>& rows);

// Draws one type exactly from the distribution.
AgentType SampleType(Rng& rng, const TypeDistribution& dist);

struct ValidateSpec {
  ConcreteGraph graph;
  Prior prior = MotivatingPrior();
  std::string state;
  int trials = 200;
  std::uint64_t seed = 0;
  Rational eta = Rational(1, 1000);
};

struct TrialCounts {
  long alpha = 0;
  long chi = 0;
  long candidates = 0;
};

struct ValidateReport {
  long n = 0;
  std::vector<std::string> candidate_states;
  Rational expected_alpha;      // e_s(alpha)
  Rational expected_chi;        // e_s(chi)
  Rational expected_candidate;  // e_s(C_C) on the graph's degree sequence
  std::vector<TrialCounts> trials;
  double mean_alpha = 0;
  double mean_chi = 0;
  double mean_candidate = 0;
  double max_dev_alpha = 0;  // in agents
  double max_dev_chi = 0;
  double max_dev_candidate = 0;
  long chi_star = 0;                   // 2-hop bound for the graph
  double envelope_independent = 0;     // deviation with chi_star = 1
  double envelope_dependent = 0;       // deviation with the graph's chi_star
  bool within_envelope = false;
};

// Samples state-conditioned type assignments on a concrete graph and counts
// alpha, chi and candidate agents. Candidate agents are chi agents whose
// posterior on the candidate states is at least p.
ValidateReport RunValidate(const ValidateSpec& spec, int jobs = 1);
Table ValidateTable(const ValidateReport& report);

// Random finite model: 1..max_outcomes outcomes with weights 1..8, 1..max_agents
// agents with random partitions.
epistemic::EpistemicModel RandomModel(Rng& rng, std::size_t max_outcomes = 6, std::size_t max_agents = 3);
// Uniform on {0, 1/8, ..., 1}.
Rational RandomEighth(Rng& rng);

struct SearchFixpointReport {
  long models = 0;
  long checks = 0;         // (model, F, omega) triples
  long disagreements = 0;  // triples where search and fixpoint differ
  long models_with_disagreement = 0;
  std::optional<Json> first_counterexample;
};
// Seeds: model i uses DeriveSeed(seed, 1, i).
SearchFixpointReport RunSearchFixpointBattery(long models, std::uint64_t seed, int jobs = 1);

struct LawReport {
  long models = 0;
  long monotonicity_checks = 0;
  long monotonicity_failures = 0;
  long idempotence_checks = 0;
  long idempotence_failures = 0;
  long continuity_checks = 0;
  long continuity_failures = 0;
};
// Same model stream as RunSearchFixpointBattery.
LawReport RunOperatorLawBattery(long models, std::uint64_t seed, int jobs = 1);

Json ModelToJson(const epistemic::EpistemicModel& model);

}  // namespace factional
