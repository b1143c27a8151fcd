#include "factional/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "factional/bounds.hpp"
#include "factional/error.hpp"

namespace factional {

void ParallelFor(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<Rational> RationalRange(const Rational& from, const Rational& to, const Rational& step) {
  if (sgn(step) <= 0) Fail(ErrorKind::kInvalidArgument, "step must be positive");
  if (from > to) Fail(ErrorKind::kInvalidArgument, "range is empty: from > to");
  std::vector<Rational> out;
  for (Rational x = from; x <= to; x += step) {
    out.push_back(x);
    if (out.size() > 1000000) Fail(ErrorKind::kInvalidArgument, "range has more than 10^6 points");
  }
  return out;
}

SweepAxis ParseSweepAxis(const std::string& name) {
  if (name == "param") return SweepAxis::kParam;
  if (name == "p") return SweepAxis::kP;
  if (name == "mu") return SweepAxis::kMu;
  Fail(ErrorKind::kParse, "axis: expected param, p or mu, got '" + name + "'");
}

const char* SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kParam: return "param";
    case SweepAxis::kP: return "p";
    case SweepAxis::kMu: return "mu";
  }
  return "?";
}

namespace {

struct RunValue {
  Rational a;
  Rational b;
  bool relabeled = false;
};

RunValue RunOne(const ContextTable& table, const Prior& prior) {
  const RelabeledResult r = Algorithm1AutoRelabel(table, prior);
  return {r.result.sizes.at("A"), r.result.sizes.at("B"), r.relabeled};
}

std::string ValueText(const Rational& v) { return FormatRational(v) + " (" + FormatDecimal(v, 6) + ")"; }

[[noreturn]] void RethrowAt(const Error& e, const std::string& axis, const Rational& value) {
  throw Error(e.kind(), "at " + axis + " = " + ValueText(value) + ": " + e.what());
}

SweepRow Aggregate(const Rational& value, const std::vector<RunValue>& runs) {
  SweepRow row;
  row.value = value;
  row.runs = static_cast<int>(runs.size());
  Rational sum_a = 0;
  Rational sum_b = 0;
  for (const auto& r : runs) {
    sum_a += r.a;
    sum_b += r.b;
    if (r.relabeled) ++row.relabeled;
  }
  const auto k = static_cast<unsigned long>(runs.size());
  row.mean_a = sum_a / k;
  row.mean_b = sum_b / k;
  if (runs.size() > 1) {
    const double ma = row.mean_a.get_d();
    const double mb = row.mean_b.get_d();
    double va = 0;
    double vb = 0;
    for (const auto& r : runs) {
      va += (r.a.get_d() - ma) * (r.a.get_d() - ma);
      vb += (r.b.get_d() - mb) * (r.b.get_d() - mb);
    }
    row.stddev_a = std::sqrt(va / static_cast<double>(runs.size() - 1));
    row.stddev_b = std::sqrt(vb / static_cast<double>(runs.size() - 1));
  }
  return row;
}

}  // namespace

std::vector<SweepRow> RunSweep(const SweepSpec& spec, int jobs) {
  if (spec.values.empty()) Fail(ErrorKind::kInvalidArgument, "sweep has no axis values");
  if (spec.trials < 1) Fail(ErrorKind::kInvalidArgument, "trials must be at least 1");
  const bool deterministic = spec.family == Family::kConstant;
  const std::size_t trials = deterministic ? 1 : static_cast<std::size_t>(spec.trials);
  const std::size_t points = spec.values.size();
  const char* axis = spec.axis == SweepAxis::kParam ? "param" : SweepAxisName(spec.axis);
  std::vector<std::vector<RunValue>> results(points, std::vector<RunValue>(trials));

  auto gen_spec = [&](const Rational& param, std::size_t point, std::size_t trial) {
    return GenSpec{spec.family, spec.n, param, DeriveSeed(spec.seed, point, trial)};
  };

  if (spec.axis == SweepAxis::kParam) {
    ParallelFor(points * trials, jobs, [&](std::size_t job) {
      const std::size_t point = job / trials;
      const std::size_t trial = job % trials;
      const Rational& value = spec.values[point];
      try {
        const DegreeSequence seq = Generate(gen_spec(value, point, trial));
        results[point][trial] = RunOne(ContextTable(seq, spec.prior), spec.prior);
      } catch (const Error& e) {
        RethrowAt(e, axis, value);
      }
    });
  } else {
    // One graph per trial, shared by every threshold value.
    ParallelFor(trials, jobs, [&](std::size_t trial) {
      const DegreeSequence seq = Generate(gen_spec(spec.fixed_param, 0, trial));
      const ContextTable table(seq, spec.prior);
      for (std::size_t point = 0; point < points; ++point) {
        const Rational& value = spec.values[point];
        try {
          const Prior prior = spec.axis == SweepAxis::kP ? spec.prior.WithThresholds(value, spec.prior.mu())
                                                         : spec.prior.WithThresholds(spec.prior.p(), value);
          results[point][trial] = RunOne(table, prior);
        } catch (const Error& e) {
          RethrowAt(e, axis, value);
        }
      }
    });
  }

  std::vector<SweepRow> rows;
  for (std::size_t point = 0; point < points; ++point) rows.push_back(Aggregate(spec.values[point], results[point]));
  return rows;
}

Table SweepTable(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  Table t;
  t.columns = {"family", "axis", "value_exact", "value", "mean_e_A_exact", "mean_e_A", "mean_e_B_exact",
               "mean_e_B", "stddev_e_A", "stddev_e_B", "runs", "relabeled"};
  for (const auto& r : rows) {
    char sa[64];
    char sb[64];
    std::snprintf(sa, sizeof sa, "%.12f", r.stddev_a);
    std::snprintf(sb, sizeof sb, "%.12f", r.stddev_b);
    t.Add({FamilyName(spec.family), SweepAxisName(spec.axis), FormatRational(r.value), FormatDecimal(r.value),
           FormatRational(r.mean_a), FormatDecimal(r.mean_a), FormatRational(r.mean_b), FormatDecimal(r.mean_b), sa,
           sb, std::to_string(r.runs), std::to_string(r.relabeled)});
  }
  return t;
}

AgentType SampleType(Rng& rng, const TypeDistribution& dist) {
  BigInt den = 1;
  for (AgentType t : kAllTypes) den = lcm(den, dist[t].get_den());
  if (!den.fits_ulong_p()) Fail(ErrorKind::kInvalidArgument, "type distribution denominators too large to sample");
  const std::uint64_t r = rng.Below(den.get_ui());
  std::uint64_t acc = 0;
  for (AgentType t : kAllTypes) {
    const BigInt scaled = dist[t].get_num() * (den / dist[t].get_den());
    acc += scaled.get_ui();
    if (r < acc) return t;
  }
  Fail(ErrorKind::kInternal, "type distribution does not sum to one");
}

ValidateReport RunValidate(const ValidateSpec& spec, int jobs) {
  if (spec.trials < 1) Fail(ErrorKind::kInvalidArgument, "trials must be at least 1");
  const ConcreteGraph& g = spec.graph;
  const int n = g.num_vertices();
  if (n < 1) Fail(ErrorKind::kInvalidArgument, "graph has no vertices");
  const Prior& prior = spec.prior;
  const std::size_t state = prior.state_index(spec.state);
  const TypeDistribution& dist = prior.state(state).types;

  ValidateReport report;
  report.n = n;
  std::vector<bool> candidate_states(prior.num_states(), false);
  for (std::size_t s = 0; s < prior.num_states(); ++s) {
    const TypeDistribution& d = prior.state(s).types;
    if (d[AgentType::kAlpha] + d[AgentType::kChi] >= prior.mu()) {
      candidate_states[s] = true;
      report.candidate_states.push_back(prior.state(s).id);
    }
  }

  const DegreeSequence seq(g.Degrees());
  const ContextTable table(seq, prior);
  std::set<ContextClass> candidates;
  Rational mass = 0;
  if (!report.candidate_states.empty()) {
    for (const auto& [d, count] : table.histogram()) {
      for (const auto& row : table.rows(d)) {
        if (!ContextTable::PosteriorAtLeast(row, candidate_states, prior.p())) continue;
        candidates.insert(row.context);
        mass += row.likelihood[state] * count;
      }
    }
  }
  report.expected_candidate = mass / static_cast<unsigned long>(n);
  report.expected_alpha = dist[AgentType::kAlpha];
  report.expected_chi = dist[AgentType::kChi];

  report.trials.resize(static_cast<std::size_t>(spec.trials));
  ParallelFor(report.trials.size(), jobs, [&](std::size_t trial) {
    Rng rng(DeriveSeed(spec.seed, 0, trial));
    std::vector<AgentType> types(static_cast<std::size_t>(n));
    for (auto& t : types) t = SampleType(rng, dist);
    TrialCounts c;
    for (int v = 0; v < n; ++v) {
      const AgentType own = types[static_cast<std::size_t>(v)];
      if (own == AgentType::kAlpha) ++c.alpha;
      if (own != AgentType::kChi) continue;
      ++c.chi;
      std::array<int, kNumTypes> counts{};
      for (int u : g.neighbors(v)) ++counts[Index(types[static_cast<std::size_t>(u)])];
      if (candidates.count(MakeContext(AgentType::kChi, counts[0], counts[1], counts[2]))) ++c.candidates;
    }
    report.trials[trial] = c;
  });

  const double dn = n;
  const double ea = report.expected_alpha.get_d() * dn;
  const double ec = report.expected_chi.get_d() * dn;
  const double ek = report.expected_candidate.get_d() * dn;
  double sa = 0;
  double sc = 0;
  double sk = 0;
  for (const auto& c : report.trials) {
    sa += static_cast<double>(c.alpha);
    sc += static_cast<double>(c.chi);
    sk += static_cast<double>(c.candidates);
    report.max_dev_alpha = std::max(report.max_dev_alpha, std::abs(static_cast<double>(c.alpha) - ea));
    report.max_dev_chi = std::max(report.max_dev_chi, std::abs(static_cast<double>(c.chi) - ec));
    report.max_dev_candidate = std::max(report.max_dev_candidate, std::abs(static_cast<double>(c.candidates) - ek));
  }
  const double k = static_cast<double>(report.trials.size());
  report.mean_alpha = sa / k / dn;
  report.mean_chi = sc / k / dn;
  report.mean_candidate = sk / k / dn;
  report.chi_star = ChiStarBound(g);
  report.envelope_independent = ChernoffEnvelope(n, 1, spec.eta);
  report.envelope_dependent = ChernoffEnvelope(n, report.chi_star, spec.eta);
  report.within_envelope = report.max_dev_alpha <= report.envelope_independent + kReportTolerance &&
                           report.max_dev_chi <= report.envelope_independent + kReportTolerance &&
                           report.max_dev_candidate <= report.envelope_dependent + kReportTolerance;
  return report;
}

Table ValidateTable(const ValidateReport& report) {
  Table t;
  t.columns = {"quantity", "expected_exact", "expected", "empirical_mean", "max_abs_deviation_agents", "envelope_agents"};
  auto num = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", x);
    return std::string(buf);
  };
  t.Add({"alpha_fraction", FormatRational(report.expected_alpha), FormatDecimal(report.expected_alpha),
         num(report.mean_alpha), num(report.max_dev_alpha), num(report.envelope_independent)});
  t.Add({"chi_fraction", FormatRational(report.expected_chi), FormatDecimal(report.expected_chi), num(report.mean_chi),
         num(report.max_dev_chi), num(report.envelope_independent)});
  t.Add({"candidate_fraction", FormatRational(report.expected_candidate), FormatDecimal(report.expected_candidate),
         num(report.mean_candidate), num(report.max_dev_candidate), num(report.envelope_dependent)});
  return t;
}

epistemic::EpistemicModel RandomModel(Rng& rng, std::size_t max_outcomes, std::size_t max_agents) {
  using namespace epistemic;
  const std::size_t size = 1 + rng.Below(max_outcomes);
  std::vector<std::string> outcomes;
  std::vector<unsigned long> weights;
  unsigned long total = 0;
  for (std::size_t i = 0; i < size; ++i) {
    outcomes.push_back("w" + std::to_string(i));
    weights.push_back(1 + rng.Below(8));
    total += weights.back();
  }
  std::vector<Rational> prob;
  for (unsigned long w : weights) prob.emplace_back(w, total);
  for (auto& q : prob) q.canonicalize();
  FiniteProbSpace space(outcomes, prob);

  const std::size_t agents = 1 + rng.Below(max_agents);
  std::vector<std::string> names;
  std::vector<AgentPartition> partitions;
  for (std::size_t a = 0; a < agents; ++a) {
    std::vector<std::size_t> label(size);
    for (auto& l : label) l = rng.Below(size);
    // Compact labels into cells in order of first appearance.
    std::vector<std::vector<std::size_t>> cells;
    std::vector<long> cell_of_label(size, -1);
    for (std::size_t o = 0; o < size; ++o) {
      if (cell_of_label[label[o]] < 0) {
        cell_of_label[label[o]] = static_cast<long>(cells.size());
        cells.emplace_back();
      }
      cells[static_cast<std::size_t>(cell_of_label[label[o]])].push_back(o);
    }
    names.push_back("i" + std::to_string(a + 1));
    partitions.emplace_back(size, std::move(cells));
  }
  return EpistemicModel(std::move(space), std::move(names), std::move(partitions));
}

Rational RandomEighth(Rng& rng) {
  Rational r(static_cast<unsigned long>(rng.Below(9)), 8UL);
  r.canonicalize();
  return r;
}

Json ModelToJson(const epistemic::EpistemicModel& model) {
  Json j;
  j["outcomes"] = model.space().outcomes();
  Json prob = Json::array();
  for (const auto& q : model.space().prob()) prob.push_back(FormatRational(q));
  j["prob"] = prob;
  Json agents = Json::object();
  for (std::size_t a = 0; a < model.num_agents(); ++a) {
    Json cells = Json::array();
    for (const auto& cell : model.partition(a).cells()) {
      Json c = Json::array();
      for (std::size_t o : cell) c.push_back(model.space().outcomes()[o]);
      cells.push_back(c);
    }
    agents[model.agents()[a]] = cells;
  }
  j["agents"] = agents;
  return j;
}

namespace {

struct ModelDraw {
  epistemic::EpistemicModel model;
  Rational p;
  Rational mu;
};

ModelDraw DrawModel(std::uint64_t seed, long index) {
  Rng rng(DeriveSeed(seed, 1, static_cast<std::uint64_t>(index)));
  epistemic::EpistemicModel model = RandomModel(rng);
  Rational p = RandomEighth(rng);
  Rational mu = RandomEighth(rng);
  return {std::move(model), std::move(p), std::move(mu)};
}

}  // namespace

SearchFixpointReport RunSearchFixpointBattery(long models, std::uint64_t seed, int jobs) {
  using namespace epistemic;
  struct PerModel {
    long checks = 0;
    long disagreements = 0;
    std::optional<Json> example;
  };
  std::vector<PerModel> per(static_cast<std::size_t>(models));
  ParallelFor(per.size(), jobs, [&](std::size_t i) {
    ModelDraw draw = DrawModel(seed, static_cast<long>(i));
    const std::size_t size = draw.model.space().size();
    PerModel& out = per[i];
    for (unsigned long long mask = 0; mask < (1ULL << size); ++mask) {
      const Event f = Event::FromMask(size, mask);
      const Event fixpoint = CommonBeliefFixpoint(draw.model, draw.p, draw.mu, f);
      const Event search = CommonBeliefSearchSet(draw.model, draw.p, draw.mu, f);
      out.checks += static_cast<long>(size);
      for (std::size_t w = 0; w < size; ++w) {
        if (fixpoint.contains(w) != search.contains(w)) ++out.disagreements;
      }
      if (!(fixpoint == search) && !out.example) {
        Json ex;
        ex["model"] = ModelToJson(draw.model);
        ex["p"] = FormatRational(draw.p);
        ex["mu"] = FormatRational(draw.mu);
        ex["F"] = f.labels(draw.model.space());
        ex["fixpoint"] = fixpoint.labels(draw.model.space());
        ex["search"] = search.labels(draw.model.space());
        out.example = std::move(ex);
      }
    }
  });
  SearchFixpointReport report;
  report.models = models;
  for (auto& m : per) {
    report.checks += m.checks;
    report.disagreements += m.disagreements;
    if (m.disagreements > 0) ++report.models_with_disagreement;
    if (m.example && !report.first_counterexample) report.first_counterexample = std::move(m.example);
  }
  return report;
}

LawReport RunOperatorLawBattery(long models, std::uint64_t seed, int jobs) {
  using namespace epistemic;
  std::vector<LawReport> per(static_cast<std::size_t>(models));
  ParallelFor(per.size(), jobs, [&](std::size_t i) {
    ModelDraw draw = DrawModel(seed, static_cast<long>(i));
    const EpistemicModel& model = draw.model;
    const std::size_t size = model.space().size();
    const unsigned long long events = 1ULL << size;
    Rng rng(DeriveSeed(seed, 2, i));
    LawReport& r = per[i];
    for (std::size_t agent = 0; agent < model.num_agents(); ++agent) {
      std::vector<Event> belief(events);
      for (unsigned long long m = 0; m < events; ++m) {
        belief[m] = BeliefOperator(model, agent, draw.p, Event::FromMask(size, m));
      }
      for (unsigned long long e = 0; e < events; ++e) {
        // Idempotence.
        ++r.idempotence_checks;
        if (!(BeliefOperator(model, agent, draw.p, belief[e]) == belief[e])) ++r.idempotence_failures;
        // Monotonicity over every superset F of E.
        for (unsigned long long f = e;; f = (f + 1) | e) {
          ++r.monotonicity_checks;
          if (!belief[e].is_subset_of(belief[f])) ++r.monotonicity_failures;
          if (f == events - 1) break;
        }
      }
      // Continuity along random decreasing chains.
      for (int chain = 0; chain < 4; ++chain) {
        unsigned long long current = events - 1 - (rng.Below(events));
        std::vector<unsigned long long> links{current};
        while (current != 0) {
          current &= ~(1ULL << rng.Below(size));
          links.push_back(current);
        }
        unsigned long long meet = events - 1;
        Event meet_of_beliefs = Event::Full(size);
        for (unsigned long long l : links) {
          meet &= l;
          meet_of_beliefs = meet_of_beliefs & belief[l];
        }
        ++r.continuity_checks;
        if (!(belief[meet] == meet_of_beliefs)) ++r.continuity_failures;
      }
    }
  });
  LawReport total;
  total.models = models;
  for (const auto& r : per) {
    total.monotonicity_checks += r.monotonicity_checks;
    total.monotonicity_failures += r.monotonicity_failures;
    total.idempotence_checks += r.idempotence_checks;
    total.idempotence_failures += r.idempotence_failures;
    total.continuity_checks += r.continuity_checks;
    total.continuity_failures += r.continuity_failures;
  }
  return total;
}

}  // namespace factional
