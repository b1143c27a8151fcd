// Command-line front end: analyze, promise, sweep, validate, oracle,
// epistemic, gen and bounds.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "factional/algorithms.hpp"
#include "factional/bounds.hpp"
#include "factional/epistemic.hpp"
#include "factional/error.hpp"
#include "factional/experiments.hpp"
#include "factional/io.hpp"
#include "factional/netgen.hpp"
#include "factional/oracle.hpp"

namespace {

using namespace factional;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNull = 4;

// Run configs are JSON: top-level keys are global flags, objects keyed by a
// subcommand name hold that subcommand's flags. Keys may use '_' or '-'.
// Non-string scalars and nested objects are passed through as JSON text, so
// "prior" may be given inline.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config: expected a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      if (value.is_object() && kSubcommands.count(key)) {
        for (const auto& [k, v] : value.items()) items.push_back(Item({key}, k, v));
      } else {
        items.push_back(Item({}, key, value));
      }
    }
    return items;
  }

 private:
  static inline const std::set<std::string> kSubcommands = {"analyze", "promise", "sweep", "validate",
                                                            "oracle",  "epistemic", "gen", "bounds"};

  static CLI::ConfigItem Item(std::vector<std::string> parents, std::string name, const Json& value) {
    CLI::ConfigItem item;
    item.parents = std::move(parents);
    for (char& c : name) {
      if (c == '_') c = '-';
    }
    item.name = std::move(name);
    auto text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_array()) {
      for (const auto& v : value) item.inputs.push_back(text(v));
    } else if (value.is_boolean()) {
      item.inputs.push_back(value.get<bool>() ? "true" : "false");
    } else {
      item.inputs.push_back(text(value));
    }
    return item;
  }
};

struct Globals {
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
  int jobs = 1;
};

// Degree sequence from a file or a generator spec.
struct DegreeSource {
  std::string file;
  std::string family;
  int n = 1000;
  std::string param;

  void Register(CLI::App* cmd) {
    cmd->add_option("--degseq", file, "degree-sequence file (one degree per line or 'count x degree')");
    cmd->add_option("--family", family, "generate instead: constant, powerlaw, ba or er");
    cmd->add_option("--n", n, "number of vertices for --family")->capture_default_str();
    cmd->add_option("--param", param, "family parameter: d, gamma, m or p_edge");
  }

  DegreeSequence Load(std::uint64_t seed) const {
    if (!file.empty()) {
      if (!family.empty()) Fail(ErrorKind::kParse, "degseq: give either --degseq or --family, not both");
      return LoadDegreeSequence(file);
    }
    if (family.empty()) Fail(ErrorKind::kParse, "degseq: one of --degseq or --family is required");
    if (param.empty()) Fail(ErrorKind::kParse, "param: required with --family");
    return Generate(GenSpec{ParseFamily(family), n, ParseRational(param), seed});
  }
};

Prior LoadPriorArg(const std::string& source) {
  if (source == "motivating") return MotivatingPrior();
  return LoadPrior(source);
}

// Concrete graph from an edge list, a torus spec "RxC" or a realized degree
// source.
struct GraphSource {
  std::string edges;
  std::string torus;
  DegreeSource degrees;

  void Register(CLI::App* cmd, bool allow_degrees) {
    cmd->add_option("--graph", edges, "edge-list file ('u v' per line, optional 'n N')");
    cmd->add_option("--torus", torus, "torus grid 'ROWSxCOLS'");
    if (allow_degrees) degrees.Register(cmd);
  }

  ConcreteGraph Load(std::uint64_t seed) const {
    const int given = !edges.empty() + !torus.empty() + (!degrees.file.empty() || !degrees.family.empty());
    if (given != 1) Fail(ErrorKind::kParse, "graph: give exactly one of --graph, --torus or a degree source");
    if (!edges.empty()) return LoadEdgeList(edges);
    if (!torus.empty()) {
      const auto x = torus.find('x');
      if (x == std::string::npos) Fail(ErrorKind::kParse, "torus: expected ROWSxCOLS, got '" + torus + "'");
      int rows = 0;
      int cols = 0;
      try {
        rows = std::stoi(torus.substr(0, x));
        cols = std::stoi(torus.substr(x + 1));
      } catch (const std::exception&) {
        Fail(ErrorKind::kParse, "torus: expected ROWSxCOLS, got '" + torus + "'");
      }
      return TorusGrid(rows, cols);
    }
    if (degrees.family == "ba") {
      return BarabasiAlbertGraph(degrees.n, static_cast<int>(ParseRational(degrees.param).get_d()), seed);
    }
    if (degrees.family == "er") return ErdosRenyiGraph(degrees.n, ParseRational(degrees.param), seed);
    return RealizeGraph(degrees.Load(seed), seed);
  }
};

class Output {
 public:
  explicit Output(const Globals& g) : format_(ParseFormat(g.format)) {
    if (!g.out.empty()) {
      file_.open(g.out, std::ios::binary);
      if (!file_) Fail(ErrorKind::kParse, "out: cannot open '" + g.out + "' for writing");
    }
  }

  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  Format format() const { return format_; }

  // CSV: the table. JSON: `extra` with the table under "rows".
  void Emit(const Table& table, Json extra = Json::object()) {
    if (format_ == Format::kCsv) {
      WriteCsv(stream(), table);
    } else {
      extra["rows"] = TableToJson(table);
      stream() << extra.dump(2) << '\n';
    }
  }

 private:
  Format format_;
  std::ofstream file_;
};

std::string Decimal(const Rational& x) { return FormatDecimal(x); }

Table SizesTable(const RevoltSizes& sizes) {
  Table t;
  t.columns = {"state", "X_exact", "X_decimal"};
  for (std::size_t s = 0; s < sizes.states.size(); ++s) {
    t.Add({sizes.states[s], FormatRational(sizes.x[s]), Decimal(sizes.x[s])});
  }
  return t;
}

Json ComparisonsJson(const std::vector<ThresholdComparison>& comparisons) {
  Json out = Json::array();
  for (const auto& c : comparisons) {
    out.push_back({{"test", c.label},
                   {"value", FormatRational(c.value)},
                   {"against", FormatRational(c.against)},
                   {"value_decimal", Decimal(c.value)},
                   {"passed", c.passed}});
  }
  return out;
}

Json Algorithm1Json(const Algorithm1Result& r) {
  Json j;
  j["branch"] = BranchName(r.branch);
  j["candidate_states"] = r.candidate_states;
  j["candidate_context_count"] = r.candidate_contexts.size();
  j["comparisons"] = ComparisonsJson(r.comparisons);
  Json sizes = Json::object();
  for (std::size_t s = 0; s < r.sizes.states.size(); ++s) sizes[r.sizes.states[s]] = FormatRational(r.sizes.x[s]);
  j["X"] = sizes;
  return j;
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string prior;
  DegreeSource degrees;
  bool general = false;
  bool multistate = false;
  bool smallest = false;
  bool auto_relabel = false;
  std::string cutoff_c = "1";
  std::string epsilon = "1/100";
  std::string removal = "batch";
};

int RunAnalyze(const AnalyzeArgs& a, const Globals& g) {
  const Prior prior = LoadPriorArg(a.prior);
  const DegreeSequence seq = a.degrees.Load(g.seed);
  if (a.general + a.multistate + a.smallest > 1) {
    Fail(ErrorKind::kParse, "analyze: --general, --multistate and --smallest are mutually exclusive");
  }
  Output out(g);
  Json meta;
  meta["n"] = seq.size();
  if (a.multistate) {
    const RemovalOrder order = a.removal == "one" ? RemovalOrder::kOneAtATime : RemovalOrder::kBatch;
    if (a.removal != "one" && a.removal != "batch") Fail(ErrorKind::kParse, "removal: expected batch or one");
    const MultistateResult r = Algorithm1Multistate(seq, prior, order);
    meta["variant"] = "multistate";
    meta["initial_candidates"] = r.initial_candidates;
    meta["survivors"] = r.survivors;
    meta["iterations"] = r.iterations;
    out.Emit(SizesTable(r.sizes), meta);
    return kExitOk;
  }
  if (a.smallest) {
    const RevoltSizes r = SmallestRevolt(seq, prior);
    meta["variant"] = "smallest";
    meta["transformed_prior"] = PriorToJson(SmallestRevoltPrior(prior));
    out.Emit(SizesTable(r), meta);
    return kExitOk;
  }
  Prior used = prior;
  bool relabeled = false;
  auto run = [&](const Prior& pr) {
    if (a.general) {
      const GeneralResult r =
          Algorithm1General(seq, pr, ParseRational(a.cutoff_c), ParseRational(a.epsilon));
      meta["variant"] = "general";
      meta["cutoff_degree"] = r.cutoff_degree;
      meta["high_fraction"] = FormatRational(r.high_fraction);
      meta["high_ignored"] = r.high_ignored;
      return r.sizes;
    }
    const Algorithm1Result r = Algorithm1Detailed(seq, pr);
    meta["variant"] = "largest";
    meta["algorithm1"] = Algorithm1Json(r);
    return r.sizes;
  };
  RevoltSizes sizes;
  try {
    sizes = run(used);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kMislabeledStates || !a.auto_relabel) {
      if (e.kind() == ErrorKind::kMislabeledStates) {
        throw Error(e.kind(), std::string(e.what()) + " (rerun with --auto-relabel)");
      }
      throw;
    }
    relabeled = true;
    used = SwapStateLabels(prior);
    sizes = run(used);
    for (std::size_t s = 0; s < prior.num_states(); ++s) sizes.states[s] = prior.state(s).id;
  }
  meta["relabeled"] = relabeled;
  out.Emit(SizesTable(sizes), meta);
  return kExitOk;
}

// ---- promise --------------------------------------------------------------

struct PromiseArgs {
  std::string prior;
  DegreeSource degrees;
  std::string mu_star;
  std::string grid_from;
  std::string grid_to;
  std::string grid_step;
  std::string epsilon = "1/200";
  std::string delta = "1/200";
  bool strict = false;
};

int RunPromise(const PromiseArgs& a, const Globals& g) {
  const Prior prior = LoadPriorArg(a.prior);
  const DegreeSequence seq = a.degrees.Load(g.seed);
  const Rational epsilon = ParseRational(a.epsilon);
  const Rational delta = ParseRational(a.delta);
  std::vector<Rational> grid;
  if (!a.mu_star.empty()) {
    if (!a.grid_step.empty()) Fail(ErrorKind::kParse, "promise: give --mu-star or a grid, not both");
    grid.push_back(ParseRational(a.mu_star));
  } else {
    if (a.grid_step.empty()) Fail(ErrorKind::kParse, "promise: --mu-star or --grid-step is required");
    grid = RationalRange(a.grid_from.empty() ? Rational(0) : ParseRational(a.grid_from),
                         a.grid_to.empty() ? Rational(1) : ParseRational(a.grid_to), ParseRational(a.grid_step));
  }
  Output out(g);
  Table t;
  t.columns = {"mu_star", "outcome"};
  Json meta;
  bool any_null = false;
  if (grid.size() == 1) {
    const PromiseResult r = Algorithm3Detailed(PromiseInstance{seq, prior, grid[0], epsilon, delta});
    t.Add({FormatRational(grid[0]), OutcomeName(r.outcome)});
    meta["raised"] = Algorithm1Json(r.raised);
    meta["raised"]["outcome"] = OutcomeName(r.raised_outcome);
    meta["lowered"] = Algorithm1Json(r.lowered);
    meta["lowered"]["outcome"] = OutcomeName(r.lowered_outcome);
    any_null = r.outcome == PromiseOutcome::kNull;
  } else {
    for (const auto& [mu_star, outcome] : EquilibriaMap(seq, prior, grid, epsilon, delta)) {
      t.Add({FormatRational(mu_star), OutcomeName(outcome)});
      any_null = any_null || outcome == PromiseOutcome::kNull;
    }
  }
  meta["epsilon"] = FormatRational(epsilon);
  meta["delta"] = FormatRational(delta);
  out.Emit(t, meta);
  return a.strict && any_null ? kExitNull : kExitOk;
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
  std::string prior = "motivating";
  std::string family = "constant";
  int n = 1000;
  std::string axis = "param";
  std::string from;
  std::string to;
  std::string step;
  std::string fixed_param;
  int trials = 100;
};

int RunSweepCommand(const SweepArgs& a, const Globals& g) {
  SweepSpec spec;
  spec.prior = LoadPriorArg(a.prior);
  spec.family = ParseFamily(a.family);
  spec.n = a.n;
  spec.axis = ParseSweepAxis(a.axis);
  if (a.from.empty() || a.to.empty() || a.step.empty()) Fail(ErrorKind::kParse, "sweep: --from, --to and --step are required");
  spec.values = RationalRange(ParseRational(a.from), ParseRational(a.to), ParseRational(a.step));
  if (spec.axis != SweepAxis::kParam) {
    if (a.fixed_param.empty()) Fail(ErrorKind::kParse, "fixed-param: required when the axis is p or mu");
    spec.fixed_param = ParseRational(a.fixed_param);
  }
  spec.trials = a.trials;
  spec.seed = g.seed;
  const auto rows = RunSweep(spec, g.jobs);
  Output out(g);
  Json meta;
  meta["family"] = FamilyName(spec.family);
  meta["n"] = spec.n;
  meta["seed"] = std::to_string(spec.seed);
  meta["trials"] = spec.family == Family::kConstant ? 1 : spec.trials;
  if (spec.family == Family::kPowerLaw) {
    meta["powerlaw_min_degree"] = 1;
    meta["powerlaw_max_degree"] = spec.n - 1;
  }
  out.Emit(SweepTable(spec, rows), meta);
  return kExitOk;
}

// ---- validate -------------------------------------------------------------

struct ValidateArgs {
  std::string prior = "motivating";
  GraphSource graph;
  std::string state = "A";
  int trials = 200;
  std::string eta = "1/1000";
};

int RunValidateCommand(const ValidateArgs& a, const Globals& g) {
  ValidateSpec spec;
  spec.prior = LoadPriorArg(a.prior);
  spec.graph = a.graph.Load(g.seed);
  spec.state = a.state;
  spec.trials = a.trials;
  spec.seed = g.seed;
  spec.eta = ParseRational(a.eta);
  const ValidateReport r = RunValidate(spec, g.jobs);
  Output out(g);
  Json meta;
  meta["n"] = r.n;
  meta["state"] = spec.state;
  meta["trials"] = spec.trials;
  meta["candidate_states"] = r.candidate_states;
  meta["chi_star_bound"] = r.chi_star;
  meta["eta"] = FormatRational(spec.eta);
  meta["within_envelope"] = r.within_envelope;
  out.Emit(ValidateTable(r), meta);
  return kExitOk;
}

// ---- oracle ---------------------------------------------------------------

struct OracleArgs {
  std::string prior;
  GraphSource graph;
  std::string mu_star;
  std::string q_star;
  int clique_k = 0;
  std::uint64_t budget = kDefaultOracleBudget;
};

int RunOracle(const OracleArgs& a, const Globals& g) {
  const ConcreteGraph graph = a.graph.Load(g.seed);
  std::optional<RevoltInstance> inst;
  if (a.clique_k > 0) {
    if (!a.prior.empty()) Fail(ErrorKind::kParse, "oracle: --clique-reduce builds its own prior; drop --prior");
    inst = CliqueReduction(graph, a.clique_k);
  } else {
    if (a.prior.empty() || a.mu_star.empty() || a.q_star.empty()) {
      Fail(ErrorKind::kParse, "oracle: --prior, --mu-star and --q-star are required without --clique-reduce");
    }
    inst = RevoltInstance{graph, LoadPriorArg(a.prior), ParseRational(a.mu_star), ParseRational(a.q_star)};
  }
  OracleModel model(inst->graph, inst->prior, a.budget);
  const StrategyProfile greatest = model.Greatest();
  const Rational probability = model.SupportProbability(greatest, inst->mu_star);
  const bool supported = probability >= inst->q_star;
  Table t;
  t.columns = {"key", "value"};
  t.Add({"n", std::to_string(graph.num_vertices())});
  t.Add({"mu_star", FormatRational(inst->mu_star)});
  t.Add({"q_star", FormatRational(inst->q_star)});
  t.Add({"supported", supported ? "YES" : "NO"});
  t.Add({"probability_exact", FormatRational(probability)});
  t.Add({"probability", Decimal(probability)});
  t.Add({"revolting_views", std::to_string(greatest.revolt_set.size())});
  t.Add({"fixpoint_iterations", std::to_string(greatest.iterations)});
  if (a.clique_k > 0) t.Add({"clique_exists", CliqueExists(graph, a.clique_k) ? "YES" : "NO"});
  Json meta;
  meta["prior"] = PriorToJson(inst->prior);
  meta["trace"] = greatest.trace;
  const auto fractions = model.ExpectedRevoltFraction(greatest);
  Json per_state = Json::object();
  for (std::size_t s = 0; s < fractions.size(); ++s) per_state[inst->prior.state(s).id] = FormatRational(fractions[s]);
  meta["expected_revolt_fraction"] = per_state;
  Output out(g);
  out.Emit(t, meta);
  return kExitOk;
}

// ---- epistemic ------------------------------------------------------------

struct EpistemicArgs {
  std::string model;
  std::string p;
  std::string mu;
  std::vector<std::string> event;
  std::string omega;
  long verify_prop1 = 0;
};

int RunEpistemic(const EpistemicArgs& a, const Globals& g) {
  Output out(g);
  if (a.verify_prop1 > 0) {
    const SearchFixpointReport r = RunSearchFixpointBattery(a.verify_prop1, g.seed, g.jobs);
    Table t;
    t.columns = {"models", "checks", "disagreements", "models_with_disagreement", "agreement"};
    const Rational agreement(r.checks - r.disagreements, r.checks);
    t.Add({std::to_string(r.models), std::to_string(r.checks), std::to_string(r.disagreements),
           std::to_string(r.models_with_disagreement), FormatDecimal(agreement, 6)});
    Json meta;
    if (r.first_counterexample) meta["first_counterexample"] = *r.first_counterexample;
    out.Emit(t, meta);
    return kExitOk;
  }
  using namespace epistemic;
  if (a.model.empty() || a.p.empty() || a.mu.empty()) {
    Fail(ErrorKind::kParse, "epistemic: --model, --p and --mu are required");
  }
  const EpistemicModel model = LoadModel(a.model);
  const Rational p = ParseRational(a.p);
  const Rational mu = ParseRational(a.mu);
  const Event f = Event::FromLabels(model.space(), a.event);
  const HierarchyTrace trace = CommonBeliefHierarchy(model, p, mu, f);
  const Event search = CommonBeliefSearchSet(model, p, mu, f);
  const EvidentVerdict evident = IsEvidentBelief(model, p, mu, trace.result);
  auto join = [&](const Event& e) {
    std::string s;
    for (const auto& l : e.labels(model.space())) s += (s.empty() ? "" : " ") + l;
    return "{" + s + "}";
  };
  Table t;
  t.columns = {"key", "value"};
  t.Add({"event", join(f)});
  for (std::size_t i = 0; i < trace.levels.size(); ++i) t.Add({"level_" + std::to_string(i + 1), join(trace.levels[i])});
  t.Add({"fixpoint", join(trace.result)});
  t.Add({"search", join(search)});
  t.Add({"fixpoint_is_evident", evident.evident ? "true" : "false"});
  if (!a.omega.empty()) {
    const std::size_t w = model.space().index_of(a.omega);
    t.Add({"omega", a.omega});
    t.Add({"omega_in_fixpoint", trace.result.contains(w) ? "true" : "false"});
    t.Add({"omega_by_search", search.contains(w) ? "true" : "false"});
  }
  out.Emit(t);
  return kExitOk;
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
  std::string family;
  int n = 1000;
  std::string param;
  bool graph = false;
};

int RunGen(const GenArgs& a, const Globals& g) {
  if (a.family.empty() || a.param.empty()) Fail(ErrorKind::kParse, "gen: --family and --param are required");
  const GenSpec spec{ParseFamily(a.family), a.n, ParseRational(a.param), g.seed};
  Output out(g);
  if (a.graph) {
    ConcreteGraph graph;
    switch (spec.family) {
      case Family::kBarabasiAlbert:
        graph = BarabasiAlbertGraph(spec.n, static_cast<int>(spec.param.get_d()), spec.seed);
        break;
      case Family::kErdosRenyi:
        graph = ErdosRenyiGraph(spec.n, spec.param, spec.seed);
        break;
      default:
        graph = RealizeGraph(Generate(spec), spec.seed);
    }
    WriteEdgeList(out.stream(), graph);
  } else {
    const DegreeSequence seq = Generate(spec);
    out.stream() << "# family=" << FamilyName(spec.family) << " n=" << spec.n
                 << " param=" << FormatRational(spec.param) << " seed=" << spec.seed;
    if (spec.family == Family::kPowerLaw) out.stream() << " min_degree=1 max_degree=" << spec.n - 1;
    out.stream() << '\n';
    WriteDegreeSequence(out.stream(), seq);
  }
  return kExitOk;
}

// ---- bounds ---------------------------------------------------------------

struct BoundsArgs {
  std::string prior = "motivating";
  DegreeSource degrees;
  std::string epsilon = "1/20";
  std::string epsilon0 = "1/10";
  std::string c = "1";
  std::string state = "A";
};

int RunBounds(const BoundsArgs& a, const Globals& g) {
  const Prior prior = LoadPriorArg(a.prior);
  const DegreeSequence seq = a.degrees.Load(g.seed);
  const long n = static_cast<long>(seq.size());
  const Rational epsilon = ParseRational(a.epsilon);
  const std::size_t state = prior.state_index(a.state);
  const long chi_star = ChiStarBound(seq);
  const Rational t = epsilon * n;

  std::vector<BoundReport> reports;
  if (seq.max_degree() == 4 && seq.Histogram().size() == 1) {
    const Rational expect = NoncandidateExpectationTorus(prior, state);
    reports.push_back(MarkovNoncandidateBound(expect, 1 - prior.mu(), n));
    reports.back().inputs.push_back({"state", a.state});
  }
  reports.push_back(DependentChernoff(n, t, Rational(chi_star)));
  reports.push_back(IndependentHoeffding(n, t));
  reports.push_back(HighDegreeStateBound(ParseRational(a.epsilon0), ParseRational(a.c), n));

  Table table;
  table.columns = {"bound", "inputs", "value", "exact", "vacuous", "raw_value"};
  for (const auto& r : reports) {
    std::string inputs;
    for (const auto& [k, v] : r.inputs) inputs += (inputs.empty() ? "" : ";") + k + "=" + v;
    table.Add({r.name, inputs, r.value, r.exact ? FormatRational(*r.exact) : "", r.vacuous ? "true" : "false",
               r.raw_value});
  }
  const SeparationCheck sep = HighDegreeSeparation(prior, ParseRational(a.epsilon0), ParseRational(a.c), n);
  Json meta;
  meta["chi_star_bound"] = chi_star;
  meta["separation"] = {{"lhs", sep.lhs}, {"rhs", sep.rhs}, {"admissible", sep.admissible}};
  Output out(g);
  out.Emit(table, meta);
  return kExitOk;
}

int ExitCodeFor(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kBudgetExceeded: return kExitBudget;
    case ErrorKind::kInternal: return 1;
    default: return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factional-belief revolt analysis"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON run config");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  AnalyzeArgs analyze;
  auto* c_analyze = app.add_subcommand("analyze", "largest (or smallest) supported revolt per state");
  c_analyze->add_option("--prior", analyze.prior, "prior JSON file, inline JSON, or 'motivating'")->required();
  analyze.degrees.Register(c_analyze);
  c_analyze->add_flag("--general", analyze.general, "treat high-degree agents as state-revealing");
  c_analyze->add_flag("--multistate", analyze.multistate, "iterated candidate-state removal for m states");
  c_analyze->add_flag("--smallest", analyze.smallest, "smallest supported revolt");
  c_analyze->add_flag("--auto-relabel", analyze.auto_relabel, "swap A and B on a label error");
  c_analyze->add_option("--cutoff-c", analyze.cutoff_c, "high-degree cutoff constant c")->capture_default_str();
  c_analyze->add_option("--epsilon", analyze.epsilon, "ignore high-degree agents below this fraction")
      ->capture_default_str();
  c_analyze->add_option("--removal", analyze.removal, "multistate removal order: batch or one")->capture_default_str();

  PromiseArgs promise;
  auto* c_promise = app.add_subcommand("promise", "Promise Revolt outcome for one mu* or a grid");
  c_promise->add_option("--prior", promise.prior, "prior JSON file, inline JSON, or 'motivating'")->required();
  promise.degrees.Register(c_promise);
  c_promise->add_option("--mu-star", promise.mu_star, "revolt size threshold");
  c_promise->add_option("--grid-from", promise.grid_from, "grid start (default 0)");
  c_promise->add_option("--grid-to", promise.grid_to, "grid end (default 1)");
  c_promise->add_option("--grid-step", promise.grid_step, "grid step");
  c_promise->add_option("--epsilon", promise.epsilon, "mu perturbation budget")->capture_default_str();
  c_promise->add_option("--delta", promise.delta, "p perturbation budget")->capture_default_str();
  c_promise->add_flag("--strict", promise.strict, "exit 4 when any outcome is Null");

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "mean e_A, e_B over a parameter range");
  c_sweep->add_option("--prior", sweep.prior, "prior JSON file, inline JSON, or 'motivating'")->capture_default_str();
  c_sweep->add_option("--family", sweep.family, "constant, powerlaw, ba or er")->capture_default_str();
  c_sweep->add_option("--n", sweep.n, "vertices per graph")->capture_default_str();
  c_sweep->add_option("--axis", sweep.axis, "param, p or mu")->capture_default_str();
  c_sweep->add_option("--from", sweep.from, "first axis value");
  c_sweep->add_option("--to", sweep.to, "last axis value (inclusive)");
  c_sweep->add_option("--step", sweep.step, "axis step");
  c_sweep->add_option("--fixed-param", sweep.fixed_param, "family parameter when sweeping p or mu");
  c_sweep->add_option("--trials", sweep.trials, "graphs per value for random families")->capture_default_str();

  ValidateArgs validate;
  auto* c_validate = app.add_subcommand("validate", "Monte-Carlo concentration check on a concrete graph");
  c_validate->add_option("--prior", validate.prior, "prior JSON file, inline JSON, or 'motivating'")
      ->capture_default_str();
  validate.graph.Register(c_validate, true);
  c_validate->add_option("--state", validate.state, "state to condition on")->capture_default_str();
  c_validate->add_option("--trials", validate.trials, "sampled assignments")->capture_default_str();
  c_validate->add_option("--eta", validate.eta, "failure probability for the deviation envelope")
      ->capture_default_str();

  OracleArgs oracle;
  auto* c_oracle = app.add_subcommand("oracle", "exact Revolt decision on a small graph");
  c_oracle->add_option("--prior", oracle.prior, "prior JSON file, inline JSON, or 'motivating'");
  oracle.graph.Register(c_oracle, false);
  c_oracle->add_option("--mu-star", oracle.mu_star, "revolt size threshold");
  c_oracle->add_option("--q-star", oracle.q_star, "probability threshold");
  c_oracle->add_option("--clique-reduce", oracle.clique_k, "build the Clique instance for this k");
  c_oracle->add_option("--budget", oracle.budget, "enumeration budget")->capture_default_str();

  EpistemicArgs epist;
  auto* c_epistemic = app.add_subcommand("epistemic", "common (p, mu)-belief on a finite model");
  c_epistemic->add_option("--model", epist.model, "model JSON file or inline JSON");
  c_epistemic->add_option("--p", epist.p, "belief threshold p");
  c_epistemic->add_option("--mu", epist.mu, "agent fraction mu");
  c_epistemic->add_option("--event", epist.event, "outcome labels of F")->delimiter(',');
  c_epistemic->add_option("--omega", epist.omega, "outcome to test");
  c_epistemic->add_option("--verify-prop1", epist.verify_prop1, "compare search and fixpoint on N random models");

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "generate a degree sequence or graph");
  c_gen->add_option("--family", gen.family, "constant, powerlaw, ba or er");
  c_gen->add_option("--n", gen.n, "vertices")->capture_default_str();
  c_gen->add_option("--param", gen.param, "d, gamma, m or p_edge");
  c_gen->add_flag("--graph", gen.graph, "emit an edge list instead of a degree sequence");

  BoundsArgs bounds;
  auto* c_bounds = app.add_subcommand("bounds", "evaluate the concentration bounds for an instance");
  c_bounds->add_option("--prior", bounds.prior, "prior JSON file, inline JSON, or 'motivating'")->capture_default_str();
  bounds.degrees.Register(c_bounds);
  c_bounds->add_option("--epsilon", bounds.epsilon, "relative deviation t / n")->capture_default_str();
  c_bounds->add_option("--epsilon0", bounds.epsilon0, "high-degree deviation constant")->capture_default_str();
  c_bounds->add_option("--c", bounds.c, "high-degree cutoff constant")->capture_default_str();
  c_bounds->add_option("--state", bounds.state, "state for the Markov bound")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*c_analyze) return RunAnalyze(analyze, g);
    if (*c_promise) return RunPromise(promise, g);
    if (*c_sweep) return RunSweepCommand(sweep, g);
    if (*c_validate) return RunValidateCommand(validate, g);
    if (*c_oracle) return RunOracle(oracle, g);
    if (*c_epistemic) return RunEpistemic(epist, g);
    if (*c_gen) return RunGen(gen, g);
    if (*c_bounds) return RunBounds(bounds, g);
  } catch (const Error& e) {
    std::cerr << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << '\n';
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
