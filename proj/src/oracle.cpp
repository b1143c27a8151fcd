#include "factional/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <numeric>

#include "factional/error.hpp"

namespace factional {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t SaturatingPow3(int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > kSaturated / 3) return kSaturated;
    r *= 3;
  }
  return r;
}

std::uint64_t SaturatingAdd(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

}  // namespace

std::uint64_t OracleCost(const ConcreteGraph& graph) {
  std::uint64_t cost = SaturatingPow3(graph.num_vertices());
  for (int v = 0; v < graph.num_vertices(); ++v) cost = SaturatingAdd(cost, SaturatingPow3(graph.degree(v) + 1));
  return cost;
}

ContextClass LocalView::context() const {
  std::array<int, kNumTypes> counts{};
  for (std::size_t j = 1; j < types.size(); ++j) ++counts[Index(types[j])];
  return MakeContext(types.at(0), counts[0], counts[1], counts[2]);
}

std::set<std::pair<int, ContextClass>> StrategyProfile::ContextPairs() const {
  std::set<std::pair<int, ContextClass>> out;
  for (const auto& view : revolt_set) out.emplace(view.vertex, view.context());
  return out;
}

OracleModel::OracleModel(const ConcreteGraph& graph, const Prior& prior, std::uint64_t budget)
    : graph_(graph), prior_(prior), n_(graph.num_vertices()) {
  if (n_ < 1) Fail(ErrorKind::kInvalidArgument, "oracle needs at least one vertex");
  const std::uint64_t cost = OracleCost(graph);
  if (cost > budget || n_ > 20) {
    Fail(ErrorKind::kBudgetExceeded, "oracle enumeration cost " +
                                         (cost == kSaturated ? std::string("> 2^64") : std::to_string(cost)) +
                                         " exceeds the budget of " + std::to_string(budget) + " (n = " +
                                         std::to_string(n_) + ")");
  }
  pow3_.resize(static_cast<std::size_t>(n_) + 2);
  pow3_[0] = 1;
  for (std::size_t i = 1; i < pow3_.size(); ++i) pow3_[i] = pow3_[i - 1] * 3;

  const Rational mu_n = prior_.mu() * n_;
  threshold_ = Ceil(mu_n);

  const std::size_t m = prior_.num_states();
  // Common denominator making every weight an integer.
  BigInt lcd = 1;
  for (std::size_t s = 0; s < m; ++s) {
    BigInt type_lcd = 1;
    for (AgentType t : kAllTypes) type_lcd = lcm(type_lcd, prior_.state(s).types[t].get_den());
    BigInt state_den = prior_.state(s).prob.get_den();
    for (int i = 0; i < n_; ++i) state_den *= type_lcd;
    lcd = lcm(lcd, state_den);
  }
  scale_ = Rational(lcd);

  const std::uint32_t total = pow3_[static_cast<std::size_t>(n_)];
  for (std::uint32_t code = 0; code < total; ++code) {
    Assignment a;
    a.code = code;
    a.weight.resize(m);
    a.total = 0;
    for (std::size_t s = 0; s < m; ++s) {
      Rational w = prior_.state(s).prob;
      std::uint32_t rest = code;
      for (int i = 0; i < n_ && sgn(w) != 0; ++i) {
        w *= prior_.state(s).types[static_cast<AgentType>(rest % 3)];
        rest /= 3;
      }
      w *= scale_;
      a.weight[s] = w.get_num();
      a.total += a.weight[s];
    }
    if (sgn(a.total) == 0) continue;
    assignments_.push_back(std::move(a));
  }

  view_weight_.resize(static_cast<std::size_t>(n_));
  for (int v = 0; v < n_; ++v) {
    view_weight_[static_cast<std::size_t>(v)].assign(pow3_[static_cast<std::size_t>(graph_.degree(v)) + 1],
                                                     BigInt(0));
  }
  for (const auto& a : assignments_) {
    for (int v = 0; v < n_; ++v) view_weight_[static_cast<std::size_t>(v)][ViewCode(a.code, v)] += a.total;
  }
}

std::uint32_t OracleModel::ViewCode(std::uint32_t assignment, int vertex) const {
  std::uint32_t code = (assignment / pow3_[static_cast<std::size_t>(vertex)]) % 3;
  std::uint32_t place = 3;
  for (int u : graph_.neighbors(vertex)) {
    code += ((assignment / pow3_[static_cast<std::size_t>(u)]) % 3) * place;
    place *= 3;
  }
  return code;
}

LocalView OracleModel::DecodeView(int vertex, std::uint32_t view_code) const {
  LocalView view;
  view.vertex = vertex;
  const std::size_t size = static_cast<std::size_t>(graph_.degree(vertex)) + 1;
  for (std::size_t j = 0; j < size; ++j) {
    view.types.push_back(static_cast<AgentType>(view_code % 3));
    view_code /= 3;
  }
  return view;
}

std::vector<std::vector<bool>> OracleModel::ToTable(const StrategyProfile& profile) const {
  std::vector<std::vector<bool>> table(static_cast<std::size_t>(n_));
  for (int v = 0; v < n_; ++v) {
    auto& row = table[static_cast<std::size_t>(v)];
    row.assign(view_weight_[static_cast<std::size_t>(v)].size(), false);
    for (std::uint32_t code = 0; code < row.size(); ++code) {
      const auto own = static_cast<AgentType>(code % 3);
      if (own == AgentType::kAlpha) row[code] = true;
    }
  }
  for (const auto& view : profile.revolt_set) {
    if (view.vertex < 0 || view.vertex >= n_ ||
        view.types.size() != static_cast<std::size_t>(graph_.degree(view.vertex)) + 1) {
      Fail(ErrorKind::kInvalidArgument, "strategy profile does not match the graph");
    }
    if (view.types[0] == AgentType::kNu) continue;
    std::uint32_t code = 0;
    for (std::size_t j = view.types.size(); j-- > 0;) code = code * 3 + static_cast<std::uint32_t>(Index(view.types[j]));
    table[static_cast<std::size_t>(view.vertex)][code] = true;
  }
  return table;
}

StrategyProfile OracleModel::FromTable(const std::vector<std::vector<bool>>& table) const {
  StrategyProfile profile;
  for (int v = 0; v < n_; ++v) {
    const auto& row = table[static_cast<std::size_t>(v)];
    for (std::uint32_t code = 0; code < row.size(); ++code) {
      if (row[code] && sgn(view_weight_[static_cast<std::size_t>(v)][code]) > 0) {
        profile.revolt_set.insert(DecodeView(v, code));
      }
    }
  }
  return profile;
}

std::vector<int> OracleModel::RevoltCounts(const std::vector<std::vector<bool>>& table) const {
  std::vector<int> counts(assignments_.size(), 0);
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    int c = 0;
    for (int v = 0; v < n_; ++v) {
      if (table[static_cast<std::size_t>(v)][ViewCode(assignments_[i].code, v)]) ++c;
    }
    counts[i] = c;
  }
  return counts;
}

namespace {

// Success weight per (vertex, view): total weight of assignments where the
// vertex revolting brings the count to the threshold.
std::vector<std::vector<BigInt>> SuccessWeights(const std::vector<std::vector<bool>>& table,
                                                const std::vector<int>& counts,
                                                const std::vector<std::vector<BigInt>>& view_weight,
                                                const BigInt& threshold, int n,
                                                const std::function<std::uint32_t(std::size_t, int)>& view_code,
                                                const std::function<const BigInt&(std::size_t)>& total) {
  std::vector<std::vector<BigInt>> success(view_weight.size());
  for (std::size_t v = 0; v < view_weight.size(); ++v) success[v].assign(view_weight[v].size(), BigInt(0));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (int v = 0; v < n; ++v) {
      const std::uint32_t code = view_code(i, v);
      if (static_cast<AgentType>(code % 3) != AgentType::kChi) continue;
      const int others = counts[i] - (table[static_cast<std::size_t>(v)][code] ? 1 : 0);
      if (others + 1 >= threshold) success[static_cast<std::size_t>(v)][code] += total(i);
    }
  }
  return success;
}

}  // namespace

std::vector<std::vector<bool>> OracleModel::ThresholdMet(const std::vector<std::vector<bool>>& table) const {
  const auto counts = RevoltCounts(table);
  const auto success = SuccessWeights(
      table, counts, view_weight_, threshold_, n_,
      [this](std::size_t i, int v) { return ViewCode(assignments_[i].code, v); },
      [this](std::size_t i) -> const BigInt& { return assignments_[i].total; });
  const BigInt& p_num = prior_.p().get_num();
  const BigInt& p_den = prior_.p().get_den();
  std::vector<std::vector<bool>> met(static_cast<std::size_t>(n_));
  for (int v = 0; v < n_; ++v) {
    const auto sv = static_cast<std::size_t>(v);
    met[sv].assign(view_weight_[sv].size(), false);
    for (std::uint32_t code = 0; code < met[sv].size(); ++code) {
      if (static_cast<AgentType>(code % 3) != AgentType::kChi || sgn(view_weight_[sv][code]) == 0) continue;
      met[sv][code] = success[sv][code] * p_den >= p_num * view_weight_[sv][code];
    }
  }
  return met;
}

void OracleModel::CheckSoundness(const std::vector<std::vector<bool>>& table) const {
  const auto met = ThresholdMet(table);
  for (int v = 0; v < n_; ++v) {
    const auto sv = static_cast<std::size_t>(v);
    for (std::uint32_t code = 0; code < met[sv].size(); ++code) {
      if (static_cast<AgentType>(code % 3) != AgentType::kChi || sgn(view_weight_[sv][code]) == 0) continue;
      if (met[sv][code] != table[sv][code]) {
        Fail(ErrorKind::kInternal, "threshold fixpoint is not stable at vertex " + std::to_string(v));
      }
    }
  }
}

StrategyProfile OracleModel::Greatest() const {
  std::vector<std::vector<bool>> table(static_cast<std::size_t>(n_));
  std::size_t size = 0;
  for (int v = 0; v < n_; ++v) {
    const auto sv = static_cast<std::size_t>(v);
    table[sv].assign(view_weight_[sv].size(), false);
    for (std::uint32_t code = 0; code < table[sv].size(); ++code) {
      const auto own = static_cast<AgentType>(code % 3);
      table[sv][code] = own != AgentType::kNu;
      if (table[sv][code] && sgn(view_weight_[sv][code]) > 0) ++size;
    }
  }
  std::vector<std::size_t> trace{size};
  int iterations = 0;
  while (true) {
    ++iterations;
    const auto met = ThresholdMet(table);
    bool changed = false;
    for (int v = 0; v < n_; ++v) {
      const auto sv = static_cast<std::size_t>(v);
      for (std::uint32_t code = 0; code < met[sv].size(); ++code) {
        if (static_cast<AgentType>(code % 3) != AgentType::kChi || sgn(view_weight_[sv][code]) == 0) continue;
        if (table[sv][code] && !met[sv][code]) {
          table[sv][code] = false;
          --size;
          changed = true;
        }
      }
    }
    if (!changed) break;
    trace.push_back(size);
  }
  CheckSoundness(table);
  StrategyProfile out = FromTable(table);
  out.iterations = iterations;
  out.trace = std::move(trace);
  return out;
}

StrategyProfile OracleModel::Least() const {
  std::vector<std::vector<bool>> table(static_cast<std::size_t>(n_));
  std::size_t size = 0;
  for (int v = 0; v < n_; ++v) {
    const auto sv = static_cast<std::size_t>(v);
    table[sv].assign(view_weight_[sv].size(), false);
    for (std::uint32_t code = 0; code < table[sv].size(); ++code) {
      table[sv][code] = static_cast<AgentType>(code % 3) == AgentType::kAlpha;
      if (table[sv][code] && sgn(view_weight_[sv][code]) > 0) ++size;
    }
  }
  std::vector<std::size_t> trace{size};
  int iterations = 0;
  while (true) {
    ++iterations;
    const auto met = ThresholdMet(table);
    bool changed = false;
    for (int v = 0; v < n_; ++v) {
      const auto sv = static_cast<std::size_t>(v);
      for (std::uint32_t code = 0; code < met[sv].size(); ++code) {
        if (!table[sv][code] && met[sv][code]) {
          table[sv][code] = true;
          ++size;
          changed = true;
        }
      }
    }
    if (!changed) break;
    trace.push_back(size);
  }
  CheckSoundness(table);
  StrategyProfile out = FromTable(table);
  out.iterations = iterations;
  out.trace = std::move(trace);
  return out;
}

Rational OracleModel::RevoltProbability(const StrategyProfile& profile, const LocalView& view) const {
  const auto table = ToTable(profile);
  if (view.vertex < 0 || view.vertex >= n_ ||
      view.types.size() != static_cast<std::size_t>(graph_.degree(view.vertex)) + 1) {
    Fail(ErrorKind::kInvalidArgument, "view does not match the graph");
  }
  std::uint32_t code = 0;
  for (std::size_t j = view.types.size(); j-- > 0;) code = code * 3 + static_cast<std::uint32_t>(Index(view.types[j]));
  const BigInt& denom = view_weight_[static_cast<std::size_t>(view.vertex)][code];
  if (sgn(denom) == 0) Fail(ErrorKind::kImpossibleContext, "view has probability zero");
  const auto counts = RevoltCounts(table);
  BigInt success = 0;
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (ViewCode(assignments_[i].code, view.vertex) != code) continue;
    const int others = counts[i] - (table[static_cast<std::size_t>(view.vertex)][code] ? 1 : 0);
    if (others + 1 >= threshold_) success += assignments_[i].total;
  }
  return Ratio(success, denom);
}

Rational OracleModel::SupportProbability(const StrategyProfile& profile, const Rational& mu_star) const {
  const auto counts = RevoltCounts(ToTable(profile));
  const BigInt need = Ceil(mu_star * n_);
  BigInt mass = 0;
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (counts[i] >= need) mass += assignments_[i].total;
  }
  Rational out(mass);
  out /= scale_;
  return out;
}

std::vector<Rational> OracleModel::ExpectedRevoltFraction(const StrategyProfile& profile) const {
  const auto counts = RevoltCounts(ToTable(profile));
  std::vector<Rational> out;
  for (std::size_t s = 0; s < prior_.num_states(); ++s) {
    BigInt weighted = 0;
    BigInt mass = 0;
    for (std::size_t i = 0; i < assignments_.size(); ++i) {
      weighted += assignments_[i].weight[s] * counts[i];
      mass += assignments_[i].weight[s];
    }
    out.push_back(sgn(mass) == 0 ? Rational(0) : Ratio(weighted, mass * n_));
  }
  return out;
}

std::vector<LocalView> OracleModel::ChiViews() const {
  std::vector<LocalView> out;
  for (int v = 0; v < n_; ++v) {
    const auto& row = view_weight_[static_cast<std::size_t>(v)];
    for (std::uint32_t code = 0; code < row.size(); ++code) {
      if (static_cast<AgentType>(code % 3) == AgentType::kChi && sgn(row[code]) > 0) out.push_back(DecodeView(v, code));
    }
  }
  return out;
}

StrategyProfile GreatestEquilibrium(const ConcreteGraph& graph, const Prior& prior, std::uint64_t budget) {
  return OracleModel(graph, prior, budget).Greatest();
}

StrategyProfile LeastEquilibrium(const ConcreteGraph& graph, const Prior& prior, std::uint64_t budget) {
  return OracleModel(graph, prior, budget).Least();
}

RevoltDecision DecideRevolt(const RevoltInstance& inst, std::uint64_t budget) {
  if (sgn(inst.mu_star) < 0 || inst.mu_star > 1) Fail(ErrorKind::kInvalidArgument, "mu_star must lie in [0, 1]");
  if (sgn(inst.q_star) < 0 || inst.q_star > 1) Fail(ErrorKind::kInvalidArgument, "q_star must lie in [0, 1]");
  OracleModel model(inst.graph, inst.prior, budget);
  RevoltDecision out;
  out.probability = model.SupportProbability(model.Greatest(), inst.mu_star);
  out.supported = out.probability >= inst.q_star;
  return out;
}

RevoltInstance CliqueReduction(const ConcreteGraph& graph, int k) {
  const int n = graph.num_vertices();
  if (k < 1 || k > n) Fail(ErrorKind::kInvalidArgument, "clique size k must satisfy 1 <= k <= n");
  const Rational fraction = Ratio(k, n);
  Prior prior(Rational(1), fraction,
              {StateSpec{"A", Rational(1, 2), TypeDistribution(Rational(0), Rational(1, 100), Rational(99, 100))},
               StateSpec{"B", Rational(1, 2), TypeDistribution(Rational(0), Rational(1), Rational(0))}});
  return RevoltInstance{graph, std::move(prior), fraction, Pow(Rational(99, 100), static_cast<unsigned>(k)) / 2};
}

bool CliqueExists(const ConcreteGraph& graph, int k) {
  const int n = graph.num_vertices();
  if (k < 1) Fail(ErrorKind::kInvalidArgument, "clique size k must be positive");
  if (n > 20) Fail(ErrorKind::kBudgetExceeded, "clique scan limited to 20 vertices");
  if (k > n) return false;
  std::vector<std::uint32_t> adjacency(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    for (int u : graph.neighbors(v)) adjacency[static_cast<std::size_t>(v)] |= 1u << u;
  }
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    bool clique = true;
    for (int v = 0; v < n && clique; ++v) {
      if (!(mask >> v & 1u)) continue;
      const std::uint32_t others = mask & ~(1u << v);
      clique = (adjacency[static_cast<std::size_t>(v)] & others) == others;
    }
    if (clique) return true;
  }
  return false;
}

namespace {

std::uint32_t CanonicalMask(int n, std::uint32_t mask, const std::vector<std::vector<int>>& pair_index) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  do {
    std::uint32_t image = 0;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (!(mask >> pair_index[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] & 1u)) continue;
        image |= 1u << pair_index[static_cast<std::size_t>(perm[static_cast<std::size_t>(u)])]
                                 [static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])];
      }
    }
    best = std::min(best, image);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<std::vector<int>> PairIndex(int n) {
  std::vector<std::vector<int>> index(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  int next = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      index[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = next;
      index[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = next;
      ++next;
    }
  }
  return index;
}

}  // namespace

std::vector<ConcreteGraph> GraphCatalog(int n) {
  if (n < 1 || n > 7) Fail(ErrorKind::kInvalidArgument, "graph catalog supports 1 <= n <= 7");
  // Every graph on n vertices is some graph on n - 1 vertices plus one vertex,
  // so extending the smaller catalog by every neighbour subset covers all
  // classes; canonical edge masks remove duplicates.
  std::set<std::uint32_t> classes{0};
  for (int size = 2; size <= n; ++size) {
    const auto small = PairIndex(size - 1);
    const auto big = PairIndex(size);
    std::set<std::uint32_t> next;
    for (std::uint32_t mask : classes) {
      std::uint32_t lifted = 0;
      for (int u = 0; u < size - 1; ++u) {
        for (int v = u + 1; v < size - 1; ++v) {
          if (mask >> small[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] & 1u) {
            lifted |= 1u << big[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
          }
        }
      }
      for (std::uint32_t nbrs = 0; nbrs < (1u << (size - 1)); ++nbrs) {
        std::uint32_t m = lifted;
        for (int u = 0; u < size - 1; ++u) {
          if (nbrs >> u & 1u) m |= 1u << big[static_cast<std::size_t>(u)][static_cast<std::size_t>(size - 1)];
        }
        next.insert(CanonicalMask(size, m, big));
      }
    }
    classes = std::move(next);
  }
  const auto index = PairIndex(n);
  std::vector<ConcreteGraph> out;
  for (std::uint32_t mask : classes) {
    ConcreteGraph g(n);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (mask >> index[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] & 1u) g.AddEdge(u, v);
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace factional
