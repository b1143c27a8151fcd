#include "factional/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "factional/error.hpp"

namespace factional {

double Rng::Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::Below(std::uint64_t bound) {
  if (bound == 0) Fail(ErrorKind::kInvalidArgument, "Rng::Below needs a positive bound");
  const std::uint64_t reject_below = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = Next();
    if (r >= reject_below) return r % bound;
  }
}

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t point, std::uint64_t trial) {
  return Mix64(Mix64(Mix64(master) ^ point) ^ trial);
}

const char* FamilyName(Family f) {
  switch (f) {
    case Family::kConstant: return "constant";
    case Family::kPowerLaw: return "powerlaw";
    case Family::kBarabasiAlbert: return "ba";
    case Family::kErdosRenyi: return "er";
  }
  return "?";
}

Family ParseFamily(const std::string& name) {
  if (name == "constant") return Family::kConstant;
  if (name == "powerlaw" || name == "power-law") return Family::kPowerLaw;
  if (name == "ba" || name == "barabasi-albert") return Family::kBarabasiAlbert;
  if (name == "er" || name == "erdos-renyi") return Family::kErdosRenyi;
  Fail(ErrorKind::kParse, "family: unknown value '" + name + "' (expected constant, powerlaw, ba or er)");
}

DegreeSequence ConstantSequence(int n, int d) {
  if (n < 1) Fail(ErrorKind::kInvalidArgument, "n must be at least 1");
  if (d < 0 || d >= n) Fail(ErrorKind::kInvalidArgument, "constant degree d must satisfy 0 <= d < n");
  if ((static_cast<long>(n) * d) % 2 != 0) {
    Fail(ErrorKind::kNotGraphical, "n * d = " + std::to_string(static_cast<long>(n) * d) + " is odd");
  }
  return DegreeSequence::Constant(static_cast<std::size_t>(n), d);
}

std::vector<double> PowerLawPmf(int n, double gamma) {
  if (n < 2) Fail(ErrorKind::kInvalidArgument, "power-law sequences need n >= 2");
  if (!(gamma > 1)) Fail(ErrorKind::kInvalidArgument, "power-law exponent gamma must exceed 1");
  std::vector<double> pmf(static_cast<std::size_t>(n - 1));
  double total = 0;
  for (int d = 1; d <= n - 1; ++d) {
    pmf[static_cast<std::size_t>(d - 1)] = std::pow(static_cast<double>(d), -gamma);
    total += pmf[static_cast<std::size_t>(d - 1)];
  }
  for (double& x : pmf) x /= total;
  return pmf;
}

DegreeSequence PowerLawSequence(int n, const Rational& gamma, std::uint64_t seed) {
  if (gamma <= 1) Fail(ErrorKind::kInvalidArgument, "power-law exponent gamma must exceed 1");
  const auto pmf = PowerLawPmf(n, gamma.get_d());
  std::vector<double> cdf(pmf.size());
  std::partial_sum(pmf.begin(), pmf.end(), cdf.begin());
  Rng rng(seed);
  std::vector<int> degrees(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < kPowerLawAttemptCap; ++attempt) {
    for (auto& d : degrees) {
      const double u = rng.Uniform() * cdf.back();
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      d = static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1)) + 1;
    }
    DegreeSequence seq(degrees);
    if (IsGraphical(seq)) return seq;
  }
  Fail(ErrorKind::kAttemptCapExceeded, "no graphical power-law sequence after " +
                                           std::to_string(kPowerLawAttemptCap) + " attempts (n = " +
                                           std::to_string(n) + ", gamma = " + FormatRational(gamma) + ")");
}

ConcreteGraph BarabasiAlbertGraph(int n, int m, std::uint64_t seed) {
  if (m < 1 || m >= n) Fail(ErrorKind::kInvalidArgument, "Barabasi-Albert needs 1 <= m < n");
  ConcreteGraph g(n);
  Rng rng(seed);
  std::vector<int> endpoints;  // each vertex repeated once per incident edge
  endpoints.reserve(static_cast<std::size_t>(2) * static_cast<std::size_t>(m) * static_cast<std::size_t>(n - m));
  for (int s = 0; s < m; ++s) {
    g.AddEdge(m, s);
    endpoints.push_back(m);
    endpoints.push_back(s);
  }
  std::vector<int> targets;
  for (int v = m + 1; v < n; ++v) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      const int t = endpoints[rng.Below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (int t : targets) {
      g.AddEdge(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return g;
}

DegreeSequence BarabasiAlbertSequence(int n, int m, std::uint64_t seed) {
  return DegreeSequence(BarabasiAlbertGraph(n, m, seed).Degrees());
}

ConcreteGraph ErdosRenyiGraph(int n, const Rational& p_edge, std::uint64_t seed) {
  if (n < 1) Fail(ErrorKind::kInvalidArgument, "n must be at least 1");
  if (sgn(p_edge) < 0 || p_edge > 1) Fail(ErrorKind::kInvalidArgument, "p_edge must lie in [0, 1]");
  ConcreteGraph g(n);
  if (sgn(p_edge) == 0) return g;
  if (p_edge == 1) {
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) g.AddEdge(u, v);
    }
    return g;
  }
  // Geometric skipping over the pairs (w, v), w < v, in row order.
  Rng rng(seed);
  const double log_q = std::log1p(-p_edge.get_d());
  long v = 1;
  long w = -1;
  while (v < n) {
    const double r = rng.Uniform();
    w += 1 + static_cast<long>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) g.AddEdge(static_cast<int>(w), static_cast<int>(v));
  }
  return g;
}

DegreeSequence ErdosRenyiSequence(int n, const Rational& p_edge, std::uint64_t seed) {
  return DegreeSequence(ErdosRenyiGraph(n, p_edge, seed).Degrees());
}

namespace {

int IntegerParam(const GenSpec& spec, const char* name) {
  if (spec.param.get_den() != 1 || !spec.param.get_num().fits_sint_p()) {
    Fail(ErrorKind::kInvalidArgument, std::string(name) + " must be an integer, got " + FormatRational(spec.param));
  }
  return static_cast<int>(spec.param.get_num().get_si());
}

}  // namespace

DegreeSequence Generate(const GenSpec& spec) {
  switch (spec.family) {
    case Family::kConstant: return ConstantSequence(spec.n, IntegerParam(spec, "d"));
    case Family::kPowerLaw: return PowerLawSequence(spec.n, spec.param, spec.seed);
    case Family::kBarabasiAlbert: return BarabasiAlbertSequence(spec.n, IntegerParam(spec, "m"), spec.seed);
    case Family::kErdosRenyi: return ErdosRenyiSequence(spec.n, spec.param, spec.seed);
  }
  Fail(ErrorKind::kInternal, "unknown family");
}

bool IsGraphical(const DegreeSequence& seq) {
  const long n = static_cast<long>(seq.size());
  std::vector<long> d(seq.degrees.begin(), seq.degrees.end());
  std::sort(d.begin(), d.end(), std::greater<>());
  long sum = 0;
  for (long x : d) {
    if (x < 0 || x > n - 1) return n == 0;
    sum += x;
  }
  if (sum % 2 != 0) return false;
  // suffix[i] = d[i] + ... + d[n-1]
  std::vector<long> suffix(static_cast<std::size_t>(n) + 1, 0);
  for (long i = n - 1; i >= 0; --i) suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1] + d[static_cast<std::size_t>(i)];
  long ge = n;  // number of entries >= k, nonincreasing in k
  long left = 0;
  for (long k = 1; k <= n; ++k) {
    left += d[static_cast<std::size_t>(k - 1)];
    while (ge > 0 && d[static_cast<std::size_t>(ge - 1)] < k) --ge;
    // Entries after position k: those >= k contribute k, the rest themselves.
    const long capped = std::max(0L, ge - k);
    const long right = k * (k - 1) + k * capped + suffix[static_cast<std::size_t>(std::max(ge, k))];
    if (left > right) return false;
  }
  return true;
}

ConcreteGraph HavelHakimi(const DegreeSequence& seq) {
  const int n = static_cast<int>(seq.size());
  ConcreteGraph g(n);
  std::vector<std::pair<int, int>> residual;  // (remaining degree, vertex)
  for (int v = 0; v < n; ++v) residual.emplace_back(seq.degrees[static_cast<std::size_t>(v)], v);
  auto order = [](const std::pair<int, int>& a, const std::pair<int, int>& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  while (true) {
    std::sort(residual.begin(), residual.end(), order);
    if (residual.empty() || residual.front().first == 0) break;
    const auto [need, v] = residual.front();
    if (need > static_cast<int>(residual.size()) - 1) {
      Fail(ErrorKind::kNotGraphical, "degree sequence is not graphical");
    }
    for (int j = 1; j <= need; ++j) {
      if (residual[static_cast<std::size_t>(j)].first == 0) {
        Fail(ErrorKind::kNotGraphical, "degree sequence is not graphical");
      }
      g.AddEdge(v, residual[static_cast<std::size_t>(j)].second);
      --residual[static_cast<std::size_t>(j)].first;
    }
    residual.erase(residual.begin());
  }
  for (const auto& r : residual) {
    if (r.first != 0) Fail(ErrorKind::kNotGraphical, "degree sequence is not graphical");
  }
  return g;
}

ConcreteGraph RealizeGraph(const DegreeSequence& seq, std::uint64_t seed) {
  if (!IsGraphical(seq)) Fail(ErrorKind::kNotGraphical, "degree sequence is not graphical");
  ConcreteGraph g = HavelHakimi(seq);
  std::vector<std::pair<int, int>> edges = g.Edges();
  if (edges.size() < 2) return g;
  Rng rng(seed);
  const std::size_t attempts = 10 * edges.size();
  for (std::size_t i = 0; i < attempts; ++i) {
    const std::size_t x = rng.Below(edges.size());
    const std::size_t y = rng.Below(edges.size());
    if (x == y) continue;
    auto [a, b] = edges[x];
    auto [c, d] = edges[y];
    if (rng.Below(2) == 1) std::swap(c, d);
    // (a,b),(c,d) -> (a,d),(c,b)
    if (a == d || c == b || g.has_edge(a, d) || g.has_edge(c, b)) continue;
    g.RemoveEdge(a, b);
    g.RemoveEdge(c, d);
    g.AddEdge(a, d);
    g.AddEdge(c, b);
    edges[x] = {std::min(a, d), std::max(a, d)};
    edges[y] = {std::min(c, b), std::max(c, b)};
  }
  return g;
}

ConcreteGraph TorusGrid(int rows, int cols) {
  if (rows < 3 || cols < 3) Fail(ErrorKind::kInvalidArgument, "torus dimensions must both be at least 3");
  ConcreteGraph g(rows * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      g.AddEdge(v, r * cols + (c + 1) % cols);
      g.AddEdge(v, ((r + 1) % rows) * cols + c);
    }
  }
  return g;
}

}  // namespace factional
