#pragma once

// Seeded degree-sequence and graph generators, graphicality and realization.
//
// Randomness: std::mt19937_64 seeded with one 64-bit value. Uniform doubles
// take the top 53 bits of a draw; bounded integers use rejection sampling, so
// outputs do not depend on the standard library's distribution classes and are
// identical across platforms.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "factional/algorithms.hpp"
#include "factional/rational.hpp"
#include "factional/revolt_model.hpp"

namespace factional {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform on [0, 1).
  double Uniform();
  // Uniform on {0, ..., bound - 1}; bound > 0.
  std::uint64_t Below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Seed for trial `trial` of sweep point `point`: Mix64 applied to the master
// seed combined with each counter in turn.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t point, std::uint64_t trial);

enum class Family { kConstant, kPowerLaw, kBarabasiAlbert, kErdosRenyi };
const char* FamilyName(Family f);  // "constant", "powerlaw", "ba", "er"
Family ParseFamily(const std::string& name);

struct GenSpec {
  Family family = Family::kConstant;
  int n = 0;
  // d for constant, gamma for power law, m for BA, p_edge for ER.
  Rational param;
  std::uint64_t seed = 0;
};

inline constexpr int kPowerLawAttemptCap = 10000;

DegreeSequence ConstantSequence(int n, int d);
DegreeSequence PowerLawSequence(int n, const Rational& gamma, std::uint64_t seed);
ConcreteGraph BarabasiAlbertGraph(int n, int m, std::uint64_t seed);
DegreeSequence BarabasiAlbertSequence(int n, int m, std::uint64_t seed);
ConcreteGraph ErdosRenyiGraph(int n, const Rational& p_edge, std::uint64_t seed);
DegreeSequence ErdosRenyiSequence(int n, const Rational& p_edge, std::uint64_t seed);

DegreeSequence Generate(const GenSpec& spec);

// Pr[d] for the power law truncated to 1 <= d <= n - 1, as doubles.
std::vector<double> PowerLawPmf(int n, double gamma);

// Erdős–Gallai test.
bool IsGraphical(const DegreeSequence& seq);
// Havel–Hakimi realization; throws Error{kNotGraphical} when it gets stuck.
ConcreteGraph HavelHakimi(const DegreeSequence& seq);
// Havel–Hakimi followed by 10 * |E| seeded double-edge swap attempts.
ConcreteGraph RealizeGraph(const DegreeSequence& seq, std::uint64_t seed);

// 4-regular wrap-around grid; vertex (r, c) has id r * cols + c.
ConcreteGraph TorusGrid(int rows, int cols);

}  // namespace factional
