#pragma once

// Concrete evaluation of the probability bounds used in the concentration
// arguments. Exponentials are evaluated with MPFR at kBoundPrecisionBits.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "factional/algorithms.hpp"
#include "factional/rational.hpp"
#include "factional/revolt_model.hpp"

namespace factional {

inline constexpr long kBoundPrecisionBits = 256;
// Tolerance for comparing a bound against measured data at report precision.
inline constexpr double kReportTolerance = 1e-15;

struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;  // symbol -> value text
  std::string value;      // decimal, 30 significant digits, after clamping
  double value_double = 0;
  std::optional<Rational> exact;  // when the bound is rational
  bool vacuous = false;           // raw value exceeded 1 and was clamped
  std::string raw_value;          // before clamping
  std::string note;
};

// expect / threshold, clamped to 1. threshold_fraction > 0.
BoundReport MarkovNoncandidateBound(const Rational& expect_per_agent, const Rational& threshold_fraction, long n);

// Per-agent probability of not being a candidate on a 4-regular graph when
// a chi agent needs at least two chi neighbours: Pr[nu] + Pr[chi] * Pr[at most
// one of four neighbours is chi].
Rational NoncandidateExpectationTorus(const Prior& prior, std::size_t state);

// exp(-2 t^2 / (chi_star * n)); t > 0, chi_star >= 1.
BoundReport DependentChernoff(long n, const Rational& t, const Rational& chi_star);

// Two-sided independent form 2 * exp(-2 t^2 / n), clamped to 1.
BoundReport IndependentHoeffding(long n, const Rational& t);

// d_max + d_max * (d_max - 1) + 1.
long ChiStarBound(const DegreeSequence& degseq);
// 1 + max over vertices of the number of other vertices within two hops.
long ChiStarBound(const ConcreteGraph& graph);

// 2 * exp(-2 (eps0 * c)^2 * n^(1/3)), clamped to 1.
BoundReport HighDegreeStateBound(const Rational& epsilon0, const Rational& c, long n);

// Whether a high-degree agent with c * n^(1/3) neighbours separates the
// states: |E[X|A] - E[X|B]| > 2 eps0 c n^(1/3), X counting alpha or chi
// neighbours. Both sides share the factor c n^(1/3), so the test is exact.
struct SeparationCheck {
  std::string lhs;  // decimal
  std::string rhs;  // decimal
  bool admissible = false;
};
SeparationCheck HighDegreeSeparation(const Prior& prior, const Rational& epsilon0, const Rational& c, long n);

// Deviation t at which the two-sided dependent bound 2 exp(-2 t^2 / (chi* n))
// equals eta: sqrt(chi* n ln(2 / eta) / 2).
double ChernoffEnvelope(long n, long chi_star, const Rational& eta);

}  // namespace factional
