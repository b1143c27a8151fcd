#include "factional/bounds.hpp"

#include <mpfr.h>

#include <algorithm>

#include "factional/error.hpp"

namespace factional {

namespace {

class Real {
 public:
  Real() { mpfr_init2(v_, kBoundPrecisionBits); mpfr_set_ui(v_, 0, MPFR_RNDN); }
  explicit Real(const Rational& q) : Real() { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
  Real(const Real& o) : Real() { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real& operator=(const Real& o) {
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  std::string Text(int digits = 30) const {
    char* buffer = nullptr;
    mpfr_asprintf(&buffer, "%.*Rg", digits, v_);
    std::string out(buffer);
    mpfr_free_str(buffer);
    return out;
  }
  double Double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

Real Exp(const Real& x) {
  Real r;
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

// Fills value fields from a raw bound, clamping at 1.
void SetValue(BoundReport& report, const Real& raw) {
  report.raw_value = raw.Text();
  if (mpfr_cmp_ui(raw.get(), 1) > 0) {
    report.vacuous = true;
    report.value = "1";
    report.value_double = 1.0;
  } else {
    report.value = raw.Text();
    report.value_double = raw.Double();
  }
}

}  // namespace

BoundReport MarkovNoncandidateBound(const Rational& expect_per_agent, const Rational& threshold_fraction, long n) {
  if (sgn(threshold_fraction) <= 0) Fail(ErrorKind::kInvalidArgument, "threshold fraction must be positive");
  if (sgn(expect_per_agent) < 0) Fail(ErrorKind::kInvalidArgument, "expectation must be non-negative");
  if (n < 1) Fail(ErrorKind::kInvalidArgument, "n must be positive");
  BoundReport report;
  report.name = "markov_noncandidate";
  report.inputs = {{"E[X_i]", FormatRational(expect_per_agent)},
                   {"threshold", FormatRational(threshold_fraction)},
                   {"n", std::to_string(n)}};
  // (E[X_i] n) / (threshold n); n cancels.
  const Rational raw = expect_per_agent / threshold_fraction;
  report.raw_value = FormatDecimal(raw, 30);
  report.vacuous = raw > 1;
  report.exact = report.vacuous ? Rational(1) : raw;
  report.value = FormatDecimal(*report.exact, 30);
  report.value_double = report.exact->get_d();
  report.note = "Pr[non-candidates >= threshold * n] <= E / threshold";
  return report;
}

Rational NoncandidateExpectationTorus(const Prior& prior, std::size_t state) {
  if (state >= prior.num_states()) Fail(ErrorKind::kInvalidArgument, "state index out of range");
  const TypeDistribution& d = prior.state(state).types;
  const Rational& chi = d[AgentType::kChi];
  const Rational none = Pow(1 - chi, 4);
  const Rational one = 4 * chi * Pow(1 - chi, 3);
  return d[AgentType::kNu] + chi * none + chi * one;
}

BoundReport DependentChernoff(long n, const Rational& t, const Rational& chi_star) {
  if (n < 1) Fail(ErrorKind::kInvalidArgument, "n must be positive");
  if (sgn(t) <= 0) Fail(ErrorKind::kInvalidArgument, "t must be positive");
  if (chi_star < 1) Fail(ErrorKind::kInvalidArgument, "chi_star must be at least 1");
  BoundReport report;
  report.name = "dependent_chernoff";
  report.inputs = {{"n", std::to_string(n)}, {"t", FormatRational(t)}, {"chi_star", FormatRational(chi_star)}};
  const Rational exponent = -2 * t * t / (chi_star * n);
  SetValue(report, Exp(Real(exponent)));
  report.note = "one-sided tail bound for a sum with dependency graph of fractional chromatic number chi_star";
  return report;
}

BoundReport IndependentHoeffding(long n, const Rational& t) {
  if (n < 1) Fail(ErrorKind::kInvalidArgument, "n must be positive");
  if (sgn(t) <= 0) Fail(ErrorKind::kInvalidArgument, "t must be positive");
  BoundReport report;
  report.name = "independent_hoeffding";
  report.inputs = {{"n", std::to_string(n)}, {"t", FormatRational(t)}};
  Real raw = Exp(Real(Rational(-2 * t * t / n)));
  mpfr_mul_ui(raw.get(), raw.get(), 2, MPFR_RNDN);
  SetValue(report, raw);
  report.note = "two-sided bound for a sum of independent indicators";
  return report;
}

long ChiStarBound(const DegreeSequence& degseq) {
  const long d = degseq.max_degree();
  return d + d * (d - 1) + 1;
}

long ChiStarBound(const ConcreteGraph& graph) {
  long best = 0;
  const int n = graph.num_vertices();
  std::vector<int> mark(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    long count = 0;
    mark[static_cast<std::size_t>(v)] = v;
    for (int u : graph.neighbors(v)) {
      if (mark[static_cast<std::size_t>(u)] != v) {
        mark[static_cast<std::size_t>(u)] = v;
        ++count;
      }
    }
    for (int u : graph.neighbors(v)) {
      for (int w : graph.neighbors(u)) {
        if (mark[static_cast<std::size_t>(w)] != v) {
          mark[static_cast<std::size_t>(w)] = v;
          ++count;
        }
      }
    }
    best = std::max(best, count);
  }
  return best + 1;
}

BoundReport HighDegreeStateBound(const Rational& epsilon0, const Rational& c, long n) {
  if (sgn(epsilon0) <= 0 || sgn(c) <= 0) Fail(ErrorKind::kInvalidArgument, "epsilon0 and c must be positive");
  if (n < 1) Fail(ErrorKind::kInvalidArgument, "n must be positive");
  BoundReport report;
  report.name = "high_degree_state";
  report.inputs = {{"epsilon0", FormatRational(epsilon0)}, {"c", FormatRational(c)}, {"n", std::to_string(n)}};
  Real cube_root;
  mpfr_set_si(cube_root.get(), n, MPFR_RNDN);
  mpfr_cbrt(cube_root.get(), cube_root.get(), MPFR_RNDN);
  Real exponent(Rational(-2 * epsilon0 * epsilon0 * c * c));
  mpfr_mul(exponent.get(), exponent.get(), cube_root.get(), MPFR_RNDN);
  Real raw = Exp(exponent);
  mpfr_mul_ui(raw.get(), raw.get(), 2, MPFR_RNDN);
  SetValue(report, raw);
  report.note = "probability a high-degree agent's neighbour count strays eps0 * c * n^(1/3) from its mean";
  return report;
}

SeparationCheck HighDegreeSeparation(const Prior& prior, const Rational& epsilon0, const Rational& c, long n) {
  if (prior.num_states() != 2) Fail(ErrorKind::kNotTwoStates, "separation check needs two states");
  if (sgn(epsilon0) <= 0 || sgn(c) <= 0) Fail(ErrorKind::kInvalidArgument, "epsilon0 and c must be positive");
  auto revolting = [&](std::size_t s) {
    return prior.state(s).types[AgentType::kAlpha] + prior.state(s).types[AgentType::kChi];
  };
  const Rational gap = abs(Rational(revolting(0) - revolting(1)));
  Real scale;
  mpfr_set_si(scale.get(), n, MPFR_RNDN);
  mpfr_cbrt(scale.get(), scale.get(), MPFR_RNDN);
  Real cq(c);
  mpfr_mul(scale.get(), scale.get(), cq.get(), MPFR_RNDN);
  Real lhs(gap);
  mpfr_mul(lhs.get(), lhs.get(), scale.get(), MPFR_RNDN);
  Real rhs(Rational(2 * epsilon0));
  mpfr_mul(rhs.get(), rhs.get(), scale.get(), MPFR_RNDN);
  return {lhs.Text(), rhs.Text(), gap > 2 * epsilon0};
}

double ChernoffEnvelope(long n, long chi_star, const Rational& eta) {
  if (sgn(eta) <= 0 || eta >= 1) Fail(ErrorKind::kInvalidArgument, "eta must lie in (0, 1)");
  if (n < 1 || chi_star < 1) Fail(ErrorKind::kInvalidArgument, "n and chi_star must be positive");
  Real x(Rational(2) / eta);
  mpfr_log(x.get(), x.get(), MPFR_RNDN);
  mpfr_mul_si(x.get(), x.get(), chi_star, MPFR_RNDN);
  mpfr_mul_si(x.get(), x.get(), n, MPFR_RNDN);
  mpfr_div_ui(x.get(), x.get(), 2, MPFR_RNDN);
  mpfr_sqrt(x.get(), x.get(), MPFR_RNDN);
  return x.Double();
}

}  // namespace factional
