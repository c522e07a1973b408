#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mftlex::stats {

// Continued-fraction evaluation budget for the incomplete beta function.
inline constexpr int kMaxBetaIterations = 100000;
inline constexpr double kBetaTolerance = 1e-15;

struct BetaEvaluation {
  double lower = 0.0;  // I_x(a, b)
  double upper = 1.0;  // 1 - I_x(a, b), evaluated directly
  int iterations = 0;
  bool converged = true;  // false when the iteration cap was hit
};

// Regularized incomplete beta. `y` must equal 1 - x; passing it separately
// keeps precision when x is close to 1.
BetaEvaluation incomplete_beta(double a, double b, double x, double y);
BetaEvaluation incomplete_beta(double a, double b, double x);

struct Probability {
  double value = 1.0;
  bool converged = true;  // precision warning when false
};

// P(F > f) for F ~ F(d1, d2). Throws InvalidDf / InvalidArgument.
Probability f_upper_tail(double f, long d1, long d2);
// P(|T| >= |t|) for T ~ Student t(df). Throws InvalidDf / InvalidArgument.
Probability t_two_sided(double t, long df);

struct AnovaResult {
  double fStatistic = 0.0;  // +inf when infiniteF
  long dfBetween = 0;
  long dfWithin = 0;
  double pValue = 1.0;
  std::vector<double> groupMeans;  // input order
  double ssBetween = 0.0;
  double ssWithin = 0.0;
  bool infiniteF = false;  // every group constant, means differ
  bool precisionWarning = false;
};

// Fixed-effects one-way ANOVA. Throws TooFewGroups (<2), EmptyGroup,
// InvalidDf (N - k < 1) and DegenerateInput (every observation identical).
AnovaResult one_way_anova(std::span<const std::vector<double>> groups);

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  double pValue = 1.0;  // two-sided, Student t with n - 2 df
  bool precisionWarning = false;
};

// Throws LengthMismatch, TooFewPoints (n < 3), ZeroVariance.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

struct GroupSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample sd (n - 1); NaN for n == 1
  std::size_t n = 0;
};

// Throws LengthMismatch (also for empty input).
std::map<std::string, GroupSummary> grouped_means(std::span<const double> values,
                                                  std::span<const std::string> labels);

}  // namespace mftlex::stats
