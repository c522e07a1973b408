#include "mftlex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mftlex/error.hpp"

namespace mftlex::stats {

namespace {

constexpr double kHalfLog2Pi = 0.918938533204672741780329736406;
constexpr double kTiny = 1e-300;

// lgamma(z) minus its Stirling approximation (z - 1/2) ln z - z + ln(2 pi)/2.
double stirling_error(double z) {
  if (z < 15.0) return std::lgamma(z) - ((z - 0.5) * std::log(z) - z + kHalfLog2Pi);
  const double r = 1.0 / z;
  const double r2 = r * r;
  return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188))));
}

// ln( x^a y^b / B(a, b) ) with y = 1 - x. Expanding every log-gamma around
// its Stirling form turns the large terms into log1p deviations from the
// mode a/(a+b), which stays accurate for a, b up to ~1e6.
double log_prefactor(double a, double b, double x, double y) {
  const double n = a + b;
  const double p0 = a / n;
  const double q0 = b / n;
  const double dx = x <= 0.5 ? x - p0 : q0 - y;
  return a * std::log1p(dx / p0) + b * std::log1p(-dx / q0) +
         0.5 * (std::log(a) + std::log(b) - std::log(n)) - kHalfLog2Pi - stirling_error(a) -
         stirling_error(b) + stirling_error(n);
}

// Continued fraction for I_x(a, b) (modified Lentz).
double beta_continued_fraction(double a, double b, double x, int& iterations, bool& converged) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  converged = false;
  int m = 1;
  for (; m <= kMaxBetaIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kBetaTolerance) {
      converged = true;
      break;
    }
  }
  iterations = std::min(m, kMaxBetaIterations);
  return h;
}

void require_df(long df, const char* what) {
  if (df < 1) throw Error(ErrorCode::InvalidDf, std::string(what) + " must be >= 1, got " + std::to_string(df));
}

bool all_equal(std::span<const double> values, double to) {
  return std::all_of(values.begin(), values.end(), [to](double v) { return v == to; });
}

}  // namespace

BetaEvaluation incomplete_beta(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "incomplete beta needs a, b > 0");
  if (std::isnan(x) || std::isnan(y)) throw Error(ErrorCode::InvalidArgument, "incomplete beta at NaN");
  BetaEvaluation out;
  if (x <= 0.0) return {0.0, 1.0, 0, true};
  if (y <= 0.0) return {1.0, 0.0, 0, true};

  const double front = std::exp(log_prefactor(a, b, x, y));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double cf = beta_continued_fraction(a, b, x, out.iterations, out.converged);
    out.lower = std::clamp(front * cf / a, 0.0, 1.0);
    out.upper = 1.0 - out.lower;
  } else {
    const double cf = beta_continued_fraction(b, a, y, out.iterations, out.converged);
    out.upper = std::clamp(front * cf / b, 0.0, 1.0);
    out.lower = 1.0 - out.upper;
  }
  return out;
}

BetaEvaluation incomplete_beta(double a, double b, double x) { return incomplete_beta(a, b, x, 1.0 - x); }

Probability f_upper_tail(double f, long d1, long d2) {
  require_df(d1, "numerator df");
  require_df(d2, "denominator df");
  if (std::isnan(f) || f < 0.0) throw Error(ErrorCode::InvalidArgument, "F statistic must be >= 0");
  if (f == 0.0) return {1.0, true};
  if (std::isinf(f)) return {0.0, true};
  const double scaled = static_cast<double>(d1) * f;
  const double denom = static_cast<double>(d2) + scaled;
  const BetaEvaluation beta = incomplete_beta(0.5 * static_cast<double>(d2), 0.5 * static_cast<double>(d1),
                                              static_cast<double>(d2) / denom, scaled / denom);
  return {beta.lower, beta.converged};
}

Probability t_two_sided(double t, long df) {
  require_df(df, "df");
  if (std::isnan(t)) throw Error(ErrorCode::InvalidArgument, "t statistic is NaN");
  if (t == 0.0) return {1.0, true};
  const double t2 = t * t;
  if (std::isinf(t2)) return {0.0, true};
  const double nu = static_cast<double>(df);
  const BetaEvaluation beta = incomplete_beta(0.5 * nu, 0.5, nu / (nu + t2), t2 / (nu + t2));
  return {beta.lower, beta.converged};
}

AnovaResult one_way_anova(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw Error(ErrorCode::TooFewGroups, "one-way ANOVA needs at least two groups");
  std::size_t total = 0;
  double sum = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw Error(ErrorCode::EmptyGroup, "group " + std::to_string(g + 1) + " is empty");
    total += groups[g].size();
    for (double v : groups[g]) sum += v;
  }
  const auto k = static_cast<long>(groups.size());
  const auto n = static_cast<long>(total);
  if (n - k < 1) throw Error(ErrorCode::InvalidDf, "one-way ANOVA needs more observations than groups");

  const double first = groups.front().front();
  if (std::all_of(groups.begin(), groups.end(), [&](const auto& g) { return all_equal(g, first); })) {
    throw Error(ErrorCode::DegenerateInput, "all observations are identical");
  }

  AnovaResult out;
  out.dfBetween = k - 1;
  out.dfWithin = n - k;
  const double grand = sum / static_cast<double>(total);
  bool every_group_constant = true;
  for (const auto& g : groups) {
    double group_sum = 0.0;
    for (double v : g) group_sum += v;
    const double mean = group_sum / static_cast<double>(g.size());
    out.groupMeans.push_back(mean);
    out.ssBetween += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double v : g) out.ssWithin += (v - mean) * (v - mean);
    every_group_constant = every_group_constant && all_equal(g, g.front());
  }

  if (every_group_constant) {
    out.ssWithin = 0.0;
    out.infiniteF = true;
    out.fStatistic = std::numeric_limits<double>::infinity();
    out.pValue = 0.0;
    return out;
  }
  out.fStatistic = (out.ssBetween / static_cast<double>(out.dfBetween)) /
                   (out.ssWithin / static_cast<double>(out.dfWithin));
  const Probability p = f_upper_tail(out.fStatistic, out.dfBetween, out.dfWithin);
  out.pValue = p.value;
  out.precisionWarning = !p.converged;
  return out;
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "x has " + std::to_string(x.size()) + " values, y has " + std::to_string(y.size()));
  }
  if (x.size() < 3) throw Error(ErrorCode::TooFewPoints, "correlation needs at least 3 pairs");
  if (all_equal(x, x.front())) throw Error(ErrorCode::ZeroVariance, "x has zero variance");
  if (all_equal(y, y.front())) throw Error(ErrorCode::ZeroVariance, "y has zero variance");

  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }

  CorrelationResult out;
  out.n = x.size();
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const long df = static_cast<long>(x.size()) - 2;
  if (std::fabs(out.r) == 1.0) {
    out.pValue = 0.0;
    return out;
  }
  const double t = out.r * std::sqrt(static_cast<double>(df) / (1.0 - out.r * out.r));
  const Probability p = t_two_sided(t, df);
  out.pValue = p.value;
  out.precisionWarning = !p.converged;
  return out;
}

std::map<std::string, GroupSummary> grouped_means(std::span<const double> values,
                                                  std::span<const std::string> labels) {
  if (values.size() != labels.size() || values.empty()) {
    throw Error(ErrorCode::LengthMismatch, "need one label per value and at least one value");
  }
  std::map<std::string, std::vector<double>> by_label;
  for (std::size_t i = 0; i < values.size(); ++i) by_label[labels[i]].push_back(values[i]);

  std::map<std::string, GroupSummary> out;
  for (const auto& [label, group] : by_label) {
    GroupSummary s;
    s.n = group.size();
    for (double v : group) s.mean += v;
    s.mean /= static_cast<double>(s.n);
    if (s.n < 2) {
      s.sd = std::numeric_limits<double>::quiet_NaN();
    } else {
      double ss = 0.0;
      for (double v : group) ss += (v - s.mean) * (v - s.mean);
      s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    out.emplace(label, s);
  }
  return out;
}

}  // namespace mftlex::stats
