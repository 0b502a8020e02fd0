#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "npkit/error.hpp"
#include "npkit/optimizer.hpp"

// Reliability and evaluation statistics: exact binomial confidence intervals,
// plan success probability, pressure-recovery AUC, one-sample t-tests.

namespace npkit {

struct BinomialResult {
  long successes = 0;
  long trials = 0;
  double point_estimate = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  double confidence = 0.95;
};

// Ordered (time, pressure difference) samples; times strictly increasing.
struct TimeSeries {
  std::vector<double> times;      // min
  std::vector<double> pressures;  // psi

  std::size_t size() const { return times.size(); }
};

struct TTestResult {
  double t_statistic = 0.0;
  long degrees_of_freedom = 0;
  double p_value = 1.0;
};

namespace detail {

// Regularized incomplete beta function I_x(a,b), continued fraction
// evaluation (modified Lentz), accurate to ~1e-14.
inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

inline double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// Quantile of the Beta(a,b) distribution by bisection, tolerance 1e-12.
inline double inv_reg_inc_beta(double a, double b, double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (reg_inc_beta(a, b, mid) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Exact (Clopper-Pearson) binomial confidence interval via beta-quantile
// inversion. Lower bound is 0 when successes = 0; upper is 1 when
// successes = trials.
inline BinomialResult clopper_pearson(long successes, long trials,
                                      double confidence = 0.95) {
  if (trials < 1)
    throw Error(errc::invalid_count, "trials must be at least 1");
  if (successes < 0 || successes > trials)
    throw Error(errc::invalid_count,
                "successes (" + std::to_string(successes) +
                    ") must lie in [0, trials=" + std::to_string(trials) + "]");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw Error(errc::out_of_range, "confidence must be in (0, 1)");
  const double alpha = 1.0 - confidence;
  BinomialResult result;
  result.successes = successes;
  result.trials = trials;
  result.confidence = confidence;
  result.point_estimate = static_cast<double>(successes) / trials;
  const double s = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  result.lower = successes == 0
                     ? 0.0
                     : detail::inv_reg_inc_beta(s, n - s + 1.0, alpha / 2.0);
  result.upper = successes == trials
                     ? 1.0
                     : detail::inv_reg_inc_beta(s + 1.0, n - s, 1.0 - alpha / 2.0);
  return result;
}

// Probability that every mount in the plan succeeds, given per-mount success
// probability p: p^mount_count.
inline double plan_success_prob(double per_change_success, const Plan& plan) {
  if (!(per_change_success >= 0.0 && per_change_success <= 1.0))
    throw Error(errc::out_of_range, "success probability must be in [0, 1]");
  return std::pow(per_change_success, plan.mount_count);
}

// Trapezoidal integral of the pressure difference over [t_start, t_end], with
// linear interpolation at the window edges.
inline double auc(const TimeSeries& series, double t_start, double t_end) {
  if (series.size() < 2)
    throw Error(errc::out_of_range, "series needs at least 2 samples");
  if (!(t_start < t_end))
    throw Error(errc::empty_window, "integration window is empty");
  if (t_start < series.times.front() || t_end > series.times.back())
    throw Error(errc::out_of_range,
                "window [" + std::to_string(t_start) + ", " +
                    std::to_string(t_end) + "] exceeds the series span");
  auto value_at = [&](double t) {
    auto it = std::lower_bound(series.times.begin(), series.times.end(), t);
    std::size_t i = it - series.times.begin();
    if (i < series.size() && series.times[i] == t) return series.pressures[i];
    double t0 = series.times[i - 1], t1 = series.times[i];
    double frac = (t - t0) / (t1 - t0);
    return series.pressures[i - 1] +
           frac * (series.pressures[i] - series.pressures[i - 1]);
  };
  double total = 0.0;
  double prev_t = t_start, prev_v = value_at(t_start);
  for (std::size_t i = 0; i < series.size(); ++i) {
    double t = series.times[i];
    if (t <= t_start) continue;
    if (t >= t_end) break;
    total += 0.5 * (prev_v + series.pressures[i]) * (t - prev_t);
    prev_t = t;
    prev_v = series.pressures[i];
  }
  total += 0.5 * (prev_v + value_at(t_end)) * (t_end - prev_t);
  return total;
}

// One-sample two-sided t-test of mean against mu0.
inline TTestResult one_sample_ttest(std::span<const double> samples,
                                    double mu0) {
  const std::size_t n = samples.size();
  if (n < 2)
    throw Error(errc::degenerate_sample, "need at least 2 samples");
  double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  if (ss == 0.0)
    throw Error(errc::degenerate_sample, "sample variance is zero");
  double var = ss / (n - 1);
  TTestResult result;
  result.degrees_of_freedom = static_cast<long>(n) - 1;
  result.t_statistic = (mean - mu0) / std::sqrt(var / n);
  double df = static_cast<double>(result.degrees_of_freedom);
  double t2 = result.t_statistic * result.t_statistic;
  result.p_value = detail::reg_inc_beta(df / 2.0, 0.5, df / (df + t2));
  if (result.p_value > 1.0) result.p_value = 1.0;
  return result;
}

// Pressure CSV: header `t_min,dpsi`, numeric rows, strictly increasing times.
inline TimeSeries parse_pressure_csv(std::string_view text) {
  std::stringstream ss{std::string(text)};
  std::string line;
  if (!std::getline(ss, line))
    throw Error(errc::syntax, "pressure csv: empty input");
  line = detail::trim(line);
  if (line != "t_min,dpsi")
    throw Error(errc::syntax, "pressure csv: expected header 't_min,dpsi'");
  TimeSeries series;
  int line_no = 1;
  while (std::getline(ss, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(errc::syntax, "pressure csv line " + std::to_string(line_no) +
                                    ": expected 't,dpsi'");
    double t, p;
    try {
      std::size_t used = 0;
      std::string left = detail::trim(line.substr(0, comma));
      std::string right = detail::trim(line.substr(comma + 1));
      t = std::stod(left, &used);
      if (used != left.size()) throw std::invalid_argument(left);
      p = std::stod(right, &used);
      if (used != right.size()) throw std::invalid_argument(right);
    } catch (const std::exception&) {
      throw Error(errc::syntax, "pressure csv line " + std::to_string(line_no) +
                                    ": bad numeric value");
    }
    if (!series.times.empty() && t <= series.times.back())
      throw Error(errc::non_monotone_time,
                  "pressure csv line " + std::to_string(line_no) +
                      ": time is not strictly increasing");
    series.times.push_back(t);
    series.pressures.push_back(p);
  }
  return series;
}

}  // namespace npkit
