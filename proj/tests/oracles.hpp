#pragma once

// Test-only oracles, deliberately independent of the library's solver and
// numeric paths: exhaustive enumeration for palette selection and plan
// compilation, binomial-CDF bisection for confidence bounds, adaptive
// quadrature for t-distribution tails, dense resampling for AUC. All are
// exponential or brute-force and only usable at test scale.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "npkit/catalog.hpp"
#include "npkit/optimizer.hpp"

namespace npkit::oracle {

// Optimal palette by enumeration of all 2^n subsets (n <= 15).
inline std::optional<Palette> oracle_select(
    const Catalog& catalog, const std::vector<TaskRequirement>& reqs,
    const Constraints& constraints, const EquivalenceRules& rules) {
  const std::size_t n = catalog.tools.size();
  std::optional<Palette> best;
  std::vector<int> best_tools;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> tools;
    double mass = 0.0, volume = 0.0;
    for (std::size_t t = 0; t < n; ++t)
      if (mask & (1u << t)) {
        tools.push_back(static_cast<int>(t));
        mass += catalog.tools[t].mass;
        volume += catalog.tools[t].volume();
      }
    if (mass > constraints.max_mass || volume > constraints.max_volume)
      continue;
    bool feasible = true;
    for (const auto& req : reqs) {
      bool ok = false;
      for (int t : tools)
        if (covers(catalog.tools[t], req, rules)) {
          ok = true;
          break;
        }
      if (!ok) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    if (!best || tools.size() < best->size() ||
        (tools.size() == best->size() &&
         (mass < best->total_mass ||
          (mass == best->total_mass && tools < best_tools)))) {
      best = Palette::from_indices(catalog, tools);
      best_tools = tools;
    }
  }
  return best;
}

// Minimal (mounts, holder pick-ups) by enumeration of all feasible
// per-step tool choices.
inline std::optional<std::pair<int, int>> oracle_plan(
    const TaskSpec& task, const Catalog& catalog, const Palette& palette,
    const EquivalenceRules& rules) {
  const std::size_t n = task.steps.size();
  std::vector<std::vector<int>> options(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (task.steps[i].prehensile()) continue;
    for (int t : palette.tool_indices)
      if (covers(catalog.tools[t], *task.steps[i].requirement, rules))
        options[i].push_back(t);
    if (options[i].empty()) return std::nullopt;
  }
  int holder_ops = 0;
  bool held = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (task.steps[i].prehensile())
      held = false;
    else if (!held) {
      held = true;
      ++holder_ops;
    }
  }
  int best = std::numeric_limits<int>::max();
  std::function<void(std::size_t, int, int)> walk = [&](std::size_t i,
                                                        int mounted,
                                                        int mounts) {
    if (mounts >= best) return;
    if (i == n) {
      best = mounts;
      return;
    }
    if (task.steps[i].prehensile()) {
      walk(i + 1, mounted, mounts);
      return;
    }
    for (int t : options[i])
      walk(i + 1, t, mounts + (t == mounted ? 0 : 1));
  };
  walk(0, -1, 0);
  return std::make_pair(best, holder_ops);
}

// Clopper-Pearson bounds by bisection on binomial tail sums.
inline double binom_tail_ge(long n, long k, double p) {
  // P(X >= k) for X ~ Binomial(n, p), direct summation.
  double total = 0.0;
  for (long i = k; i <= n; ++i) {
    double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                      std::lgamma(n - i + 1.0);
    if (p > 0) log_term += i * std::log(p);
    else if (i > 0) continue;
    if (p < 1) log_term += (n - i) * std::log1p(-p);
    else if (i < n) continue;
    total += std::exp(log_term);
  }
  return total;
}

inline double binom_tail_le(long n, long k, double p) {
  double total = 0.0;
  for (long i = 0; i <= k; ++i) {
    double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                      std::lgamma(n - i + 1.0);
    if (p > 0) log_term += i * std::log(p);
    else if (i > 0) continue;
    if (p < 1) log_term += (n - i) * std::log1p(-p);
    else if (i < n) continue;
    total += std::exp(log_term);
  }
  return total;
}

inline std::pair<double, double> clopper_pearson_bisect(long successes,
                                                        long trials,
                                                        double confidence) {
  const double alpha = 1.0 - confidence;
  double lower = 0.0, upper = 1.0;
  if (successes > 0) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
      double mid = 0.5 * (lo + hi);
      if (binom_tail_ge(trials, successes, mid) < alpha / 2.0)
        lo = mid;
      else
        hi = mid;
    }
    lower = 0.5 * (lo + hi);
  }
  if (successes < trials) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
      double mid = 0.5 * (lo + hi);
      if (binom_tail_le(trials, successes, mid) > alpha / 2.0)
        lo = mid;
      else
        hi = mid;
    }
    upper = 0.5 * (lo + hi);
  }
  return {lower, upper};
}

// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double eps, int depth,
                               double fa, double fm, double fb, double whole) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, eps / 2.0, depth - 1, fa, flm, fm, left) +
         adaptive_simpson(f, m, b, eps / 2.0, depth - 1, fm, frm, fb, right);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double eps = 1e-12) {
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, eps, 60, fa, fm, fb, whole);
}

// Two-sided p-value for the t statistic, by quadrature of the t density.
inline double t_pvalue_quadrature(double t, long df) {
  double nu = static_cast<double>(df);
  double log_norm = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                    0.5 * std::log(nu * std::acos(-1.0));
  auto density = [&](double x) {
    return std::exp(log_norm - (nu + 1.0) / 2.0 * std::log1p(x * x / nu));
  };
  double at = std::fabs(t);
  // Central mass, then complement; the density integrates to 1.
  double central = integrate(density, -at, at);
  double p = 1.0 - central;
  if (p < 0.0) p = 0.0;
  return p;
}

// AUC by dense uniform resampling with linear interpolation.
inline double auc_resampled(const std::vector<double>& times,
                            const std::vector<double>& pressures,
                            double t_start, double t_end, int samples = 200000) {
  auto value_at = [&](double t) {
    std::size_t i = 1;
    while (i + 1 < times.size() && times[i] < t) ++i;
    double t0 = times[i - 1], t1 = times[i];
    double frac = (t - t0) / (t1 - t0);
    return pressures[i - 1] + frac * (pressures[i] - pressures[i - 1]);
  };
  double h = (t_end - t_start) / samples;
  double total = 0.0;
  for (int k = 0; k < samples; ++k) {
    double a = t_start + k * h;
    double b = a + h;
    total += 0.5 * (value_at(a) + value_at(b)) * h;
  }
  return total;
}

}  // namespace npkit::oracle
