#pragma once

// Numeric verification suites. Each check compares a library routine against
// an independent oracle (integer scans, long-double arithmetic, Monte-Carlo
// frequencies) and records the measured value next to its limit.
//
//   solver       solve_T against a linear scan; solve_epsilon feasibility
//                and maximality; monotone initialization predicate
//   inversion    brute-force scan of the iterated-log inequality
//   crossover    lil radius <= hdoc radius on a log grid from T to 1e7
//   scaling      T / (log(K+1) log(max(1/delta, e))) below a pinned constant
//   gap_scaling  1/gap^2 scaling of the per-arm sample bound
//   correctness  misclassification frequency on an easy instance

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lilhdoc/bounds.hpp"
#include "lilhdoc/core.hpp"
#include "lilhdoc/env.hpp"
#include "lilhdoc/harness.hpp"

namespace lilhdoc {

struct VerifyCheck {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string limit;
};

struct VerifyOptions {
  std::size_t inversion_triples = 1000;
  std::size_t correctness_runs = 200;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

inline constexpr std::uint64_t kGridArms[] = {2, 6, 100};
inline constexpr double kGridDeltas[] = {1e-2, 1e-3};
inline constexpr std::size_t kCrossoverPoints = 200;
inline constexpr double kCrossoverMax = 1e7;
/// Calibrated once over the grid (observed maximum 575.77 at K = 2, delta = 0.01).
inline constexpr double kInitPullScaling = 576.0;
inline constexpr double kGapScalingSlack = 0.05;

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"solver",  "inversion",   "crossover",
                                              "scaling", "gap_scaling", "correctness"};
  return names;
}

// ---- oracles --------------------------------------------------------------

/// Least t >= 2 meeting the initialization criterion, by stepping t upward
/// and evaluating the predicate directly in long double.
inline std::uint64_t linear_scan_T(std::uint64_t arms, double delta, double eps) {
  const long double e = eps;
  const long double s = 1.0L + std::sqrt(e);
  const long double r = s * s * (1.0L + e);
  const long double ce = ((2.0L + e) / e) * std::pow(1.0L / std::log1p(e), 1.0L + e);
  const long double log_rhs = std::log(0.25L) + (r - 1.0L) * std::log((long double)arms) +
                              (r - 1.0L) * std::log(1.0L / (long double)delta) +
                              r * std::log(ce);
  for (std::uint64_t t = kMinInitPulls;; ++t) {
    const long double td = static_cast<long double>(t);
    const long double l = std::log((1.0L + e) * td);
    if (l > 0.0L && 2.0L * std::log(td) - r * std::log(l) >= log_rhs) return t;
  }
}

/// Largest integer t in [1, limit] with (1/t) log(log((1 + eps) t) / omega) >= c,
/// or 0 when none does.
inline std::uint64_t iterated_log_largest_solution(double c, double omega, double eps,
                                             std::uint64_t limit) {
  std::uint64_t largest = 0;
  for (std::uint64_t t = 1; t <= limit; ++t) {
    const long double td = static_cast<long double>(t);
    const long double ratio = std::log((1.0L + eps) * td) / (long double)omega;
    if (ratio <= 0.0L) continue;
    if (std::log(ratio) / td >= (long double)c) largest = t;
  }
  return largest;
}

/// `points` log-spaced integers from lo to hi inclusive, deduplicated.
inline std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi,
                                           std::size_t points) {
  std::vector<std::uint64_t> grid;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < points; ++i) {
    const double x = points == 1 ? a : a + (b - a) * static_cast<double>(i) /
                                               static_cast<double>(points - 1);
    auto n = static_cast<std::uint64_t>(std::llround(std::exp(x)));
    n = std::clamp(n, lo, hi);
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  return grid;
}

namespace detail {

inline std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string grid_label(std::uint64_t arms, double delta) {
  return "K=" + std::to_string(arms) + ",delta=" + num(delta);
}

inline void verify_solver(std::vector<VerifyCheck>& out) {
  for (std::uint64_t k : kGridArms) {
    for (double delta : kGridDeltas) {
      const std::string where = grid_label(k, delta);
      const double eps = solve_epsilon(k, delta);
      const double bound = epsilon_constraint(k, delta);
      const double at = lil_exponent(eps) - 1.0;
      const double above = lil_exponent(eps + 1e-6) - 1.0;
      out.push_back({"solver", "epsilon_feasible " + where, at <= bound,
                     "r(eps)-1=" + num(at), "<= " + num(bound)});
      out.push_back({"solver", "epsilon_maximal " + where, above > bound,
                     "r(eps+1e-6)-1=" + num(above), "> " + num(bound)});
      out.push_back({"solver", "r_at_most_1.5 " + where, lil_exponent(eps) <= 1.5,
                     "r=" + num(lil_exponent(eps)), "<= 1.5"});

      const std::uint64_t t = solve_T(k, delta, eps);
      const std::uint64_t scan = linear_scan_T(k, delta, eps);
      out.push_back({"solver", "T_equals_scan " + where, t == scan,
                     "T=" + std::to_string(t), "scan=" + std::to_string(scan)});

      const InitPullCriterion criterion(k, delta, eps);
      bool monotone = true;
      double previous = criterion.log_lhs(kMinInitPulls);
      for (std::uint64_t n = kMinInitPulls + 1; n <= 4 * t; ++n) {
        const double current = criterion.log_lhs(n);
        if (current < previous) monotone = false;
        previous = current;
      }
      out.push_back({"solver", "predicate_nondecreasing " + where, monotone,
                     monotone ? "nondecreasing" : "decrease found",
                     "t in [2, " + std::to_string(4 * t) + "]"});
    }
  }
}

inline void verify_inversion(std::vector<VerifyCheck>& out, const VerifyOptions& options) {
  Xoshiro256StarStar rng(derive_stream_seed(options.seed, 0x1e2a2ull));
  const auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng.next_unit());
  };
  std::size_t failures = 0;
  std::size_t nonvacuous = 0;
  std::size_t drawn = 0;
  double worst = 0.0;  // largest solution / bound
  while (drawn < options.inversion_triples) {
    const double c = log_uniform(1e-2, 10.0);
    const double omega = log_uniform(1e-6, 0.99);
    const double eps = 1e-3 + (0.999 - 1e-3) * rng.next_unit();
    const double bound = iterated_log_inversion_bound(c, omega, eps);
    if (!std::isfinite(bound)) continue;  // inner logarithm undefined; redraw
    ++drawn;
    const auto limit = static_cast<std::uint64_t>(std::ceil(10.0 * std::max(bound, 10.0)));
    const std::uint64_t largest = iterated_log_largest_solution(c, omega, eps, limit);
    if (largest > 0) {
      ++nonvacuous;
      worst = std::max(worst, static_cast<double>(largest) / bound);
    }
    if (largest > 0 && static_cast<double>(largest) > bound) ++failures;
  }
  out.push_back({"inversion", "solutions_below_bound", failures == 0,
                 std::to_string(failures) + " of " + std::to_string(drawn) +
                     " triples violated (" + std::to_string(nonvacuous) +
                     " with solutions, max t/bound=" + num(worst) + ")",
                 "0 violations"});
}

inline void verify_crossover(std::vector<VerifyCheck>& out) {
  for (std::uint64_t k : kGridArms) {
    for (double delta : kGridDeltas) {
      const LilParams p = lil_params(k, delta);
      std::size_t violations = 0;
      double worst_margin = kInfinity;  // min of hdoc - lil
      const auto grid = log_grid(p.init_pulls, static_cast<std::uint64_t>(kCrossoverMax),
                                 kCrossoverPoints);
      for (std::uint64_t n : grid) {
        const double lil = lil_radius(n, p.omega, p.epsilon);
        const double hdoc = hdoc_id_radius(n, k, delta);
        if (!(lil <= hdoc)) ++violations;
        worst_margin = std::min(worst_margin, hdoc - lil);
      }
      out.push_back({"crossover", "lil_below_hdoc " + grid_label(k, delta), violations == 0,
                     std::to_string(violations) + " violations over " +
                         std::to_string(grid.size()) + " points, min margin " +
                         num(worst_margin),
                     "0 violations"});
    }
  }
}

inline void verify_scaling(std::vector<VerifyCheck>& out) {
  for (std::uint64_t k : kGridArms) {
    for (double delta : kGridDeltas) {
      const LilParams p = lil_params(k, delta);
      const double scale = std::log(static_cast<double>(k) + 1.0) *
                           std::log(std::max(1.0 / delta, std::numbers::e));
      const double ratio = static_cast<double>(p.init_pulls) / scale;
      out.push_back({"scaling", "T_over_logs " + grid_label(k, delta),
                     ratio <= kInitPullScaling, "T=" + std::to_string(p.init_pulls) +
                     " ratio=" + num(ratio), "<= " + num(kInitPullScaling)});
    }
  }
}

inline void verify_gap_scaling(std::vector<VerifyCheck>& out) {
  for (std::uint64_t k : kGridArms) {
    for (double delta : kGridDeltas) {
      const double eps = solve_epsilon(k, delta);
      for (double gap : {1e-2, 3e-3, 1e-3}) {
        const double ratio =
            per_arm_sample_bound(gap / 10.0, k, delta, eps) / per_arm_sample_bound(gap, k, delta, eps);
        out.push_back({"gap_scaling",
                       "tenfold_gap_ratio " + grid_label(k, delta) + ",gap=" + num(gap),
                       ratio >= 100.0 && ratio <= 100.0 * (1.0 + kGapScalingSlack),
                       "ratio=" + num(ratio),
                       "[100, " + num(100.0 * (1.0 + kGapScalingSlack)) + "]"});
      }
    }
  }
  const bool sentinel = per_arm_sample_bound(0.0, 6, 0.01, 0.02) == kInfinity;
  out.push_back({"gap_scaling", "zero_gap_sentinel", sentinel, sentinel ? "inf" : "finite",
                 "inf"});
}

}  // namespace detail

inline BanditInstance easy_instance() {
  return BanditInstance({0.9, 0.8, 0.2, 0.1}, 0.5, "easy");
}

/// Largest misclassification fraction tolerated over `runs` runs at `delta`.
inline double misclassification_limit(double delta, std::size_t runs) {
  return delta + 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(runs));
}

namespace detail {

inline void verify_correctness(std::vector<VerifyCheck>& out, const VerifyOptions& options) {
  ExperimentPlan plan;
  plan.runs = options.correctness_runs;
  plan.delta = 0.1;
  plan.seed = options.seed;
  plan.threads = options.threads;
  const ExperimentResult result = run_experiment(easy_instance(), plan);
  const double limit = misclassification_limit(plan.delta, plan.runs);
  for (const auto& a : result.algorithms) {
    std::size_t wrong = 0;
    std::size_t truncated = 0;
    for (const auto& o : a.runs) {
      wrong += o.misclassified ? 1 : 0;
      truncated += o.truncated ? 1 : 0;
    }
    const double fraction = static_cast<double>(wrong) / static_cast<double>(plan.runs);
    out.push_back({"correctness", "error_fraction " + std::string(to_string(a.algorithm)),
                   fraction <= limit && truncated == 0,
                   num(fraction) + " (" + std::to_string(wrong) + "/" +
                       std::to_string(plan.runs) + ", truncated " +
                       std::to_string(truncated) + ")",
                   "<= " + num(limit)});
  }
}

}  // namespace detail

/// Runs one suite by name, or every suite for "all".
inline std::vector<VerifyCheck> verify(std::string_view suite,
                                       const VerifyOptions& options = {}) {
  std::vector<VerifyCheck> out;
  const bool all = suite == "all";
  bool known = all;
  const auto want = [&](std::string_view name) {
    if (all || suite == name) {
      known = true;
      return true;
    }
    return false;
  };
  if (want("solver")) detail::verify_solver(out);
  if (want("inversion")) detail::verify_inversion(out, options);
  if (want("crossover")) detail::verify_crossover(out);
  if (want("scaling")) detail::verify_scaling(out);
  if (want("gap_scaling")) detail::verify_gap_scaling(out);
  if (want("correctness")) detail::verify_correctness(out, options);
  if (!known) throw config_error("unknown verify suite '" + std::string(suite) + "'");
  return out;
}

inline bool all_passed(const std::vector<VerifyCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

/// Tab-separated: suite, check, PASS/FAIL, measured, limit.
inline void write_report(std::ostream& out, const std::vector<VerifyCheck>& checks) {
  out << "suite\tcheck\tstatus\tmeasured\tlimit\n";
  for (const auto& c : checks) {
    out << c.suite << '\t' << c.name << '\t' << (c.passed ? "PASS" : "FAIL") << '\t'
        << c.measured << '\t' << c.limit << '\n';
  }
}

}  // namespace lilhdoc
