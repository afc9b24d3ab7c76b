#pragma once

// Multi-run experiments: fan runs out over a worker pool, reduce them in run
// order, and write plain CSV files.
//
// Run r of every algorithm draws rewards from the stream
// derive_stream_seed(seed, r), so results depend only on (plan, r) and never
// on scheduling.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lilhdoc/algorithms.hpp"
#include "lilhdoc/core.hpp"
#include "lilhdoc/env.hpp"
#include "lilhdoc/instance_io.hpp"

namespace lilhdoc {

struct ExperimentPlan {
  std::filesystem::path instance_path;
  std::vector<Algorithm> algorithms{Algorithm::LilHDoC, Algorithm::HDoC, Algorithm::LUCBG};
  std::size_t runs = 10;
  double delta = 0.01;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  std::filesystem::path output_dir;  // empty: do not write files
  std::size_t threads = 0;           // 0: hardware concurrency
  double scale_divisor = 1e5;

  AlgoConfig config_for(Algorithm algorithm) const {
    return {algorithm, delta, seed, budget};
  }

  void validate(std::size_t arm_count) const {
    if (runs < 1) throw config_error("runs must be at least 1");
    if (algorithms.empty()) throw config_error("algorithm list is empty");
    if (!(scale_divisor > 0.0)) throw config_error("scale divisor must be positive");
    for (Algorithm a : algorithms) config_for(a).validate(arm_count);
  }
};

struct AlgorithmResult {
  Algorithm algorithm;
  std::vector<RunOutcome> runs;  // indexed by run id
  AggregateStats stats;
};

struct ExperimentResult {
  std::vector<AlgorithmResult> algorithms;
};

/// Calls body(i) for i in [0, n) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers finish.
template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

inline ExperimentResult run_experiment(const BanditInstance& instance,
                                       const ExperimentPlan& plan) {
  plan.validate(instance.arm_count());

  ExperimentResult result;
  for (Algorithm a : plan.algorithms) {
    result.algorithms.push_back({a, std::vector<RunOutcome>(plan.runs), {}});
  }
  // Solve lil'HDoC constants once rather than per run.
  std::optional<LilHDoCPolicy> lil;
  if (std::find(plan.algorithms.begin(), plan.algorithms.end(), Algorithm::LilHDoC) !=
      plan.algorithms.end()) {
    lil.emplace(instance.arm_count(), plan.delta);
  }

  const std::size_t jobs = plan.algorithms.size() * plan.runs;
  parallel_for(jobs, plan.threads, [&](std::size_t job) {
    const std::size_t algo = job / plan.runs;
    const std::size_t run = job % plan.runs;
    BernoulliEnv env(instance, plan.seed, run);
    const auto k = static_cast<std::uint64_t>(instance.arm_count());
    RunOutcome outcome;
    switch (plan.algorithms[algo]) {
      case Algorithm::LilHDoC:
        outcome = run_gai(instance, *lil, env, plan.budget);
        break;
      case Algorithm::HDoC:
        outcome = run_gai(instance, HDoCPolicy(k, plan.delta), env, plan.budget);
        break;
      case Algorithm::LUCBG:
        outcome = run_gai(instance, LUCBGPolicy(k, plan.delta), env, plan.budget);
        break;
    }
    result.algorithms[algo].runs[run] = std::move(outcome);
  });

  for (auto& a : result.algorithms) a.stats = aggregate(a.runs, plan.scale_divisor);
  return result;
}

// ---- CSV output -----------------------------------------------------------

/// One row per (run, lambda reached); a run with no good label gets a single
/// row with lambda 0 and an empty tau_lambda. Empty tau_stop means truncated.
inline void write_raw_csv(std::ostream& out, const ExperimentResult& result) {
  out << "run_id,algorithm,lambda,tau_lambda,tau_stop,misclassified,truncated\n";
  for (const auto& a : result.algorithms) {
    for (std::size_t run = 0; run < a.runs.size(); ++run) {
      const RunOutcome& o = a.runs[run];
      const std::string tail =
          "," + (o.tau_stop ? std::to_string(*o.tau_stop) : std::string()) + "," +
          (o.misclassified ? "1" : "0") + "," + (o.truncated ? "1" : "0") + "\n";
      if (o.tau_lambda.empty()) {
        out << run << ',' << to_string(a.algorithm) << ",0," << tail;
      }
      for (std::size_t k = 0; k < o.tau_lambda.size(); ++k) {
        out << run << ',' << to_string(a.algorithm) << ',' << (k + 1) << ','
            << o.tau_lambda[k] << tail;
      }
    }
  }
}

/// Unscaled statistics; lambda "stop" holds tau_stop.
inline void write_aggregate_csv(std::ostream& out, const ExperimentResult& result) {
  out << "algorithm,lambda,mean,stddev,runs,not_reached,truncated\n";
  const auto row = [&](Algorithm a, const std::string& lambda, const SampleSummary& s) {
    out << to_string(a) << ',' << lambda << ',' << format_real(s.mean) << ','
        << format_real(s.stddev) << ',' << s.runs << ',' << s.not_reached << ','
        << s.truncated << '\n';
  };
  for (const auto& a : result.algorithms) {
    for (std::size_t k = 0; k < a.stats.tau_lambda.size(); ++k) {
      row(a.algorithm, std::to_string(k + 1), a.stats.tau_lambda[k]);
    }
    row(a.algorithm, "stop", a.stats.tau_stop);
  }
}

/// Per-arm pulls and labels, for diagnostics against predicted sample counts.
inline void write_arms_csv(std::ostream& out, const ExperimentResult& result) {
  out << "run_id,algorithm,arm,pulls,label,label_round\n";
  for (const auto& a : result.algorithms) {
    for (std::size_t run = 0; run < a.runs.size(); ++run) {
      const RunOutcome& o = a.runs[run];
      for (std::size_t arm = 0; arm < o.pulls_per_arm.size(); ++arm) {
        out << run << ',' << to_string(a.algorithm) << ',' << arm << ','
            << o.pulls_per_arm[arm];
        const auto it = std::find_if(o.events.begin(), o.events.end(),
                                     [arm](const auto& e) { return e.arm == arm; });
        if (it != o.events.end()) {
          out << ',' << to_string(it->label) << ',' << it->round << '\n';
        } else {
          out << ",,\n";
        }
      }
    }
  }
}

/// Curve data: one row per (algorithm, lambda) plus one tau_stop row per
/// algorithm, values exactly as aggregated.
inline void emit_plot_data(std::ostream& out, const ExperimentResult& result) {
  if (result.algorithms.empty()) throw config_error("nothing to plot");
  out << "algorithm,lambda,mean_samples,stddev\n";
  for (const auto& a : result.algorithms) {
    for (std::size_t k = 0; k < a.stats.tau_lambda.size(); ++k) {
      out << to_string(a.algorithm) << ',' << (k + 1) << ','
          << format_real(a.stats.tau_lambda[k].mean) << ','
          << format_real(a.stats.tau_lambda[k].stddev) << '\n';
    }
    out << to_string(a.algorithm) << ",stop," << format_real(a.stats.tau_stop.mean) << ','
        << format_real(a.stats.tau_stop.stddev) << '\n';
  }
}

/// Human-readable table, values divided by the plan's scale divisor.
inline std::string format_summary(const ExperimentResult& result) {
  std::ostringstream out;
  char buf[96];
  for (const auto& a : result.algorithms) {
    const double scale = a.stats.scale_divisor;
    std::snprintf(buf, sizeof buf, "%s (runs=%zu, values / %g)\n",
                  std::string(to_string(a.algorithm)).c_str(), a.stats.runs, scale);
    out << buf;
    const auto line = [&](const std::string& label, const SampleSummary& s) {
      std::snprintf(buf, sizeof buf, "  %-10s %12.2f +- %-10.2f [%zu runs", label.c_str(),
                    s.mean / scale, s.stddev / scale, s.runs);
      out << buf;
      if (s.not_reached != 0) out << ", " << s.not_reached << " not reached";
      if (s.truncated != 0) out << ", " << s.truncated << " truncated";
      out << "]\n";
    };
    for (std::size_t k = 0; k < a.stats.tau_lambda.size(); ++k) {
      line("tau_" + std::to_string(k + 1), a.stats.tau_lambda[k]);
    }
    line("tau_stop", a.stats.tau_stop);
    std::size_t wrong = 0;
    for (const auto& o : a.runs) wrong += o.misclassified ? 1 : 0;
    out << "  misclassified runs: " << wrong << "\n";
  }
  return out.str();
}

inline void write_results(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto write = [&](const char* name, auto&& writer) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    writer(out, result);
  };
  write("raw.csv", [](std::ostream& o, const auto& r) { write_raw_csv(o, r); });
  write("aggregate.csv", [](std::ostream& o, const auto& r) { write_aggregate_csv(o, r); });
  write("arms.csv", [](std::ostream& o, const auto& r) { write_arms_csv(o, r); });
  write("plot.csv", [](std::ostream& o, const auto& r) { emit_plot_data(o, r); });
}

/// Loads the plan's instance, runs it, and writes CSVs when an output
/// directory is set.
inline ExperimentResult run_experiment(const ExperimentPlan& plan) {
  const BanditInstance instance = read_instance(plan.instance_path);
  ExperimentResult result = run_experiment(instance, plan);
  if (!plan.output_dir.empty()) write_results(result, plan.output_dir);
  return result;
}

}  // namespace lilhdoc
