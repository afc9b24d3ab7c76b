#pragma once

// Domain types shared by every part of the toolkit: problem instances,
// per-arm statistics, algorithm configuration and run outcomes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lilhdoc {

/// Raised when an instance, configuration or plan is rejected before any
/// sampling happens.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Label : std::uint8_t { Good, Bad };

inline std::string_view to_string(Label label) {
  return label == Label::Good ? "good" : "bad";
}

/// Bernoulli bandit instance with a threshold. Arms need not be sorted.
/// An arm whose mean equals the threshold counts as good.
class BanditInstance {
 public:
  BanditInstance(std::vector<double> arm_means, double threshold,
                 std::string name = {})
      : means_(std::move(arm_means)),
        threshold_(threshold),
        name_(std::move(name)) {
    if (means_.empty()) throw config_error("instance needs at least one arm");
    if (!(threshold_ > 0.0 && threshold_ < 1.0)) {
      throw config_error("threshold must lie in (0, 1)");
    }
    for (std::size_t i = 0; i < means_.size(); ++i) {
      if (!(means_[i] >= 0.0 && means_[i] <= 1.0)) {
        throw config_error("mean of arm " + std::to_string(i) +
                           " must lie in [0, 1]");
      }
    }
  }

  std::size_t arm_count() const { return means_.size(); }
  std::span<const double> means() const { return means_; }
  double mean(std::size_t arm) const { return means_.at(arm); }
  double threshold() const { return threshold_; }
  const std::string& name() const { return name_; }

  bool is_good(std::size_t arm) const { return means_.at(arm) >= threshold_; }

  std::size_t good_count() const {
    return static_cast<std::size_t>(std::count_if(
        means_.begin(), means_.end(),
        [this](double m) { return m >= threshold_; }));
  }

  /// |mu_i - xi|
  double gap(std::size_t arm) const {
    return std::abs(means_.at(arm) - threshold_);
  }

  /// mu_i - mu_j (signed)
  double pair_gap(std::size_t i, std::size_t j) const {
    return means_.at(i) - means_.at(j);
  }

  /// min(min_i gap_i, min_j (mu_(j) - mu_(j+1)) / 2), where mu_(j) are the
  /// means sorted in decreasing order.
  double min_gap() const {
    double result = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < means_.size(); ++i) {
      result = std::min(result, gap(i));
    }
    std::vector<double> sorted = means_;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (std::size_t j = 0; j + 1 < sorted.size(); ++j) {
      result = std::min(result, (sorted[j] - sorted[j + 1]) / 2.0);
    }
    return result;
  }

  friend bool operator==(const BanditInstance&, const BanditInstance&) = default;

 private:
  std::vector<double> means_;
  double threshold_;
  std::string name_;
};

struct GroundTruth {
  std::vector<std::size_t> good;
  std::vector<std::size_t> bad;
  std::vector<double> gaps;
};

inline GroundTruth ground_truth(const BanditInstance& instance) {
  GroundTruth truth;
  for (std::size_t i = 0; i < instance.arm_count(); ++i) {
    (instance.is_good(i) ? truth.good : truth.bad).push_back(i);
    truth.gaps.push_back(instance.gap(i));
  }
  return truth;
}

/// Pull count and number of unit rewards for one arm.
struct ArmState {
  std::uint64_t pulls = 0;
  std::uint64_t reward_sum = 0;

  void record(int reward) {
    ++pulls;
    reward_sum += static_cast<std::uint64_t>(reward != 0);
  }

  /// Empirical mean; only meaningful once the arm has been pulled.
  double mean() const {
    if (pulls == 0) throw std::logic_error("empirical mean of an unpulled arm");
    return static_cast<double>(reward_sum) / static_cast<double>(pulls);
  }
};

enum class Algorithm : std::uint8_t { LilHDoC, HDoC, LUCBG };

inline std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::LilHDoC: return "lilhdoc";
    case Algorithm::HDoC: return "hdoc";
    case Algorithm::LUCBG: return "lucbg";
  }
  return "unknown";
}

inline Algorithm parse_algorithm(std::string_view text) {
  if (text == "lilhdoc") return Algorithm::LilHDoC;
  if (text == "hdoc") return Algorithm::HDoC;
  if (text == "lucbg") return Algorithm::LUCBG;
  throw config_error("unknown algorithm '" + std::string(text) +
                     "' (expected lilhdoc, hdoc or lucbg)");
}

inline constexpr std::uint64_t kDefaultBudget = 500'000'000;

struct AlgoConfig {
  Algorithm algorithm = Algorithm::LilHDoC;
  double delta = 0.01;
  std::uint64_t seed = 0;
  /// Safety cap on total pulls; a run that hits it is reported as truncated.
  std::uint64_t max_total_pulls = kDefaultBudget;

  void validate(std::size_t arm_count) const {
    if (!(delta > 0.0)) throw config_error("delta must be positive");
    if (algorithm == Algorithm::LilHDoC) {
      if (!(delta < std::exp(-1.0))) {
        throw config_error("delta must be strictly below 1/e");
      }
      if (arm_count < 2) {
        throw config_error("instance too small for lil'HDoC parameterization");
      }
    } else if (!(delta < 1.0)) {
      throw config_error("delta must be below 1");
    }
    if (max_total_pulls < arm_count) {
      throw config_error("pull budget must be at least the number of arms");
    }
  }
};

/// One label emission. `pulls` and `reward_sum` are the arm's statistics at
/// the moment of emission so the decision can be replayed.
struct IdentificationEvent {
  std::size_t arm = 0;
  Label label = Label::Good;
  std::uint64_t round = 0;
  std::uint64_t pulls = 0;
  std::uint64_t reward_sum = 0;

  friend bool operator==(const IdentificationEvent&,
                         const IdentificationEvent&) = default;
};

struct RunOutcome {
  std::vector<IdentificationEvent> events;
  /// tau_lambda[k] is the total sample count when the (k+1)-th good label
  /// was emitted.
  std::vector<std::uint64_t> tau_lambda;
  /// Total sample count when every arm was labeled; empty when truncated.
  std::optional<std::uint64_t> tau_stop;
  bool truncated = false;
  bool misclassified = false;
  std::vector<std::uint64_t> pulls_per_arm;
  std::uint64_t total_pulls = 0;

  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

/// True iff some event contradicts the instance's ground truth.
/// Truncation alone is not an error.
inline bool score_outcome(const RunOutcome& outcome,
                          const BanditInstance& instance) {
  return std::any_of(outcome.events.begin(), outcome.events.end(),
                     [&](const IdentificationEvent& e) {
                       return (e.label == Label::Good) != instance.is_good(e.arm);
                     });
}

/// Mean and sample standard deviation over the runs that reached a milestone.
struct SampleSummary {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t runs = 0;         // runs contributing a value
  std::size_t not_reached = 0;  // runs that finished without this milestone
  std::size_t truncated = 0;    // runs cut by the budget before it
};

struct AggregateStats {
  /// Entry k summarises tau_{k+1}.
  std::vector<SampleSummary> tau_lambda;
  SampleSummary tau_stop;
  std::size_t runs = 0;
  /// Display-only divisor for human-readable summaries.
  double scale_divisor = 1e5;
};

namespace detail {

inline void summarise(std::span<const double> values, SampleSummary& out) {
  out.runs = values.size();
  if (values.empty()) return;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) {
    out.stddev = 0.0;
    return;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace detail

/// Reduces run outcomes in the given order. Runs missing a milestone are
/// counted, never folded into the statistics.
inline AggregateStats aggregate(std::span<const RunOutcome> outcomes,
                                double scale_divisor = 1e5) {
  AggregateStats stats;
  stats.runs = outcomes.size();
  stats.scale_divisor = scale_divisor;

  std::size_t max_lambda = 0;
  for (const auto& o : outcomes) max_lambda = std::max(max_lambda, o.tau_lambda.size());

  std::vector<double> values;
  for (std::size_t k = 0; k < max_lambda; ++k) {
    values.clear();
    SampleSummary summary;
    for (const auto& o : outcomes) {
      if (k < o.tau_lambda.size()) {
        values.push_back(static_cast<double>(o.tau_lambda[k]));
      } else if (o.truncated) {
        ++summary.truncated;
      } else {
        ++summary.not_reached;
      }
    }
    detail::summarise(values, summary);
    stats.tau_lambda.push_back(summary);
  }

  values.clear();
  for (const auto& o : outcomes) {
    if (o.tau_stop) {
      values.push_back(static_cast<double>(*o.tau_stop));
    } else {
      ++stats.tau_stop.truncated;
    }
  }
  detail::summarise(values, stats.tau_stop);
  return stats;
}

}  // namespace lilhdoc
