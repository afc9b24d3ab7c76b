#pragma once

// The good-arm-identification loop and its three policies.
//
// A policy supplies a sampling index (which arm to pull next; the pull count
// arrives as an exact double), an identification radius (when to label the
// pulled arm) and the number of initial pulls per arm. The loop is shared:
//
//   1. for each arm in index order: pull it init_pulls times, then try to
//      label it;
//   2. while arms remain unlabeled: pull the active arm with the largest
//      sampling index (ties to the lowest index), then try to label it.
//
// Every pull advances the global round counter t by one. Sampling indices are
// computed from the number of pulls made so far; labels are stamped with the
// count including the pull that triggered them.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "lilhdoc/bounds.hpp"
#include "lilhdoc/core.hpp"
#include "lilhdoc/env.hpp"

namespace lilhdoc {

enum class IdentifyResult : std::uint8_t { Good, Bad, Undecided };

/// Good if mean - radius >= xi, Bad if mean + radius <= xi, else Undecided.
/// An infinite radius is always Undecided.
constexpr IdentifyResult identify_check(double mean, double radius, double xi) {
  if (!(radius < kInfinity)) return IdentifyResult::Undecided;
  if (mean - radius >= xi) return IdentifyResult::Good;
  if (mean + radius <= xi) return IdentifyResult::Bad;
  return IdentifyResult::Undecided;
}

template <typename P>
concept GaiPolicy = requires(const P p, double mean, double pulls, std::uint64_t n,
                             double log_round) {
  { p.sampling_index(mean, pulls, log_round) } -> std::convertible_to<double>;
  { p.id_radius(n) } -> std::convertible_to<double>;
  { p.init_pulls() } -> std::convertible_to<std::uint64_t>;
  { P::kIndexDependsOnRound } -> std::convertible_to<bool>;
};

/// Policies may also report that their identification radius is
/// nonincreasing in the pull count from n onwards; the loop then skips exact
/// radius evaluations it can prove would be Undecided.
template <typename P>
concept MonotoneRadiusHint = requires(const P p, std::uint64_t n) {
  { p.radius_decreasing_beyond(n) } -> std::convertible_to<bool>;
};

namespace detail {

// d/dn [log(4 K n^2 / delta) / (2n)] < 0  iff  log(4 K n^2 / delta) > 2.
inline bool hdoc_radius_decreasing_beyond(std::uint64_t n, std::uint64_t arms, double delta) {
  const double nd = static_cast<double>(n);
  return std::log(4.0 * static_cast<double>(arms) * nd * nd / delta) > 2.0 + 1e-6;
}

}  // namespace detail

/// UCB sampling with the anytime deviation radius for identification.
class HDoCPolicy {
 public:
  static constexpr bool kIndexDependsOnRound = true;

  HDoCPolicy(std::uint64_t arms, double delta) : arms_(arms), delta_(delta) {}

  double sampling_index(double mean, double pulls, double log_round) const {
    return mean + detail::ucb_bonus_from_log(pulls, log_round);
  }
  double id_radius(std::uint64_t pulls) const {
    return hdoc_id_radius(pulls, arms_, delta_);
  }
  bool radius_decreasing_beyond(std::uint64_t n) const {
    return detail::hdoc_radius_decreasing_beyond(n, arms_, delta_);
  }
  std::uint64_t init_pulls() const { return 1; }

 private:
  std::uint64_t arms_;
  double delta_;
};

/// Uses the identification radius as the sampling bonus too.
class LUCBGPolicy {
 public:
  static constexpr bool kIndexDependsOnRound = false;

  LUCBGPolicy(std::uint64_t arms, double delta) : arms_(arms), delta_(delta) {}

  double sampling_index(double mean, double pulls, double /*log_round*/) const {
    return mean + hdoc_id_radius(static_cast<std::uint64_t>(pulls), arms_, delta_);
  }
  double id_radius(std::uint64_t pulls) const {
    return hdoc_id_radius(pulls, arms_, delta_);
  }
  bool radius_decreasing_beyond(std::uint64_t n) const {
    return detail::hdoc_radius_decreasing_beyond(n, arms_, delta_);
  }
  std::uint64_t init_pulls() const { return 1; }

 private:
  std::uint64_t arms_;
  double delta_;
};

/// HDoC sampling, finite-LIL identification radius with omega = delta / (c_eps K),
/// and T warm-up pulls per arm.
class LilHDoCPolicy {
 public:
  static constexpr bool kIndexDependsOnRound = true;

  explicit LilHDoCPolicy(LilParams params) : params_(params) {}
  LilHDoCPolicy(std::uint64_t arms, double delta) : params_(lil_params(arms, delta)) {}

  double sampling_index(double mean, double pulls, double log_round) const {
    return mean + detail::ucb_bonus_from_log(pulls, log_round);
  }
  double id_radius(std::uint64_t pulls) const {
    return lil_radius(pulls, params_.omega, params_.epsilon);
  }
  // With L = log((1 + eps) n): d/dn [log(L / omega) / n] < 0 iff log(L / omega) > 1 / L,
  // and once true it stays true.
  bool radius_decreasing_beyond(std::uint64_t n) const {
    const double l = std::log((1.0 + params_.epsilon) * static_cast<double>(n));
    if (!(l > 0.0) || !(l / params_.omega > 1.0)) return false;
    return std::log(l / params_.omega) > (1.0 / l) * (1.0 + 1e-6);
  }
  std::uint64_t init_pulls() const { return params_.init_pulls; }
  const LilParams& params() const { return params_; }

 private:
  LilParams params_;
};

/// Runs one GAI episode. Stops when every arm is labeled or `budget` pulls
/// have been spent (the outcome is then marked truncated).
template <GaiPolicy Policy, RewardOracle Env>
RunOutcome run_gai(const BanditInstance& instance, const Policy& policy, Env& env,
                   std::uint64_t budget) {
  const std::size_t k = instance.arm_count();
  const double xi = instance.threshold();
  const std::uint64_t init_pulls = policy.init_pulls();
  if (init_pulls < 1) throw config_error("policy must pull each arm at least once");

  std::vector<ArmState> arms(k);
  RunOutcome out;
  std::uint64_t t = 0;

  // Per-arm lower bound on the radius valid up to a checkpoint pull count.
  // The bound is shrunk by a relative 1e-12 to absorb rounding in the radius.
  constexpr bool kUseRadiusCache = MonotoneRadiusHint<Policy>;
  std::vector<std::uint64_t> checkpoint(kUseRadiusCache ? k : 0, 0);
  std::vector<double> checkpoint_radius(kUseRadiusCache ? k : 0, 0.0);

  const auto pull = [&](std::size_t i) {
    arms[i].record(env.pull(i));
    ++t;
  };
  // Returns true when arm i received a label.
  const auto try_label = [&](std::size_t i) {
    const ArmState& a = arms[i];
    const double mean = static_cast<double>(a.reward_sum) / static_cast<double>(a.pulls);
    if constexpr (kUseRadiusCache) {
      if (a.pulls <= checkpoint[i] &&
          identify_check(mean, checkpoint_radius[i], xi) == IdentifyResult::Undecided) {
        return false;
      }
    }
    const auto verdict = identify_check(mean, policy.id_radius(a.pulls), xi);
    if (verdict == IdentifyResult::Undecided) {
      if constexpr (kUseRadiusCache) {
        if (policy.radius_decreasing_beyond(a.pulls)) {
          checkpoint[i] = a.pulls + std::max<std::uint64_t>(1, a.pulls / 64);
          checkpoint_radius[i] = policy.id_radius(checkpoint[i]) * (1.0 - 1e-12);
        }
      }
      return false;
    }
    const Label label = verdict == IdentifyResult::Good ? Label::Good : Label::Bad;
    out.events.push_back({i, label, t, a.pulls, a.reward_sum});
    if (label == Label::Good) out.tau_lambda.push_back(t);
    return true;
  };

  // Unlabeled arms in increasing index order, with their statistics kept in
  // parallel dense arrays so the index scan vectorizes.
  std::vector<std::size_t> active;
  std::vector<double> active_mean;
  std::vector<double> active_pulls;
  std::vector<double> index;
  const auto sync = [&](std::size_t pos) {
    const ArmState& a = arms[active[pos]];
    active_pulls[pos] = static_cast<double>(a.pulls);
    active_mean[pos] = static_cast<double>(a.reward_sum) / active_pulls[pos];
    if constexpr (!Policy::kIndexDependsOnRound) {
      index[pos] = policy.sampling_index(active_mean[pos], active_pulls[pos], 0.0);
    }
  };

  for (std::size_t i = 0; i < k && !out.truncated; ++i) {
    for (std::uint64_t n = 0; n < init_pulls; ++n) {
      if (t >= budget) {
        out.truncated = true;
        break;
      }
      pull(i);
    }
    if (out.truncated || !try_label(i)) active.push_back(i);
  }
  active_mean.resize(active.size());
  active_pulls.resize(active.size());
  index.resize(active.size());
  if (!out.truncated) {
    for (std::size_t pos = 0; pos < active.size(); ++pos) sync(pos);
  }

  while (!out.truncated && !active.empty()) {
    if (t >= budget) {
      out.truncated = true;
      break;
    }
    const std::size_t n_active = active.size();
    if constexpr (Policy::kIndexDependsOnRound) {
      const double log_round = std::log(static_cast<double>(t));
      const double* mean = active_mean.data();
      const double* pulls = active_pulls.data();
      double* idx = index.data();
      for (std::size_t pos = 0; pos < n_active; ++pos) {
        idx[pos] = policy.sampling_index(mean[pos], pulls[pos], log_round);
      }
    }
    std::size_t best_pos = 0;
    for (std::size_t pos = 1; pos < n_active; ++pos) {
      if (index[pos] > index[best_pos]) best_pos = pos;
    }

    const std::size_t h = active[best_pos];
    pull(h);
    if (try_label(h)) {
      const auto offset = static_cast<std::ptrdiff_t>(best_pos);
      active.erase(active.begin() + offset);
      active_mean.erase(active_mean.begin() + offset);
      active_pulls.erase(active_pulls.begin() + offset);
      index.erase(index.begin() + offset);
    } else {
      sync(best_pos);
    }
  }

  if (!out.truncated) out.tau_stop = t;
  out.total_pulls = t;
  out.pulls_per_arm.reserve(k);
  for (const auto& a : arms) out.pulls_per_arm.push_back(a.pulls);
  out.misclassified = score_outcome(out, instance);
  return out;
}

/// Validates `config` and dispatches to the configured policy.
template <RewardOracle Env>
RunOutcome run_gai(const BanditInstance& instance, const AlgoConfig& config, Env& env) {
  config.validate(instance.arm_count());
  const auto k = static_cast<std::uint64_t>(instance.arm_count());
  switch (config.algorithm) {
    case Algorithm::LilHDoC:
      return run_gai(instance, LilHDoCPolicy(k, config.delta), env, config.max_total_pulls);
    case Algorithm::HDoC:
      return run_gai(instance, HDoCPolicy(k, config.delta), env, config.max_total_pulls);
    case Algorithm::LUCBG:
      return run_gai(instance, LUCBGPolicy(k, config.delta), env, config.max_total_pulls);
  }
  throw config_error("unknown algorithm");
}

/// Identification radius the configured policy would use after `pulls` samples.
inline double policy_id_radius(const AlgoConfig& config, std::uint64_t arms,
                               std::uint64_t pulls) {
  if (config.algorithm == Algorithm::LilHDoC) {
    return LilHDoCPolicy(arms, config.delta).id_radius(pulls);
  }
  return hdoc_id_radius(pulls, arms, config.delta);
}

}  // namespace lilhdoc
