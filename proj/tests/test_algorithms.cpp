#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "lilhdoc/algorithms.hpp"

using namespace lilhdoc;

namespace {

/// Arm i's n-th reward is floor(n mu_i) - floor((n - 1) mu_i): deterministic,
/// with every prefix mean within 1/n of mu_i.
class LowDiscrepancyEnv {
 public:
  explicit LowDiscrepancyEnv(std::vector<double> means)
      : means_(std::move(means)), counts_(means_.size(), 0) {}

  int pull(std::size_t arm) {
    const double n = static_cast<double>(++counts_.at(arm));
    return static_cast<int>(std::floor(n * means_[arm]) - std::floor((n - 1.0) * means_[arm]));
  }

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (auto c : counts_) s += c;
    return s;
  }

 private:
  std::vector<double> means_;
  std::vector<std::uint64_t> counts_;
};

enum class Kind { Lil, Hdoc, Lucbg };

/// Straight-line restatement of the loop: recomputes every index from the
/// arm statistics each round, scans all arms, no caching.
template <typename Env>
RunOutcome reference_run(const BanditInstance& inst, Kind kind, double delta, Env& env,
                         std::uint64_t budget) {
  const std::size_t k = inst.arm_count();
  const double xi = inst.threshold();
  std::optional<LilParams> lil;
  if (kind == Kind::Lil) lil = lil_params(k, delta);
  const std::uint64_t init = lil ? lil->init_pulls : 1;
  const auto radius = [&](std::uint64_t n) {
    return lil ? lil_radius(n, lil->omega, lil->epsilon) : hdoc_id_radius(n, k, delta);
  };

  std::vector<std::uint64_t> pulls(k, 0), sums(k, 0);
  std::vector<bool> done(k, false);
  RunOutcome out;
  std::uint64_t t = 0;
  const auto pull = [&](std::size_t i) {
    sums[i] += static_cast<std::uint64_t>(env.pull(i));
    ++pulls[i];
    ++t;
  };
  const auto check = [&](std::size_t i) {
    const double mean = static_cast<double>(sums[i]) / static_cast<double>(pulls[i]);
    const double r = radius(pulls[i]);
    if (!std::isfinite(r)) return;
    if (mean - r >= xi) {
      out.events.push_back({i, Label::Good, t, pulls[i], sums[i]});
      out.tau_lambda.push_back(t);
      done[i] = true;
    } else if (mean + r <= xi) {
      out.events.push_back({i, Label::Bad, t, pulls[i], sums[i]});
      done[i] = true;
    }
  };

  for (std::size_t i = 0; i < k; ++i) {
    for (std::uint64_t j = 0; j < init; ++j) {
      if (t >= budget) {
        out.truncated = true;
        break;
      }
      pull(i);
    }
    if (out.truncated) break;
    check(i);
  }
  while (!out.truncated) {
    std::size_t best = k;
    double best_index = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      if (done[i]) continue;
      const double n = static_cast<double>(pulls[i]);
      const double mean = static_cast<double>(sums[i]) / n;
      const double bonus = kind == Kind::Lucbg ? hdoc_id_radius(pulls[i], k, delta)
                                               : std::sqrt(std::log(static_cast<double>(t)) / (2.0 * n));
      if (best == k || mean + bonus > best_index) {
        best = i;
        best_index = mean + bonus;
      }
    }
    if (best == k) break;
    if (t >= budget) {
      out.truncated = true;
      break;
    }
    pull(best);
    check(best);
  }
  if (!out.truncated) out.tau_stop = t;
  out.total_pulls = t;
  out.pulls_per_arm = pulls;
  out.misclassified = score_outcome(out, inst);
  return out;
}

template <typename Env>
RunOutcome library_run(const BanditInstance& inst, Kind kind, double delta, Env& env,
                       std::uint64_t budget) {
  const auto k = static_cast<std::uint64_t>(inst.arm_count());
  switch (kind) {
    case Kind::Lil: return run_gai(inst, LilHDoCPolicy(k, delta), env, budget);
    case Kind::Hdoc: return run_gai(inst, HDoCPolicy(k, delta), env, budget);
    case Kind::Lucbg: return run_gai(inst, LUCBGPolicy(k, delta), env, budget);
  }
  return {};
}

void check_invariants(const RunOutcome& o, const BanditInstance& inst) {
  std::set<std::size_t> seen;
  for (const auto& e : o.events) ASSERT_TRUE(seen.insert(e.arm).second) << "arm repeated";
  if (!o.truncated) {
    ASSERT_EQ(seen.size(), inst.arm_count());
    ASSERT_TRUE(o.tau_stop.has_value());
    if (!o.tau_lambda.empty()) ASSERT_LE(o.tau_lambda.back(), *o.tau_stop);
  }
  for (std::size_t i = 1; i < o.tau_lambda.size(); ++i) {
    ASSERT_LE(o.tau_lambda[i - 1], o.tau_lambda[i]);
  }
  std::uint64_t total = 0;
  for (auto p : o.pulls_per_arm) total += p;
  ASSERT_EQ(total, o.total_pulls);
}

}  // namespace

TEST(IdentifyCheck, Examples) {
  EXPECT_EQ(identify_check(0.9, 0.2, 0.5), IdentifyResult::Good);
  EXPECT_EQ(identify_check(0.1, 0.2, 0.5), IdentifyResult::Bad);
  EXPECT_EQ(identify_check(0.5, 0.2, 0.5), IdentifyResult::Undecided);
  EXPECT_EQ(identify_check(1.0, kInfinity, 0.5), IdentifyResult::Undecided);
  EXPECT_EQ(identify_check(0.75, 0.25, 0.5), IdentifyResult::Good);   // boundary: >= xi
  EXPECT_EQ(identify_check(0.25, 0.25, 0.5), IdentifyResult::Bad);  // boundary: <= xi
}

TEST(IdentifyCheck, GoodAndBadExclusiveForPositiveRadius) {
  Xoshiro256StarStar rng(4);
  for (int i = 0; i < 100000; ++i) {
    const double mean = rng.next_unit();
    const double radius = 1e-9 + rng.next_unit();
    const double xi = 0.01 + 0.98 * rng.next_unit();
    const auto v = identify_check(mean, radius, xi);
    const bool good = mean - radius >= xi;
    const bool bad = mean + radius <= xi;
    ASSERT_FALSE(good && bad);
    ASSERT_EQ(v, good ? IdentifyResult::Good : bad ? IdentifyResult::Bad : IdentifyResult::Undecided);
  }
}

TEST(RunGai, DeterministicTwoArmReferenceTrace) {
  const BanditInstance inst({1.0, 0.0}, 0.5);
  LowDiscrepancyEnv env({1.0, 0.0});
  const RunOutcome o = run_gai(inst, LilHDoCPolicy(2, 0.1), env, kDefaultBudget);
  ASSERT_TRUE(o.tau_stop.has_value());
  EXPECT_EQ(*o.tau_stop, 5240u);  // both arms labeled right after their 2620 init pulls
  ASSERT_EQ(o.events.size(), 2u);
  EXPECT_EQ(o.events[0], (IdentificationEvent{0, Label::Good, 2620, 2620, 2620}));
  EXPECT_EQ(o.events[1], (IdentificationEvent{1, Label::Bad, 5240, 2620, 0}));
  EXPECT_FALSE(o.misclassified);

  LowDiscrepancyEnv env2({1.0, 0.0});
  EXPECT_EQ(o, reference_run(inst, Kind::Lil, 0.1, env2, kDefaultBudget));
}

class ReferenceTrace : public ::testing::TestWithParam<Kind> {};

TEST_P(ReferenceTrace, MatchesStraightLineLoopOnDeterministicRewards) {
  const std::vector<std::vector<double>> cases{
      {0.62, 0.55, 0.45, 0.3},
      {0.9, 0.8, 0.2, 0.1},
      {0.53, 0.47},
      {0.7, 0.58, 0.56, 0.44, 0.41, 0.2, 0.05},
      {0.45, 0.44, 0.43},
  };
  for (const auto& means : cases) {
    const BanditInstance inst(means, 0.5);
    for (double delta : {0.2, 0.05, 0.001}) {
      LowDiscrepancyEnv a(means);
      LowDiscrepancyEnv b(means);
      const RunOutcome lib = library_run(inst, GetParam(), delta, a, 50'000'000);
      const RunOutcome ref = reference_run(inst, GetParam(), delta, b, 50'000'000);
      ASSERT_EQ(lib, ref) << "means[0]=" << means[0] << " delta=" << delta;
      check_invariants(lib, inst);
      EXPECT_FALSE(lib.misclassified);
      EXPECT_FALSE(lib.truncated);
    }
  }
}

TEST_P(ReferenceTrace, MatchesStraightLineLoopOnRandomRewards) {
  Xoshiro256StarStar gen(101);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = 2 + gen.next() % 6;
    std::vector<double> means(k);
    for (auto& m : means) m = 0.05 + 0.9 * gen.next_unit();
    const double xi = 0.2 + 0.6 * gen.next_unit();
    const BanditInstance inst(means, xi);
    const double delta = 0.01 + 0.3 * gen.next_unit();
    const std::uint64_t budget = 200'000;
    BernoulliEnv a(inst, 77, static_cast<std::uint64_t>(trial));
    BernoulliEnv b(inst, 77, static_cast<std::uint64_t>(trial));
    const RunOutcome lib = library_run(inst, GetParam(), delta, a, budget);
    const RunOutcome ref = reference_run(inst, GetParam(), delta, b, budget);
    ASSERT_EQ(lib, ref) << "trial " << trial;
    check_invariants(lib, inst);
  }
}

INSTANTIATE_TEST_SUITE_P(Policies, ReferenceTrace,
                         ::testing::Values(Kind::Lil, Kind::Hdoc, Kind::Lucbg));

TEST(RunGai, BitDeterministic) {
  const BanditInstance inst({0.6, 0.55, 0.4}, 0.5);
  const AlgoConfig config{Algorithm::LilHDoC, 0.05, 3, kDefaultBudget};
  BernoulliEnv a(inst, 3, 0);
  BernoulliEnv b(inst, 3, 0);
  EXPECT_EQ(run_gai(inst, config, a), run_gai(inst, config, b));
}

TEST(RunGai, EventsReplayThroughIdentifyCheck) {
  const BanditInstance inst({0.62, 0.57, 0.52, 0.46, 0.3}, 0.5);
  for (Algorithm alg : {Algorithm::LilHDoC, Algorithm::HDoC, Algorithm::LUCBG}) {
    const AlgoConfig config{alg, 0.05, 9, kDefaultBudget};
    for (std::uint64_t run = 0; run < 5; ++run) {
      BernoulliEnv env(inst, 9, run);
      const RunOutcome o = run_gai(inst, config, env);
      check_invariants(o, inst);
      for (const auto& e : o.events) {
        const double mean = static_cast<double>(e.reward_sum) / static_cast<double>(e.pulls);
        const auto verdict = identify_check(mean, policy_id_radius(config, 5, e.pulls), 0.5);
        ASSERT_EQ(verdict, e.label == Label::Good ? IdentifyResult::Good : IdentifyResult::Bad);
      }
    }
  }
}

TEST(RunGai, LilHDoCGivesEveryArmTInitPulls) {
  const BanditInstance inst({0.95, 0.9, 0.1, 0.05}, 0.5);
  const LilParams p = lil_params(4, 0.1);
  BernoulliEnv env(inst, 1);
  const RunOutcome o = run_gai(inst, LilHDoCPolicy(p), env, kDefaultBudget);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_GE(o.pulls_per_arm[i], p.init_pulls);
    // Gaps this large are resolved by the init pulls alone.
    EXPECT_EQ(o.pulls_per_arm[i], p.init_pulls);
    EXPECT_EQ(o.events[i].arm, i);
    EXPECT_EQ(o.events[i].round, (i + 1) * p.init_pulls);
  }
}

TEST(RunGai, SingleArmHDoC) {
  const BanditInstance inst({0.9}, 0.5);
  const AlgoConfig config{Algorithm::HDoC, 0.1, 0, kDefaultBudget};
  BernoulliEnv env(inst, 0);
  const RunOutcome o = run_gai(inst, config, env);
  ASSERT_EQ(o.tau_lambda.size(), 1u);
  ASSERT_TRUE(o.tau_stop.has_value());
  EXPECT_EQ(o.tau_lambda[0], *o.tau_stop);
  EXPECT_EQ(o.events[0].label, Label::Good);
}

TEST(RunGai, BudgetTruncates) {
  const BanditInstance inst({0.5, 0.9}, 0.5);
  const AlgoConfig config{Algorithm::HDoC, 0.1, 0, 20'000};
  BernoulliEnv env(inst, 0);
  const RunOutcome o = run_gai(inst, config, env);
  EXPECT_TRUE(o.truncated);
  EXPECT_FALSE(o.tau_stop.has_value());
  EXPECT_EQ(o.total_pulls, 20'000u);
  EXPECT_EQ(env.pulls(), 20'000u);
}

TEST(RunGai, BudgetCanCutInitPhase) {
  const BanditInstance inst({0.9, 0.1}, 0.5);
  const LilParams p = lil_params(2, 0.1);
  BernoulliEnv env(inst, 0);
  const RunOutcome o = run_gai(inst, LilHDoCPolicy(p), env, p.init_pulls + 5);
  EXPECT_TRUE(o.truncated);
  EXPECT_EQ(o.total_pulls, p.init_pulls + 5);
  EXPECT_EQ(o.pulls_per_arm[1], 5u);
  EXPECT_LE(o.events.size(), 1u);
}

namespace {

struct CountingEnv {
  std::uint64_t pulls = 0;
  int pull(std::size_t) {
    ++pulls;
    return 0;
  }
};

}  // namespace

TEST(RunGai, InvalidConfigFailsBeforeAnyPull) {
  const BanditInstance one({0.9}, 0.5);
  CountingEnv env;
  EXPECT_THROW((void)run_gai(one, AlgoConfig{Algorithm::LilHDoC, 0.01, 0, kDefaultBudget}, env),
               config_error);
  const BanditInstance two({0.9, 0.1}, 0.5);
  EXPECT_THROW((void)run_gai(two, AlgoConfig{Algorithm::LilHDoC, 0.4, 0, kDefaultBudget}, env),
               config_error);
  EXPECT_EQ(env.pulls, 0u);
}

TEST(Policies, RadiusHintsAreSound) {
  // Wherever a policy claims its radius is nonincreasing from n on, check the
  // next few hundred values really do not increase.
  const LilHDoCPolicy lil(6, 0.01);
  const HDoCPolicy hdoc(6, 0.01);
  for (std::uint64_t n = 1; n < 20000; n += 7) {
    if (lil.radius_decreasing_beyond(n)) {
      for (std::uint64_t m = n; m < n + 300; ++m) ASSERT_GE(lil.id_radius(m), lil.id_radius(m + 1));
    }
    if (hdoc.radius_decreasing_beyond(n)) {
      for (std::uint64_t m = n; m < n + 300; ++m) {
        ASSERT_GE(hdoc.id_radius(m), hdoc.id_radius(m + 1));
      }
    }
  }
}

TEST(Policies, SamplingIndexFormulas) {
  const HDoCPolicy hdoc(6, 0.01);
  EXPECT_DOUBLE_EQ(hdoc.sampling_index(0.3, 4.0, std::log(100.0)),
                   0.3 + ucb_sampling_bonus(4, 100.0));
  const LUCBGPolicy lucbg(6, 0.01);
  EXPECT_DOUBLE_EQ(lucbg.sampling_index(0.3, 4.0, 123.0), 0.3 + hdoc_id_radius(4, 6, 0.01));
  const LilHDoCPolicy lil(6, 0.01);
  EXPECT_DOUBLE_EQ(lil.sampling_index(0.3, 4.0, std::log(100.0)),
                   0.3 + ucb_sampling_bonus(4, 100.0));
  EXPECT_EQ(lil.id_radius(5000), lil_radius(5000, lil.params().omega, lil.params().epsilon));
  EXPECT_EQ(lil.init_pulls(), 1673u);
}
