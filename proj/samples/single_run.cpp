// One lil'HDoC run on a small instance, printing each label as it is emitted.

#include <cstdio>

#include "lilhdoc/lilhdoc.hpp"

int main() {
  using namespace lilhdoc;

  const BanditInstance instance({0.9, 0.7, 0.45, 0.3}, 0.5, "demo");
  const LilParams params = lil_params(instance.arm_count(), 0.05);
  std::printf("epsilon=%.6g c_eps=%.6g omega=%.6g T=%llu\n", params.epsilon, params.c_eps,
              params.omega, static_cast<unsigned long long>(params.init_pulls));

  BernoulliEnv env(instance, /*seed=*/7);
  const RunOutcome outcome = run_gai(instance, LilHDoCPolicy(params), env, kDefaultBudget);

  for (const auto& e : outcome.events) {
    std::printf("t=%-8llu arm %zu -> %s (mean %.4f over %llu pulls)\n",
                static_cast<unsigned long long>(e.round), e.arm,
                std::string(to_string(e.label)).c_str(),
                static_cast<double>(e.reward_sum) / static_cast<double>(e.pulls),
                static_cast<unsigned long long>(e.pulls));
  }
  std::printf("tau_stop=%llu misclassified=%s\n",
              static_cast<unsigned long long>(outcome.tau_stop.value_or(0)),
              outcome.misclassified ? "yes" : "no");
  return 0;
}
