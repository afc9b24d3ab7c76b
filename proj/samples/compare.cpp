// Compare the three algorithms on an instance file over a few runs.
//
//   sample_compare data/easy.inst [runs]

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "lilhdoc/lilhdoc.hpp"

int main(int argc, char** argv) {
  using namespace lilhdoc;
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s INSTANCE [RUNS]\n", argv[0]);
    return 2;
  }
  ExperimentPlan plan;
  plan.instance_path = argv[1];
  plan.runs = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 5;
  plan.delta = 0.05;
  plan.scale_divisor = 1.0;
  try {
    const ExperimentResult result = run_experiment(plan);
    std::cout << format_summary(result);
    emit_plot_data(std::cout, result);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
  return 0;
}
