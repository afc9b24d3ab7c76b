// Command-line front end: run, convert, verify, params.
//
// Every flag can also be set through an environment variable named
// LILHDOC_<FLAG> (upper case, dashes as underscores), e.g. LILHDOC_DELTA.
// Flags given on the command line take precedence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lilhdoc/lilhdoc.hpp"

namespace {

using namespace lilhdoc;

std::string env_name(const std::string& flag) {
  std::string name = "LILHDOC_";
  for (char c : flag) name += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  return name;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& value, const std::string& help) {
  return app->add_option("--" + name, value, help)->envname(env_name(name));
}

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<Algorithm> out;
  for (const auto& n : names) out.push_back(parse_algorithm(n));
  return out;
}

struct RunArgs {
  std::string instance;
  std::vector<std::string> algos{"lilhdoc", "hdoc", "lucbg"};
  std::size_t runs = 10;
  double delta = 0.01;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  std::string out;
  std::size_t threads = 0;
  double scale = 1e5;
};

int do_run(const RunArgs& args) {
  ExperimentPlan plan;
  plan.instance_path = args.instance;
  plan.algorithms = parse_algorithms(args.algos);
  plan.runs = args.runs;
  plan.delta = args.delta;
  plan.seed = args.seed;
  plan.budget = args.budget;
  plan.output_dir = args.out;
  plan.threads = args.threads;
  plan.scale_divisor = args.scale;
  const ExperimentResult result = run_experiment(plan);
  std::cout << format_summary(result);
  if (!args.out.empty()) std::cout << "results written to " << args.out << "\n";
  return 0;
}

struct ConvertArgs {
  std::string input;
  std::string out;
  std::string preset;
  std::string name;
  std::string mode = "column";
  std::string delimiter = ",";
  bool skip_header = false;
  std::size_t column = 0;
  std::size_t key_column = 0;
  double divide_by = 1.0;
  std::vector<double> affine;
  std::size_t rank = 1;
};

int do_convert(const ConvertArgs& args, const CLI::App& cmd) {
  TransformSpec spec;
  if (!args.preset.empty()) {
    const auto preset = preset_by_name(args.preset);
    if (!preset) throw config_error("unknown preset '" + args.preset + "'");
    spec = *preset;
  }
  if (cmd.count("--divide-by") != 0 || args.preset.empty()) spec.divide_by = args.divide_by;
  if (cmd.count("--rank") != 0 || args.preset.empty()) spec.threshold_rank = args.rank;
  if (!args.affine.empty()) {
    spec.affine = AffineMap{args.affine[0], args.affine[1], args.affine[2], args.affine[3]};
  }

  ScoreSource source;
  const std::string delimiter = args.delimiter == "\\t" ? "\t" : args.delimiter;
  if (delimiter.size() != 1) throw config_error("delimiter must be one character");
  source.delimiter = delimiter[0];
  source.skip_header = args.skip_header;
  source.column = args.column;
  source.key_column = args.key_column;
  if (args.mode == "column") {
    source.mode = ScoreSource::Mode::Column;
  } else if (args.mode == "mean-by-key") {
    source.mode = ScoreSource::Mode::MeanByKey;
  } else if (args.mode == "class-frequency") {
    source.mode = ScoreSource::Mode::ClassFrequency;
  } else {
    throw config_error("unknown mode '" + args.mode + "'");
  }

  const auto scores = load_scores(args.input, source);
  std::cerr << "read " << scores.size() << " scores from " << args.input << "\n";
  const std::string name = args.name.empty() ? args.preset : args.name;
  const Conversion conversion = convert(scores, spec, name);
  for (const auto& w : conversion.warnings) std::cerr << "warning: " << w << "\n";
  if (args.out.empty() || args.out == "-") {
    write_instance(std::cout, conversion.instance);
  } else {
    write_instance(args.out, conversion.instance);
  }
  return 0;
}

int do_verify(const std::string& suite, const VerifyOptions& options) {
  const auto checks = verify(suite, options);
  write_report(std::cout, checks);
  const bool ok = all_passed(checks);
  std::cerr << (ok ? "all checks passed" : "some checks FAILED") << "\n";
  return ok ? 0 : 1;
}

int do_params(std::uint64_t arms, double delta) {
  const LilParams p = lil_params(arms, delta);
  std::cout << "K=" << p.arms << "\n"
            << "delta=" << format_real(p.delta) << "\n"
            << "epsilon=" << format_real(p.epsilon) << "\n"
            << "r=" << format_real(p.r) << "\n"
            << "c_eps=" << format_real(p.c_eps) << "\n"
            << "B=" << format_real(p.arm_scale) << "\n"
            << "C=" << format_real(p.confidence_scale) << "\n"
            << "omega=" << format_real(p.omega) << "\n"
            << "T=" << p.init_pulls << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Good-arm identification: lil'HDoC, HDoC and LUCB-G"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run an experiment plan on an instance file");
  flag(run, "instance", run_args.instance, "instance file")->required();
  flag(run, "algos", run_args.algos, "comma-separated algorithms")->delimiter(',');
  flag(run, "runs", run_args.runs, "independent runs per algorithm");
  flag(run, "delta", run_args.delta, "confidence parameter");
  flag(run, "seed", run_args.seed, "base seed");
  flag(run, "budget", run_args.budget, "pull cap per run");
  flag(run, "out", run_args.out, "output directory for CSV files");
  flag(run, "threads", run_args.threads, "worker threads (0 = all cores)");
  flag(run, "scale", run_args.scale, "divisor for the printed summary");

  ConvertArgs conv;
  auto* convert_cmd = app.add_subcommand("convert", "turn a score file into an instance file");
  flag(convert_cmd, "input", conv.input, "delimited score file")->required();
  flag(convert_cmd, "out", conv.out, "instance file to write (default stdout)");
  flag(convert_cmd, "preset", conv.preset, "covertype, jester or movielens");
  flag(convert_cmd, "name", conv.name, "instance name");
  flag(convert_cmd, "mode", conv.mode, "column, mean-by-key or class-frequency");
  flag(convert_cmd, "delimiter", conv.delimiter, "field delimiter (\\t for tab)");
  convert_cmd->add_flag("--skip-header", conv.skip_header, "ignore the first line")
      ->envname(env_name("skip-header"));
  flag(convert_cmd, "column", conv.column, "zero-based score column");
  flag(convert_cmd, "key-column", conv.key_column, "zero-based item key column");
  flag(convert_cmd, "divide-by", conv.divide_by, "divide every score by this");
  flag(convert_cmd, "affine", conv.affine, "range map a,b,c,d: [a,b] -> [c,d]")
      ->delimiter(',')
      ->expected(4);
  flag(convert_cmd, "rank", conv.rank, "threshold between ranks k and k+1");

  std::string suite = "all";
  VerifyOptions verify_options;
  auto* verify_cmd = app.add_subcommand("verify", "run numeric verification suites");
  flag(verify_cmd, "suite", suite, "all, solver, inversion, crossover, scaling, gap_scaling, correctness");
  flag(verify_cmd, "triples", verify_options.inversion_triples, "random triples for the inversion suite");
  flag(verify_cmd, "runs", verify_options.correctness_runs, "runs for correctness");
  flag(verify_cmd, "seed", verify_options.seed, "seed for randomized suites");
  flag(verify_cmd, "threads", verify_options.threads, "worker threads (0 = all cores)");

  std::uint64_t arms = 0;
  double delta = 0.01;
  auto* params = app.add_subcommand("params", "print lil'HDoC constants for (K, delta)");
  flag(params, "k", arms, "number of arms")->required();
  flag(params, "delta", delta, "confidence parameter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return do_run(run_args);
    if (*convert_cmd) return do_convert(conv, *convert_cmd);
    if (*verify_cmd) return do_verify(suite, verify_options);
    if (*params) return do_params(arms, delta);
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
