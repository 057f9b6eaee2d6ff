#include "moelab/cli.hpp"

#include "moelab/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace moelab {

namespace {

using nlohmann::json;

void emit(const json& document, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << document.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output path " + out_path);
    out << document.dump(2) << "\n";
  }
}

Matrix named_unitary(const std::string& kind, int dim_a, int dim_b, SeedSpec seed) {
  const int global = dim_a * dim_b;
  if (kind == "haar") return haar_unitary(global, seed.substream(1));
  if (kind == "identity") return Matrix::Identity(global, global);
  if (kind == "swap") {
    if (dim_a != dim_b) {
      throw CLI::ValidationError("--unitary swap requires --dim-a == --dim-b");
    }
    return swap_operator(dim_a);
  }
  throw CLI::ValidationError("unknown --unitary kind: " + kind);
}

struct CommonFlags {
  int dim_a = 2;
  int dim_b = 2;
  std::uint64_t seed = 1;
  long trials = 10000;
  int samples = 100;
  int starts = 50;
  int threads = 1;
  std::string out_path;
  std::string csv_path;
};

}  // namespace

int run_cli(const std::vector<std::string>& arguments) {
  CLI::App app{"moelab: random Stinespring channels, minimum output entropy, and "
               "concentration-of-measure experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string suite;
  std::string unitary_kind = "haar";
  bool with_oracle = false;
  double c_param = kHastingsC0;
  double a_param = 15.0;
  int tube_n = 0;
  double epsilon = 0.5;
  double alpha = 0.3;

  auto add_common = [&](CLI::App* cmd, bool dims = true) {
    if (dims) {
      cmd->add_option("--dim-a", flags.dim_a, "input/environment dimension |A|");
      cmd->add_option("--dim-b", flags.dim_b, "output dimension |B|");
    }
    cmd->add_option("--seed", flags.seed, "64-bit master seed");
    cmd->add_option("--threads", flags.threads, "worker threads (never changes numbers)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", flags.out_path, "write the JSON report here (default stdout)");
    cmd->add_option("--csv", flags.csv_path, "write the per-trial CSV log here");
  };

  CLI::App* minent = app.add_subcommand("minent", "estimate the minimum output entropy");
  add_common(minent);
  minent->add_option("--starts", flags.starts, "optimizer starts");
  minent->add_option("--unitary", unitary_kind, "haar | identity | swap");
  minent->add_flag("--oracle", with_oracle, "cross-check against the sampling oracle");

  CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
  add_common(verify);
  verify
      ->add_option("--suite", suite,
                   "geometric | median | prop5 | hhl | levy | fg | independence | "
                   "hayden | bounds")
      ->required();
  verify->add_option("--trials", flags.trials, "Monte Carlo trials");
  verify->add_option("--samples", flags.samples, "unitary samples (hayden suite)");
  verify->add_option("--a-param", a_param, "operator-norm cap multiplier a");
  verify->add_option("--epsilon", epsilon, "tail offset for prop5/hhl");
  verify->add_option("--alpha", alpha, "tail offset for levy");

  CLI::App* pipeline = app.add_subcommand("pipeline", "per-unitary additivity-gap survey");
  add_common(pipeline);
  pipeline->add_option("--samples", flags.samples, "number of unitaries");
  pipeline->add_option("--trials", flags.trials, "witness-frequency inputs per unitary");
  pipeline->add_option("--starts", flags.starts, "optimizer starts per channel");
  pipeline->add_option("--c", c_param, "entropy-deviation scale c");
  pipeline->add_option("--a-param", a_param, "operator-norm cap multiplier a");
  pipeline->add_option("--tube-n", tube_n, "tube width parameter N (default |A|)");
  pipeline->add_option("--unitary", unitary_kind, "haar | identity | swap");

  std::vector<std::string> argv_copy(arguments);
  try {
    std::vector<const char*> argv;
    argv.push_back("moelab");
    for (const auto& a : argv_copy) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  RunManifest manifest;
  manifest.arguments = arguments;
  manifest.seed = SeedSpec{flags.seed, 0};
  manifest.started_at = utc_timestamp();
  if (!flags.out_path.empty()) manifest.output_paths.push_back(flags.out_path);
  if (!flags.csv_path.empty()) manifest.output_paths.push_back(flags.csv_path);

  RunOptions run_options;
  run_options.threads = flags.threads;
  if (!flags.csv_path.empty()) run_options.csv_path = flags.csv_path;

  try {
    const SeedSpec seed{flags.seed, 0};
    json document;

    if (minent->parsed()) {
      manifest.command = "minent";
      const Matrix u = named_unitary(unitary_kind, flags.dim_a, flags.dim_b, seed);
      const StinespringChannel channel =
          StinespringChannel::make(u, flags.dim_a, flags.dim_b);
      const MinEntResult result =
          min_output_entropy(channel, flags.starts, seed.substream(2));
      document["kind"] = "minent";
      document["result"] = to_json(result);
      document["result"]["dim_a"] = flags.dim_a;
      document["result"]["dim_b"] = flags.dim_b;
      document["result"]["unitary_kind"] = unitary_kind;
      if (with_oracle) {
        const double oracle =
            brute_force_min_entropy(channel, 10000, seed.substream(3));
        document["result"]["oracle_value"] = oracle;
        document["result"]["oracle_gap"] = result.value - oracle;
      }
    } else if (verify->parsed()) {
      manifest.command = "verify";
      ExperimentReport report;
      if (suite == "geometric") {
        report = verify_geometric(flags.dim_a, flags.trials, seed, run_options);
      } else if (suite == "median") {
        report = verify_median_lemma(flags.dim_a, flags.dim_b, flags.trials, seed,
                                     run_options);
      } else if (suite == "prop5") {
        report = verify_prop5(flags.dim_a, flags.dim_b, a_param, epsilon, flags.trials,
                              seed, run_options);
      } else if (suite == "hhl") {
        report = verify_hhl(flags.dim_a, flags.dim_b, epsilon, flags.trials, seed,
                            run_options);
      } else if (suite == "levy") {
        report = verify_levy(flags.dim_a, alpha, flags.trials, seed, run_options);
      } else if (suite == "fg") {
        report = verify_fg(flags.dim_a, flags.dim_b, flags.trials, seed, run_options);
      } else if (suite == "independence") {
        report = verify_independence(flags.dim_a, flags.trials, seed, run_options);
      } else if (suite == "hayden") {
        report = verify_hayden(flags.dim_a, flags.dim_b, flags.samples, seed, run_options);
      } else if (suite == "bounds") {
        report = verify_bounds(flags.trials, seed, run_options);
      } else {
        std::cerr << "unknown suite: " << suite << "\n";
        return 2;
      }
      document["kind"] = "experiment_report";
      document["report"] = to_json(report);
      manifest.command = "verify/" + suite;
      manifest.finished_at = utc_timestamp();
      document["manifest"] = to_json(manifest);
      emit(document, flags.out_path);
      return report.all_passed ? 0 : 1;
    } else if (pipeline->parsed()) {
      manifest.command = "pipeline";
      PipelineConfig config;
      config.dim_a = flags.dim_a;
      config.dim_b = flags.dim_b;
      config.unitary_samples = flags.samples;
      config.starts = flags.starts;
      config.witness_trials = flags.trials;
      config.c = c_param;
      config.a = a_param;
      config.tube_n = tube_n;
      config.seed = seed;
      config.unitary_kind = unitary_kind;
      const PipelineResult result = counterexample_pipeline(config, run_options);
      document["kind"] = "pipeline";
      document["summary"] = to_json(result);
      document["summary"].erase("rows");
      json rows = json::array();
      for (const auto& row : result.rows) rows.push_back(to_json(row));
      document["rows"] = rows;
      manifest.finished_at = utc_timestamp();
      document["manifest"] = to_json(manifest);
      emit(document, flags.out_path);
      return result.all_passed ? 0 : 1;
    }

    manifest.finished_at = utc_timestamp();
    document["manifest"] = to_json(manifest);
    emit(document, flags.out_path);
    return 0;
  } catch (const GuardError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> arguments;
  for (int i = 1; i < argc; ++i) arguments.emplace_back(argv[i]);
  return run_cli(arguments);
}

}  // namespace moelab
