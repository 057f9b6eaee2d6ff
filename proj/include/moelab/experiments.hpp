#pragma once

#include "moelab/channel.hpp"
#include "moelab/entropy.hpp"
#include "moelab/geometry.hpp"
#include "moelab/rng.hpp"

#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace moelab {

struct ExperimentConfig {
  int dim_a = 2;
  int dim_b = 2;
  long trials = 1000;
  SeedSpec seed;
  SetParams params;
  double confidence_level = 0.95;
};

/// One named verification inside a suite. `relation` says how `value` was
/// compared against `reference` ("<=", ">=", "ci_contains", "within_4se",
/// "report"). `vacuous` marks probability bounds that evaluate >= 1.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  std::string relation;
  bool satisfied = true;
  bool vacuous = false;
  std::string note;
};

struct ExperimentReport {
  std::string suite;
  ExperimentConfig config;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double analytic_bound = 0.0;
  bool bound_satisfied = true;
  bool all_passed = true;  // conjunction of asserted checks
  std::vector<CheckResult> checks;
  double runtime_seconds = 0.0;
  std::optional<std::string> csv_path;
  std::vector<std::string> notes;
};

struct RunOptions {
  int threads = 1;
  std::optional<std::string> csv_path;
};

/// Deterministic parallel map over trial indices. Trial i draws only from
/// seed.substream(i), and results are collected by index, so the output is
/// independent of the thread count and of scheduling.
template <typename Row>
std::vector<Row> run_trials(long trials, SeedSpec seed, int threads,
                            const std::function<Row(std::uint64_t, RandomStream&)>& body) {
  if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  const int workers = static_cast<int>(std::max<long>(1, std::min<long>(threads, trials)));
  std::vector<Row> rows(static_cast<std::size_t>(trials));
  std::exception_ptr error;
  long error_index = -1;
  std::mutex error_mutex;
  auto work = [&](int w) {
    for (long i = w; i < trials; i += workers) {
      try {
        RandomStream rng(seed.substream(static_cast<std::uint64_t>(i)));
        rows[static_cast<std::size_t>(i)] = body(static_cast<std::uint64_t>(i), rng);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error_index < 0 || i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const GuardError&) {
      throw;  // keep the resource-guard type for exit-code mapping
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(error_index) +
                               " failed: " + e.what());
    }
  }
  return rows;
}

/// Generic probability estimator: empirical frequency of `event` over
/// independent per-trial streams, with a Wilson interval.
ExperimentReport estimate_probability(
    const ExperimentConfig& config,
    const std::function<bool(std::uint64_t, RandomStream&)>& event,
    const RunOptions& options = {});

/// Polar-cap overlap probability Pr(|<psi|chi>|^2 >= 1/2) against the exact
/// value 2^{-(|A|-1)} and the closed-form lower bound 2^{-|A|}/(8|A|).
ExperimentReport verify_geometric(int dim_a, long trials, SeedSpec seed,
                                  const RunOptions& options = {});

/// Median and second moment of g(psi) = ||psi^B - I/|B|||_2 over Haar
/// bipartite states: median <= 2/sqrt(|A|), E g^2 equals the two-copy
/// formula (|A|+|B|)/(|A||B|+1) - 1/|B| within 4 standard errors.
ExperimentReport verify_median_lemma(int dim_a, int dim_b, long trials, SeedSpec seed,
                                     const RunOptions& options = {});

/// One-sided tail check Pr(g >= eps and psi^B in Y_{|B|,a}) against
/// 4 exp(-|A||B|^2 (eps - 2/sqrt|A|)^2 / (64a)).
ExperimentReport verify_prop5(int dim_a, int dim_b, double a, double epsilon,
                              long trials, SeedSpec seed, const RunOptions& options = {});

/// Operator-norm tail Pr(||psi^B||_inf >= (1+eps)/|B|) against both
/// closed-form tail bounds (each taken through min(1, .)).
ExperimentReport verify_hhl(int dim_a, int dim_b, double epsilon, long trials,
                            SeedSpec seed, const RunOptions& options = {});

/// Concentration tail for f(phi) = |<theta|phi>| (Lipschitz constant 1):
/// Pr(f >= 1/sqrt(dim) + alpha) <= 4 exp(-dim alpha^2 / 16), cross-checked
/// against the exact overlap law (1-t)^{dim-1}.
ExperimentReport verify_levy(int dim, double alpha, long trials, SeedSpec seed,
                             const RunOptions& options = {});

/// Joint frequencies of the off-diagonal-output event F and the
/// near-maximally-mixed-output event G over Haar (U, psi, phi) draws.
ExperimentReport verify_fg(int dim_a, int dim_b, long trials, SeedSpec seed,
                           const RunOptions& options = {});

/// Independence of the overlap x and the orthogonal component phi in the
/// decomposition chi = sqrt(x) psi + sqrt(1-x) phi of a Haar chi.
ExperimentReport verify_independence(int dim_a, long trials, SeedSpec seed,
                                     const RunOptions& options = {});

/// hayden_check over `samples` Haar unitaries: overlap and entropy-bound
/// violation counts for both the simplified and the majorization bound.
ExperimentReport verify_hayden(int dim_a, int dim_b, int samples, SeedSpec seed,
                               const RunOptions& options = {});

/// Entropy / norm inequality sweep over Hilbert-Schmidt random densities at
/// D in {2,3,4,8}: the bit-valued two-norm gap comparison (reported exactly
/// as defined; it has genuine violating states at D=3,4), its nat-valued
/// form (universal), and the s / r envelope bounds.
ExperimentReport verify_bounds(long trials_per_dim, SeedSpec seed,
                               const RunOptions& options = {},
                               const std::vector<int>& dims = {2, 3, 4, 8});

struct PipelineConfig {
  int dim_a = 4;
  int dim_b = 2;
  int unitary_samples = 10;
  int starts = 50;
  int product_starts = 8;
  long witness_trials = 200;
  double c = kHastingsC0;
  double a = 15.0;
  int tube_n = 0;  // 0 -> dim_a
  SeedSpec seed;
  std::string unitary_kind = "haar";  // haar | identity | swap
};

struct PipelineRow {
  int unitary_index = 0;
  double s_min_e = 0.0;
  double s_min_ebar = 0.0;
  int converged_e = 0;
  int converged_ebar = 0;
  double hayden_entropy = 0.0;
  double hayden_bound = 0.0;
  double hayden_exact_bound = 0.0;
  double hayden_overlap = 0.0;
  double product_opt = 0.0;    // optimizer value for E (x) E-bar
  double product_upper = 0.0;  // min(product_opt, hayden_entropy)
  double additivity_gap = 0.0; // s_min_e + s_min_ebar - product_upper
  double delta_s_min = 0.0;    // log2|B| - s_min_e
  bool lemma2_event = false;   // delta_s_min >= c/|B|
  double freq_in_y = 0.0;
  double freq_in_x = 0.0;
  double freq_in_xy = 0.0;
  bool bound_ok = false;        // product_upper <= simplified closed form + 1e-8
  bool exact_bound_ok = false;  // product_upper <= s(1/|B|, |B|^2) + 1e-8
  bool subadditive_ok = false;  // product_upper <= s_min_e + s_min_ebar + 2e-3
};

struct PipelineResult {
  PipelineConfig config;
  std::vector<PipelineRow> rows;
  double gap_min = 0.0;
  double gap_max = 0.0;
  double gap_mean = 0.0;
  int lemma2_event_count = 0;
  int bound_violations = 0;
  int exact_bound_violations = 0;
  int subadditivity_violations = 0;
  bool all_passed = true;
  double runtime_seconds = 0.0;
  std::optional<std::string> csv_path;
  std::vector<std::string> notes;
};

/// Per-unitary minimum-output-entropy and tube/geometry statistics for the
/// additivity-gap experiment. No violation is expected at desk dimensions.
PipelineResult counterexample_pipeline(const PipelineConfig& config,
                                       const RunOptions& options = {});

}  // namespace moelab
