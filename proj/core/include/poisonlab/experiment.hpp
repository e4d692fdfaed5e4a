#pragma once

#include <string>
#include <vector>

#include "poisonlab/config.hpp"
#include "poisonlab/harness.hpp"

namespace poisonlab {

/// Outcome of one seed's paired baseline/attack runs.
struct SeedOutcome {
  std::uint64_t seed = 0;
  double baseline_return = 0.0;  // final-window mean benign return, unpoisoned run
  double attack_return = 0.0;    // same for the attacked run
  double final_asr = 0.0;
  double brr = 0.0;
  double poison_rate = 0.0;
};

struct ExperimentResult {
  std::string run_id;
  std::vector<SeedOutcome> per_seed;
  double final_asr_mean = 0.0, final_asr_std = 0.0;
  double brr_mean = 0.0, brr_std = 0.0;
  double poison_rate_mean = 0.0;
  std::vector<std::string> files_written;
};

/// Runs an unpoisoned baseline and the configured attack for every seed
/// (paired: both consume the same seed for environment dynamics), writes
/// one per-episode CSV per run plus a summary CSV, and returns the
/// aggregate. Seeds fan out across threads; outputs are byte-identical
/// across reruns of the same config.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Mean benign return over the final tenth of a run's episodes (at least
/// one episode); the quantity the benign-return ratio compares.
double final_window_mean_return(const RunLog& log);
double final_window_return_std(const RunLog& log);

}  // namespace poisonlab
