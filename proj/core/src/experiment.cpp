#include "poisonlab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "poisonlab/metrics.hpp"

namespace poisonlab {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

struct WindowStats {
  double mean = 0.0;
  double stddev = 0.0;
};

WindowStats final_window_stats(const RunLog& log) {
  const std::size_t n = log.episodes.size();
  if (n == 0) throw std::invalid_argument("final window: empty run log");
  const std::size_t window = std::max<std::size_t>(1, n / 10);
  double sum = 0.0;
  for (std::size_t i = n - window; i < n; ++i) sum += log.episodes[i].benign_return;
  const double mean = sum / static_cast<double>(window);
  double var = 0.0;
  for (std::size_t i = n - window; i < n; ++i) {
    const double d = log.episodes[i].benign_return - mean;
    var += d * d;
  }
  const double stddev = window > 1 ? std::sqrt(var / static_cast<double>(window - 1)) : 0.0;
  return {mean, stddev};
}

void write_episode_csv(const std::string& path, const std::string& run_id,
                       std::uint64_t seed, const RunLog& log) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "run_id,seed,episode,return,poisoned_steps,cumulative_poison_rate,asr\n";
  for (const auto& rec : log.episodes) {
    out << run_id << ',' << seed << ',' << rec.episode << ',' << fmt(rec.benign_return)
        << ',' << rec.poisoned_steps << ',' << fmt(rec.cumulative_poison_rate) << ','
        << fmt(rec.latest_asr) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

struct PairedRuns {
  TrainResult baseline;
  TrainResult attack;
};

PairedRuns run_seed(const ExperimentConfig& config, const EnvDescriptor& env,
                    std::uint64_t seed) {
  AttackSpec none = config.attack;
  none.mode = AttackMode::none;
  PairedRuns out;
  out.baseline = run_training(env, config.learner, none, config.episodes, config.horizon,
                              config.eval_interval, config.eval_episodes, seed);
  out.attack = run_training(env, config.learner, config.attack, config.episodes,
                            config.horizon, config.eval_interval, config.eval_episodes,
                            seed);
  return out;
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size() - 1));
}

}  // namespace

double final_window_mean_return(const RunLog& log) { return final_window_stats(log).mean; }
double final_window_return_std(const RunLog& log) { return final_window_stats(log).stddev; }

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const EnvDescriptor env = build_env(config);
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);

  std::vector<std::future<PairedRuns>> futures;
  futures.reserve(config.seeds.size());
  for (const std::uint64_t seed : config.seeds)
    futures.push_back(std::async(std::launch::async,
                                 [&config, &env, seed] { return run_seed(config, env, seed); }));

  ExperimentResult result;
  result.run_id = config.run_id;

  std::vector<double> asrs, brrs, rates;
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    const std::uint64_t seed = config.seeds[i];
    PairedRuns runs = futures[i].get();

    SeedOutcome outcome;
    outcome.seed = seed;
    const WindowStats base = final_window_stats(runs.baseline.log);
    const WindowStats att = final_window_stats(runs.attack.log);
    outcome.baseline_return = base.mean;
    outcome.attack_return = att.mean;
    outcome.final_asr = runs.attack.log.episodes.back().latest_asr;
    outcome.brr = benign_return_ratio(att.mean, base.mean, base.stddev);
    outcome.poison_rate = empirical_poison_rate(runs.attack.log);

    const std::string base_path =
        (fs::path(config.output_dir) /
         (config.run_id + "_baseline_seed" + std::to_string(seed) + ".csv")).string();
    const std::string attack_path =
        (fs::path(config.output_dir) /
         (config.run_id + "_attack_seed" + std::to_string(seed) + ".csv")).string();
    write_episode_csv(base_path, config.run_id + "_baseline", seed, runs.baseline.log);
    write_episode_csv(attack_path, config.run_id + "_attack", seed, runs.attack.log);
    result.files_written.push_back(base_path);
    result.files_written.push_back(attack_path);

    asrs.push_back(outcome.final_asr);
    brrs.push_back(outcome.brr);
    rates.push_back(outcome.poison_rate);
    result.per_seed.push_back(outcome);
  }

  auto mean_of = [](const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
  };
  result.final_asr_mean = mean_of(asrs);
  result.final_asr_std = sample_std(asrs, result.final_asr_mean);
  result.brr_mean = mean_of(brrs);
  result.brr_std = sample_std(brrs, result.brr_mean);
  result.poison_rate_mean = mean_of(rates);

  std::ostringstream seed_list;
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    if (i) seed_list << ';';
    seed_list << config.seeds[i];
  }

  const std::string summary_path =
      (fs::path(config.output_dir) / (config.run_id + "_summary.csv")).string();
  std::ofstream out(summary_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + summary_path);
  out << "run_id,seeds,mode,beta,alpha,c,final_asr_mean,final_asr_std,brr_mean,brr_std,"
         "poison_rate_mean\n";
  out << config.run_id << ',' << seed_list.str() << ',' << to_string(config.attack.mode)
      << ',' << fmt(config.attack.beta) << ',' << fmt(config.attack.alpha) << ','
      << fmt(config.attack.c) << ',' << fmt(result.final_asr_mean) << ','
      << fmt(result.final_asr_std) << ',' << fmt(result.brr_mean) << ','
      << fmt(result.brr_std) << ',' << fmt(result.poison_rate_mean) << '\n';
  if (!out) throw std::runtime_error("write failed for " + summary_path);
  result.files_written.push_back(summary_path);

  return result;
}

}  // namespace poisonlab
