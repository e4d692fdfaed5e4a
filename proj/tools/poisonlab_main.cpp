#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poisonlab/experiment.hpp"
#include "poisonlab/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;
constexpr int kExitVerificationFailure = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw poisonlab::ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

poisonlab::ExperimentConfig load_config(const std::string& path) {
  auto config = poisonlab::parse_config(read_file(path));
  // Environment variable supplies the output directory when the config
  // leaves it at the default.
  if (config.output_dir == ".") {
    if (const char* dir = std::getenv("POISONLAB_OUTPUT_DIR")) config.output_dir = dir;
  }
  return config;
}

void print_summary(const poisonlab::ExperimentResult& result) {
  std::printf("run %s: %zu seed(s)\n", result.run_id.c_str(), result.per_seed.size());
  for (const auto& s : result.per_seed) {
    std::printf("  seed %llu: final ASR %.4f, BRR %.4f, poison rate %.6f\n",
                static_cast<unsigned long long>(s.seed), s.final_asr, s.brr,
                s.poison_rate);
  }
  std::printf("  ASR %.4f +/- %.4f | BRR %.4f +/- %.4f | poison rate %.6f\n",
              result.final_asr_mean, result.final_asr_std, result.brr_mean,
              result.brr_std, result.poison_rate_mean);
  for (const auto& f : result.files_written) std::printf("  wrote %s\n", f.c_str());
}

int print_checks(const std::vector<poisonlab::CheckResult>& checks) {
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  bool all_pass = true;
  for (const auto& c : checks) {
    std::printf("%-*s  residual %-12.3g threshold %-9.3g %s\n", static_cast<int>(width),
                c.name.c_str(), c.residual, c.threshold, c.pass ? "PASS" : "FAIL");
    if (!c.detail.empty()) std::printf("%-*s    (%s)\n", static_cast<int>(width), "",
                                       c.detail.c_str());
    all_pass = all_pass && c.pass;
  }
  std::printf("%s\n", all_pass ? "all checks passed" : "SOME CHECKS FAILED");
  return all_pass ? kExitOk : kExitVerificationFailure;
}

std::vector<std::string> split_csv(const std::string& values) {
  std::vector<std::string> out;
  std::stringstream ss(values);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tabular reward-poisoning laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run a configured experiment");
  run_cmd->add_option("config", config_path, "experiment config file")->required();

  std::string suite_name = "all";
  auto* verify_cmd = app.add_subcommand(
      "verify", "run a numerical verification suite (lemmas|theorems|counterexamples|all)");
  verify_cmd->add_option("suite", suite_name, "suite name")->required();

  std::string ablate_config, ablate_param, ablate_values;
  auto* ablate_cmd = app.add_subcommand("ablate", "re-run an experiment over a parameter grid");
  ablate_cmd->add_option("config", ablate_config, "experiment config file")->required();
  ablate_cmd->add_option("--param", ablate_param, "config key to sweep, e.g. attack.beta")
      ->required();
  ablate_cmd->add_option("--values", ablate_values, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const auto config = load_config(config_path);
      const auto result = poisonlab::run_experiment(config);
      print_summary(result);
      return kExitOk;
    }
    if (*verify_cmd) {
      const auto suite = poisonlab::verify_suite_from_string(suite_name);
      return print_checks(poisonlab::run_verification(suite));
    }
    if (*ablate_cmd) {
      const auto values = split_csv(ablate_values);
      if (values.empty()) throw poisonlab::ConfigError("--values: empty list");
      for (const auto& value : values) {
        auto config = load_config(ablate_config);
        poisonlab::apply_config_override(config, ablate_param, value);
        std::string tag = ablate_param;
        for (char& ch : tag)
          if (ch == '.') ch = '-';
        config.run_id += "_" + tag + "_" + value;
        const auto result = poisonlab::run_experiment(config);
        print_summary(result);
      }
      return kExitOk;
    }
  } catch (const poisonlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntimeError;
  }
  return kExitOk;
}
