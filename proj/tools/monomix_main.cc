// Copyright 2026 The monomix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Command line front end: run, eval, dump-qtot, print-config.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "monomix/config.h"
#include "monomix/errors.h"
#include "monomix/experiment.h"
#include "monomix/parameters.h"
#include "monomix/random.h"
#include "monomix/report.h"
#include "monomix/runtime.h"

namespace fs = std::filesystem;
using namespace monomix;  // NOLINT

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string algo;
  std::string env;
  std::string scenario;
  std::optional<std::int64_t> steps;
  std::vector<std::string> sets;  // key=value

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "JSON experiment config");
    app->add_option("--seed", seed, "Experiment seed");
    app->add_option("--algo", algo,
                    "iql, vdn, vdn_s, qmix, qmix_lin, qmix_ns or heuristic");
    app->add_option("--env", env, "two_step or micro_combat");
    app->add_option("--scenario", scenario,
                    "Builtin micro-combat map or scenario file");
    app->add_option("--steps", steps, "Total environment steps");
    app->add_option("--set", sets, "Override any config key: key=value");
  }

  ExperimentConfig Load() const {
    std::vector<ConfigOverride> overrides;
    if (!env.empty()) overrides.push_back({"env", env});
    if (!algo.empty()) overrides.push_back({"algorithm", algo});
    if (!scenario.empty()) overrides.push_back({"scenario", scenario});
    if (seed) overrides.push_back({"seed", std::to_string(*seed)});
    if (steps) {
      overrides.push_back({"training.total_env_steps", std::to_string(*steps)});
    }
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("--set expects key=value, got '" + s + "'");
      }
      overrides.push_back({s.substr(0, eq), s.substr(eq + 1)});
    }
    if (config_path.empty()) return ParseConfig("", overrides);
    return LoadConfig(config_path, overrides);
  }
};

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot write " + path.string());
  out << text;
}

RunResult RunOne(const ExperimentConfig& config, const fs::path& out_dir,
                 bool verbose) {
  fs::create_directories(out_dir);
  WriteText(out_dir / "config.json", config.ToJson() + "\n");
  std::ofstream log(out_dir / "train_log.jsonl", std::ios::binary);
  RunHooks hooks;
  hooks.train_log = &log;
  if (verbose) {
    hooks.on_eval = [](const EvalPoint& p) {
      std::cout << "episode " << p.episode << "  steps " << p.env_steps
                << "  value " << p.value << std::endl;
    };
  }
  RunResult result = RunExperiment(config, hooks);
  SaveMetricsCsv(out_dir / "metrics.csv", result.report, config);
  if (!config.heuristic()) {
    SaveCheckpoint(out_dir / "checkpoint.bin", result.params);
  }
  if (!result.final_eval_episodes.empty()) {
    std::ofstream trace(out_dir / "replay.jsonl", std::ios::binary);
    WriteTrace(trace, result.final_eval_episodes.front());
  }
  return result;
}

int Run(const CommonOptions& common, int n_seeds, const std::string& out) {
  ExperimentConfig base = common.Load();
  if (n_seeds <= 1) {
    RunResult r = RunOne(base, out, true);
    std::cout << r.report.metric_name << " " << r.report.final_value()
              << std::endl;
    return 0;
  }
  std::vector<double> finals;
  fs::create_directories(out);
  std::ofstream summary(fs::path(out) / "seeds.csv", std::ios::binary);
  if (!summary) throw ContractError("cannot write " + out + "/seeds.csv");
  for (int k = 0; k < n_seeds; ++k) {
    ExperimentConfig c = base;
    c.seed = base.seed + static_cast<std::uint64_t>(k);
    c.provenance["seed"] = Provenance::kOverride;
    RunResult r = RunOne(c, fs::path(out) / ("seed_" + std::to_string(c.seed)),
                         false);
    finals.push_back(r.report.final_value());
    std::cout << "seed " << c.seed << "  " << r.report.metric_name << " "
              << finals.back() << std::endl;
  }
  const SeedSummary s = BootstrapMedian(finals, 10000, base.seed);
  summary << "n,median,ci_low,ci_high\n"
          << s.n << ',' << s.median << ',' << s.ci_low << ',' << s.ci_high
          << '\n';
  std::cout << "median " << s.median << "  95% CI [" << s.ci_low << ", "
            << s.ci_high << "]" << std::endl;
  return 0;
}

ExperimentConfig ConfigForCheckpoint(const CommonOptions& common,
                                     const std::string& checkpoint) {
  CommonOptions c = common;
  if (c.config_path.empty()) {
    const fs::path sibling = fs::path(checkpoint).parent_path() / "config.json";
    if (fs::exists(sibling)) c.config_path = sibling.string();
  }
  return c.Load();
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureAllocator();
  CLI::App app{"Monotonic value factorisation for cooperative multi-agent RL"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  int n_seeds = 1;
  std::string out_dir = "runs/latest";
  CLI::App* run = app.add_subcommand("run", "Train and evaluate");
  run_opts.Register(run);
  run->add_option("--seeds", n_seeds, "Number of consecutive seeds");
  run->add_option("--out", out_dir, "Output directory");

  CommonOptions eval_opts;
  std::string eval_ckpt;
  int eval_episodes = 20;
  CLI::App* eval = app.add_subcommand("eval", "Greedy evaluation of a checkpoint");
  eval_opts.Register(eval);
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
  eval->add_option("--episodes", eval_episodes, "Evaluation episodes");

  CommonOptions dump_opts;
  std::string dump_ckpt;
  CLI::App* dump =
      app.add_subcommand("dump-qtot", "Print two-step Q_tot tables");
  dump_opts.Register(dump);
  dump->add_option("--checkpoint", dump_ckpt, "Checkpoint file")->required();

  CommonOptions print_opts;
  CLI::App* print =
      app.add_subcommand("print-config", "Show effective config and sources");
  print_opts.Register(print);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return Run(run_opts, n_seeds, out_dir);
    if (eval->parsed()) {
      const ExperimentConfig c = ConfigForCheckpoint(eval_opts, eval_ckpt);
      const ParameterSet params = LoadCheckpoint(eval_ckpt);
      const EvalPoint p = EvaluateParams(
          c, params, eval_episodes, DeriveSeed(c.seed, kEvalStream));
      std::cout << (c.env == EnvKind::kTwoStep ? "test_return " : "test_win_rate ")
                << p.value << std::endl;
      return 0;
    }
    if (dump->parsed()) {
      const ExperimentConfig c = ConfigForCheckpoint(dump_opts, dump_ckpt);
      const ParameterSet params = LoadCheckpoint(dump_ckpt);
      std::cout << FormatQtotTables(ComputeQtotTables(c, params));
      return 0;
    }
    if (print->parsed()) {
      std::cout << print_opts.Load().Describe();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
