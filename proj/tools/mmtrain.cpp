// Command-line front end: mmtrain <experiment> [--config file] [--seed N]
// [--out path] [--set key=value ...]

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmtrain/error.hpp"
#include "mmtrain/experiments.hpp"
#include "mmtrain/kernels.hpp"
#include "mmtrain/version.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kRunError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave uplink training simulations"};
  app.set_version_flag("--version", mmtrain::kVersion);

  std::string experiment_name;
  std::string config_path;
  std::string out_path;
  std::vector<std::string> assignments;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string isa;

  app.add_option("experiment", experiment_name,
                 "detect-sweep | recover-bench | codebook-verify | netsim | fig3")
      ->required();
  app.add_option("--config", config_path, "key = value parameter file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "master seed (default 1)");
  app.add_option("--out", out_path, "CSV output path (default stdout)");
  app.add_option("--set", assignments, "override one parameter, key=value")->allow_extra_args(false);
  auto* workers_opt = app.add_option("--workers", workers, "worker threads, 0 = all cores");
  app.add_option("--isa", isa, "force kernel variant")->check(CLI::IsMember({"scalar", "avx2"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const auto experiment = mmtrain::parse_experiment(experiment_name);
  if (!experiment) {
    std::cerr << "mmtrain: unknown experiment '" << experiment_name << "'\n";
    return kUsageError;
  }

  mmtrain::ExperimentConfig config;
  config.experiment = *experiment;
  try {
    if (!isa.empty()) {
      mmtrain::kernels::force_isa(isa == "avx2" ? mmtrain::kernels::Isa::avx2
                                                : mmtrain::kernels::Isa::scalar);
    }
    if (!config_path.empty()) config.overrides = mmtrain::load_config_file(config_path);
    for (const auto& a : assignments) {
      auto [key, value] = mmtrain::parse_assignment(a);
      config.overrides[key] = value;
    }
    // flags beat file and --set values
    if (*seed_opt) config.overrides["seed"] = std::to_string(seed);
    if (*workers_opt) config.overrides["workers"] = std::to_string(workers);
    if (!out_path.empty()) config.overrides["out"] = out_path;

    auto count = [&](const char* key, std::uint64_t fallback) -> std::uint64_t {
      auto it = config.overrides.find(key);
      if (it == config.overrides.end()) return fallback;
      std::size_t used = 0;
      const auto v = std::stoull(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(key);
      return v;
    };
    try {
      config.seed = count("seed", 1);
      config.workers = static_cast<unsigned>(count("workers", 1));
    } catch (const std::logic_error&) {
      std::cerr << "mmtrain: seed and workers must be non-negative integers\n";
      return kUsageError;
    }
    if (auto it = config.overrides.find("out"); it != config.overrides.end()) {
      config.output_path = it->second;
    }

    const mmtrain::RunReport report = config.output_path.empty()
                                          ? mmtrain::run_experiment(config, std::cout)
                                          : mmtrain::run_experiment_to_file(config);
    for (const auto& m : report.messages) std::cerr << "mmtrain: " << m << '\n';
    return report.exit_code;
  } catch (const mmtrain::Error& e) {
    std::cerr << "mmtrain: " << e.what() << '\n';
    const bool usage = e.code() == mmtrain::ErrorCode::unknown_key ||
                       e.code() == mmtrain::ErrorCode::invalid_argument ||
                       e.code() == mmtrain::ErrorCode::capacity_exceeded;
    return usage ? kUsageError : kRunError;
  }
}
