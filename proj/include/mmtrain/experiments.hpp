#pragma once

// Batch experiments behind the command-line tool. Parameters come from a flat
// "key = value" file plus overrides; every experiment writes one CSV table
// preceded by '#' provenance lines (tool version, seed, config hash).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmtrain {

enum class Experiment { detect_sweep, recover_bench, codebook_verify, netsim, fig3 };

const char* to_string(Experiment e) noexcept;
std::optional<Experiment> parse_experiment(std::string_view name);
const std::vector<std::string>& csv_columns(Experiment e);

using Overrides = std::map<std::string, std::string>;

/// All keys any experiment understands.
const std::vector<std::string>& known_keys();

/// Parses "key = value" lines; blank lines and '#' comments are skipped.
/// Throws Error(unknown_key) for keys outside known_keys(), Error(io) for
/// malformed lines. `source` names the input in messages.
Overrides parse_key_values(std::istream& in, const std::string& source);
Overrides load_config_file(const std::filesystem::path& path);
/// "key=value" from the command line.
std::pair<std::string, std::string> parse_assignment(std::string_view text);

struct ExperimentConfig {
  Experiment experiment = Experiment::fig3;
  std::uint64_t seed = 1;
  std::filesystem::path output_path;  // empty = caller's stream
  Overrides overrides;
  unsigned workers = 1;
};

/// 64-bit FNV-1a over the experiment name and the sorted overrides.
std::uint64_t config_hash(const ExperimentConfig& config);

struct RunReport {
  int exit_code = 0;
  std::size_t rows = 0;
  std::vector<std::string> messages;  // human-readable notes for stderr
};

RunReport run_fig3(const ExperimentConfig& config, std::ostream& csv);
RunReport run_detect_sweep(const ExperimentConfig& config, std::ostream& csv);
RunReport run_recover_bench(const ExperimentConfig& config, std::ostream& csv);
RunReport run_codebook_verify(const ExperimentConfig& config, std::ostream& csv);
RunReport run_netsim(const ExperimentConfig& config, std::ostream& csv);

RunReport run_experiment(const ExperimentConfig& config, std::ostream& csv);

/// Writes to config.output_path (created or truncated). Error(io) carries the path.
RunReport run_experiment_to_file(const ExperimentConfig& config);

}  // namespace mmtrain
