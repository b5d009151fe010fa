#include "mmtrain/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "mmtrain/csv.hpp"
#include "mmtrain/detection.hpp"
#include "mmtrain/error.hpp"
#include "mmtrain/netsim.hpp"
#include "mmtrain/parallel.hpp"
#include "mmtrain/pilots.hpp"
#include "mmtrain/recovery.hpp"
#include "mmtrain/version.hpp"

namespace mmtrain {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Typed view over the overrides. Every getter names the key on failure.
class Params {
 public:
  explicit Params(const Overrides& o) : o_(o) {}

  bool has(const std::string& key) const { return o_.count(key) != 0; }

  std::string text(const std::string& key, std::string fallback) const {
    auto it = o_.find(key);
    return it == o_.end() ? fallback : it->second;
  }

  double real(const std::string& key, double fallback) const {
    return has(key) ? to_real(key, o_.at(key)) : fallback;
  }

  std::optional<double> maybe_real(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return to_real(key, o_.at(key));
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    return has(key) ? to_count(key, o_.at(key)) : fallback;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = o_.at(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::invalid_argument, "key '" + key + "': expected a boolean, got '" + v + "'");
  }

  std::vector<double> reals(const std::string& key, const std::string& fallback) const {
    std::vector<double> out;
    for (const auto& item : split_list(text(key, fallback))) out.push_back(to_real(key, item));
    if (out.empty()) throw Error(ErrorCode::invalid_argument, "key '" + key + "': empty list");
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key, const std::string& fallback) const {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text(key, fallback))) out.push_back(to_count(key, item));
    if (out.empty()) throw Error(ErrorCode::invalid_argument, "key '" + key + "': empty list");
    return out;
  }

 private:
  static double to_real(const std::string& key, const std::string& v) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || std::isnan(out)) {
      throw Error(ErrorCode::invalid_argument, "key '" + key + "': expected a number, got '" + v + "'");
    }
    return out;
  }

  static std::size_t to_count(const std::string& key, const std::string& v) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw Error(ErrorCode::invalid_argument,
                  "key '" + key + "': expected a non-negative integer, got '" + v + "'");
    }
    return out;
  }

  const Overrides& o_;
};

OfdmParams ofdm_params(const Params& p) {
  OfdmParams out;
  out.subcarriers = p.count("subcarriers", 1000);
  out.taps = p.count("taps", 100);
  out.sparsity = p.count("sparsity", 4);
  out.pilot_tones = p.count("pilot_tones", 5 * out.sparsity);
  out.symbol_energy = p.real("symbol_energy", 1.0);
  out.validate();
  return out;
}

std::uint64_t row_seed(std::uint64_t seed, std::uint64_t row) {
  return mix64(seed ^ mix64(row + 0xA0761D6478BD642FULL));
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_preamble(CsvWriter& csv, const ExperimentConfig& config) {
  csv.comment(std::string("mmtrain ") + kVersion);
  csv.comment(std::string("experiment ") + to_string(config.experiment));
  csv.comment("seed " + std::to_string(config.seed));
  csv.comment("config " + hex64(config_hash(config)));
  csv.row(csv_columns(config.experiment));
}

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }

}  // namespace

const char* to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::detect_sweep: return "detect-sweep";
    case Experiment::recover_bench: return "recover-bench";
    case Experiment::codebook_verify: return "codebook-verify";
    case Experiment::netsim: return "netsim";
    case Experiment::fig3: return "fig3";
  }
  return "?";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (auto e : {Experiment::detect_sweep, Experiment::recover_bench, Experiment::codebook_verify,
                 Experiment::netsim, Experiment::fig3}) {
    if (name == to_string(e)) return e;
  }
  return std::nullopt;
}

const std::vector<std::string>& csv_columns(Experiment e) {
  static const std::vector<std::string> fig3{"K_G", "p_out", "rho_fq", "rho_ag_fq", "rho_cs", "rho_ag_cs"};
  static const std::vector<std::string> detect{"M_BS", "gP", "threshold", "Pe_mc", "Pe_stderr"};
  static const std::vector<std::string> recover{"snr_db",       "method",           "nmse_db_mean",
                                                "support_rate", "pilot_tones_used", "trials",
                                                "failures"};
  static const std::vector<std::string> codebook{"scenario",  "cases", "identified", "collision",
                                                 "empty",     "invalid", "mismatches"};
  static const std::vector<std::string> netsim{"N",     "K_G",  "alpha",   "expected_singletons",
                                               "p_analytic", "p_mc", "p_stderr"};
  switch (e) {
    case Experiment::detect_sweep: return detect;
    case Experiment::recover_bench: return recover;
    case Experiment::codebook_verify: return codebook;
    case Experiment::netsim: return netsim;
    case Experiment::fig3: return fig3;
  }
  return fig3;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      // shared
      "seed", "workers", "out", "subcarriers", "taps", "sparsity", "pilot_tones", "symbol_energy",
      // fig3
      "cells", "p_out_list", "group_min", "group_max",
      // detect-sweep
      "antennas_list", "gp_list", "detect_trials", "active_prior", "threshold",
      // recover-bench
      "snr_db_list", "recover_trials", "noise_variance", "epsilon_scale", "epsilon",
      "noiseless_epsilon", "magnitude_floor", "relative_floor",
      // codebook-verify
      "users", "ones_per_column", "zeros_per_column", "pair_limit", "pair_samples",
      "multi_samples", "print_codebook", "codebook_path",
      // netsim
      "cells_list", "group_list", "coverage_list", "netsim_trials"};
  return keys;
}

Overrides parse_key_values(std::istream& in, const std::string& source) {
  static const std::set<std::string> allowed(known_keys().begin(), known_keys().end());
  Overrides out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw Error(ErrorCode::io, where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!allowed.count(key)) throw Error(ErrorCode::unknown_key, where + ": unknown key '" + key + "'");
    out[key] = value;
  }
  return out;
}

Overrides load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config file '" + path.string() + "'");
  return parse_key_values(in, path.string());
}

std::pair<std::string, std::string> parse_assignment(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto parsed = parse_key_values(in, "--set " + std::string(text));
  if (parsed.size() != 1) throw Error(ErrorCode::io, "--set expects key=value, got '" + std::string(text) + "'");
  return *parsed.begin();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
    h ^= 0xFF;  // field separator
    h *= 0x100000001B3ULL;
  };
  feed(to_string(config.experiment));
  // seed, worker count and output path are not model parameters
  for (const auto& [k, v] : config.overrides) {
    if (k == "seed" || k == "workers" || k == "out") continue;
    feed(k);
    feed(v);
  }
  return h;
}

RunReport run_fig3(const ExperimentConfig& config, std::ostream& out) {
  const Params p(config.overrides);
  const OfdmParams params = ofdm_params(p);
  const std::size_t cells = p.count("cells", 16);
  const auto outages = p.reals("p_out_list", "0,0.3");
  const std::size_t k_min = p.count("group_min", 1);
  const std::size_t k_max = p.count("group_max", 100);
  if (k_min < 1 || k_max < k_min) {
    throw Error(ErrorCode::invalid_argument, "group_min/group_max must satisfy 1 <= min <= max");
  }

  CsvWriter csv(out);
  write_preamble(csv, config);
  RunReport report;
  for (double p_out : outages) {
    for (std::size_t k = k_min; k <= k_max; ++k) {
      const auto model = NetworkModel::from_outage(cells, p_out, k);
      const ReuseMetrics m = rho_metrics(model, params);
      csv.row({num(k), num(p_out), num(m.rho_fq), num(m.rho_ag_fq), num(m.rho_cs), num(m.rho_ag_cs)});
      ++report.rows;
    }
  }
  return report;
}

RunReport run_detect_sweep(const ExperimentConfig& config, std::ostream& out) {
  const Params p(config.overrides);
  const auto antennas = p.counts("antennas_list", "16,32,64,128");
  const auto powers = p.reals("gp_list", "0,1,2,10");
  const std::size_t trials = p.count("detect_trials", 100000);

  CsvWriter csv(out);
  write_preamble(csv, config);
  RunReport report;
  std::uint64_t row = 0;
  for (double gp : powers) {
    for (std::size_t m : antennas) {
      DetectionConfig dc;
      dc.antennas = m;
      dc.pathloss_power = gp;
      dc.active_prior = p.real("active_prior", 0.5);
      dc.threshold = p.maybe_real("threshold");
      dc.validate();
      const double eta = effective_threshold(dc);
      const McEstimate pe = error_probability_mc(dc, trials, row_seed(config.seed, row++), config.workers);
      csv.row({num(m), num(gp), num(eta), num(pe.value), num(pe.standard_error)});
      ++report.rows;
    }
  }
  return report;
}

namespace {

enum Method : std::size_t { kDantzig, kDantzigDebias, kOmp, kFde, kMethodCount };
constexpr const char* kMethodNames[kMethodCount] = {"dantzig", "dantzig+debias", "omp", "fde_ls"};

struct Cell {
  bool failed = false;
  bool support_hit = false;
  double nmse = 0.0;
};

}  // namespace

RunReport run_recover_bench(const ExperimentConfig& config, std::ostream& out) {
  const Params p(config.overrides);
  const OfdmParams base = ofdm_params(p);
  const auto snrs = p.reals("snr_db_list", "inf,30,20,10");
  const std::size_t trials = p.count("recover_trials", 200);
  const double noise_variance = p.real("noise_variance", 1.0);
  if (!(noise_variance > 0.0)) throw Error(ErrorCode::invalid_argument, "noise_variance must be positive");
  const double noiseless_eps = p.real("noiseless_epsilon", 1e-6);

  DantzigConfig noisy_cfg;
  if (auto eps = p.maybe_real("epsilon")) {
    noisy_cfg.epsilon_rule = EpsilonRule::explicit_value;
    noisy_cfg.epsilon = *eps;
  }
  noisy_cfg.scale = p.real("epsilon_scale", 1.0);
  noisy_cfg.noise_variance = noise_variance;
  noisy_cfg.magnitude_floor = p.real("magnitude_floor", 0.0);
  noisy_cfg.relative_floor = p.real("relative_floor", 0.01);
  noisy_cfg.validate();
  DantzigConfig clean_cfg = noisy_cfg;
  clean_cfg.epsilon_rule = EpsilonRule::explicit_value;
  clean_cfg.epsilon = noiseless_eps;
  clean_cfg.validate();

  const std::size_t n_snr = snrs.size();
  // cells[trial][snr][method]
  std::vector<Cell> cells(trials * n_snr * kMethodCount);
  auto at = [&](std::size_t t, std::size_t s, std::size_t m) -> Cell& {
    return cells[(t * n_snr + s) * kMethodCount + m];
  };

  for_each_block(
      trials, config.seed, config.workers,
      [&](std::size_t, std::size_t t, std::size_t, Rng& rng) {
        const SparseChannel h = sample_channel(base, rng);
        const SensingMatrix x = build_sensing_matrix(select_pilot_tones(base, {}, rng), base);
        const SensingMatrix x_full = build_sensing_matrix(fde_pilot_tones(base), base);
        for (std::size_t s = 0; s < n_snr; ++s) {
          const bool noiseless = std::isinf(snrs[s]);
          OfdmParams params = base;
          double nv = 0.0;
          if (!noiseless) {
            nv = noise_variance;
            params.symbol_energy =
                std::pow(10.0, snrs[s] / 10.0) * noise_variance / static_cast<double>(base.sparsity);
          }
          const auto y = synthesize_measurement(x, h, params, nv, rng);
          const auto y_full = synthesize_measurement(x_full, h, params, nv, rng);

          auto record = [&](std::size_t m, auto&& recover) {
            Cell& c = at(t, s, m);
            try {
              RecoveryResult r = recover();
              if (!r.ok()) {
                c.failed = true;
                return;
              }
              c.nmse = r.score(h.taps);
              c.support_hit = r.recovered_support == h.support;
            } catch (const Error&) {
              c.failed = true;
            }
          };

          const DantzigConfig& cfg = noiseless ? clean_cfg : noisy_cfg;
          std::optional<RecoveryResult> lp;
          record(kDantzig, [&] {
            lp = dantzig_recover(y, x, params, cfg);
            return *lp;
          });
          record(kDantzigDebias, [&] {
            if (!lp) throw Error(ErrorCode::singular_system, "no LP solution");
            RecoveryResult r = *lp;
            r.nmse_db.reset();
            if (r.ok()) r.estimate = restricted_least_squares(y, x, params, r.recovered_support);
            return r;
          });
          record(kOmp, [&] { return omp_recover(y, x, params, base.sparsity); });
          record(kFde, [&] { return fde_ls_recover(y_full, x_full, params); });
        }
      },
      1);

  CsvWriter csv(out);
  write_preamble(csv, config);
  RunReport report;
  for (std::size_t s = 0; s < n_snr; ++s) {
    for (std::size_t m = 0; m < kMethodCount; ++m) {
      double nmse_sum = 0.0;
      std::size_t ok = 0, hits = 0, failures = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const Cell& c = at(t, s, m);
        if (c.failed) {
          ++failures;
          continue;
        }
        ++ok;
        nmse_sum += c.nmse;
        hits += c.support_hit ? 1 : 0;
      }
      const double nan = std::numeric_limits<double>::quiet_NaN();
      const std::size_t tones = m == kFde ? base.taps : base.pilot_tones;
      csv.row({num(snrs[s]), kMethodNames[m], num(ok ? nmse_sum / static_cast<double>(ok) : nan),
               num(trials && m != kFde ? static_cast<double>(hits) / static_cast<double>(trials) : nan), num(tones),
               num(trials), num(failures)});
      ++report.rows;
      if (failures) {
        report.messages.push_back(std::string(kMethodNames[m]) + " at snr " + num(snrs[s]) + ": " +
                                  num(failures) + " failed trials");
      }
    }
  }
  return report;
}

RunReport run_codebook_verify(const ExperimentConfig& config, std::ostream& out) {
  const Params p(config.overrides);
  const std::size_t users = p.count("users", 21);
  const std::size_t ones = p.count("ones_per_column", 20);
  const std::size_t zeros = p.has("zeros_per_column") ? p.count("zeros_per_column", 1)
                                                       : choose_l(std::max<std::size_t>(users, 1), ones);
  const std::size_t pair_limit = p.count("pair_limit", 300);
  const std::size_t pair_samples = p.count("pair_samples", 10000);
  const std::size_t multi_samples = p.count("multi_samples", 1000);

  PilotCodebook book = [&] {
    try {
      return build_codebook(users, ones, zeros);
    } catch (const Error& e) {
      throw Error(e.code(), std::string("codebook configuration: ") + e.what());
    }
  }();

  if (const std::string path = p.text("codebook_path", ""); !path.empty()) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::io, "cannot write codebook to '" + path + "'");
    write_codebook(f, book);
    if (!f) throw Error(ErrorCode::io, "write failed for '" + path + "'");
  }

  struct Tally {
    std::size_t cases = 0, mismatches = 0;
    std::size_t kinds[4] = {0, 0, 0, 0};
  };
  auto check = [&](Tally& tally, std::span<const std::size_t> active, const DecodeOutcome& expected) {
    const DecodeOutcome got = decode_energy_vector(superpose(active, book), book);
    ++tally.cases;
    ++tally.kinds[static_cast<std::size_t>(got.kind)];
    if (!(got == expected)) ++tally.mismatches;
  };
  const DecodeOutcome collision{DecodeKind::collision, std::nullopt};

  Tally none, single, pair, multi;
  check(none, {}, DecodeOutcome{DecodeKind::empty, std::nullopt});
  for (std::size_t i = 0; i < users; ++i) {
    const std::size_t a[1] = {i};
    check(single, a, DecodeOutcome{DecodeKind::identified, i});
  }
  Rng rng = Rng::for_stream(config.seed, 0);
  const std::size_t total_pairs = users * (users > 0 ? users - 1 : 0) / 2;
  if (users <= pair_limit) {
    for (std::size_t i = 0; i < users; ++i) {
      for (std::size_t j = i + 1; j < users; ++j) {
        const std::size_t a[2] = {i, j};
        check(pair, a, collision);
      }
    }
  } else if (total_pairs > 0) {
    for (std::size_t n = 0; n < pair_samples; ++n) {
      const std::size_t i = rng.below(users);
      std::size_t j = rng.below(users - 1);
      if (j >= i) ++j;
      const std::size_t a[2] = {i, j};
      check(pair, a, collision);
    }
  }
  if (users >= 3) {
    std::vector<std::size_t> all(users);
    std::iota(all.begin(), all.end(), 0);
    check(multi, all, collision);
    std::vector<std::size_t> pool = all;
    for (std::size_t n = 0; n < multi_samples; ++n) {
      const std::size_t size = 3 + rng.below(std::min<std::size_t>(users, 8) - 2);
      for (std::size_t k = 0; k < size; ++k) std::swap(pool[k], pool[k + rng.below(users - k)]);
      check(multi, std::span<const std::size_t>(pool.data(), size), collision);
    }
  }

  CsvWriter csv(out);
  write_preamble(csv, config);
  if (p.flag("print_codebook", false)) {
    std::ostringstream text;
    write_codebook(text, book);
    std::string line;
    std::istringstream lines(text.str());
    while (std::getline(lines, line)) csv.comment("codebook " + line);
  }
  RunReport report;
  std::size_t mismatches = 0;
  auto emit = [&](const char* name, const Tally& t) {
    if (t.cases == 0) return;
    csv.row({name, num(t.cases), num(t.kinds[1]), num(t.kinds[2]), num(t.kinds[0]), num(t.kinds[3]),
             num(t.mismatches)});
    mismatches += t.mismatches;
    ++report.rows;
  };
  emit("none", none);
  emit("single", single);
  emit("pair", pair);
  emit("multi", multi);
  if (mismatches) {
    report.exit_code = 1;
    report.messages.push_back(std::to_string(mismatches) + " decode mismatches");
  }
  return report;
}

RunReport run_netsim(const ExperimentConfig& config, std::ostream& out) {
  const Params p(config.overrides);
  const auto cells = p.counts("cells_list", "4,16,64");
  const auto groups = p.counts("group_list", "1,4,16,64");
  const auto coverages = p.reals("coverage_list", "0.5,0.7,1");
  const std::size_t trials = p.count("netsim_trials", 100000);

  CsvWriter csv(out);
  write_preamble(csv, config);
  RunReport report;
  std::uint64_t row = 0;
  for (std::size_t n : cells) {
    for (std::size_t k : groups) {
      for (double alpha : coverages) {
        const NetworkModel model{n, alpha, k};
        model.validate();
        const McEstimate mc = collision_probability_mc(model, trials, row_seed(config.seed, row++), config.workers);
        csv.row({num(n), num(k), num(alpha), num(expected_singletons(model)),
                 num(collision_probability(model)), num(mc.value), num(mc.standard_error)});
        ++report.rows;
      }
    }
  }
  return report;
}

RunReport run_experiment(const ExperimentConfig& config, std::ostream& csv) {
  switch (config.experiment) {
    case Experiment::detect_sweep: return run_detect_sweep(config, csv);
    case Experiment::recover_bench: return run_recover_bench(config, csv);
    case Experiment::codebook_verify: return run_codebook_verify(config, csv);
    case Experiment::netsim: return run_netsim(config, csv);
    case Experiment::fig3: return run_fig3(config, csv);
  }
  throw Error(ErrorCode::invalid_argument, "unknown experiment");
}

RunReport run_experiment_to_file(const ExperimentConfig& config) {
  const std::string path = config.output_path.string();
  std::ostringstream buffer;
  RunReport report = run_experiment(config, buffer);
  std::ofstream f(config.output_path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::io, "cannot open output file '" + path + "'");
  f << buffer.str();
  f.flush();
  if (!f) throw Error(ErrorCode::io, "write failed for '" + path + "'");
  return report;
}

}  // namespace mmtrain
