#pragma once

// Single-slot collision analysis for a UE group sharing L pilot dimensions
// across N noise-limited cells. Each UE is in coverage with probability
// alpha = 1 - p_out and then lands in one of the N cells uniformly; a UE is
// served only if it is alone in its cell.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mmtrain/channel.hpp"
#include "mmtrain/detection.hpp"

namespace mmtrain {

struct NetworkModel {
  std::size_t cells = 16;      // N
  double coverage = 1.0;       // alpha
  std::size_t group_size = 16; // K_G

  static NetworkModel from_outage(std::size_t cells, double p_out, std::size_t group_size) {
    return {cells, 1.0 - p_out, group_size};
  }
  double outage() const { return 1.0 - coverage; }
  void validate() const;
};

/// Number of UE groups, floor(WT / L).
std::size_t group_count(std::size_t subcarriers, std::size_t dimension);

struct PlacementOutcome {
  std::vector<std::optional<std::size_t>> cell_of_ue;  // nullopt = outage
  std::size_t singleton_count = 0;
};

PlacementOutcome place_ues(const NetworkModel& model, Rng& rng);

/// Singletons only, without materialising the assignment.
std::size_t count_singletons(const NetworkModel& model, Rng& rng, std::vector<std::size_t>& scratch);

/// E[X] = alpha K_G (1 - alpha/N)^(K_G - 1)
double expected_singletons(const NetworkModel& model);

/// p = 1 - alpha (1 - alpha/N)^(K_G - 1)
double collision_probability(const NetworkModel& model);

/// Values within this relative distance of the maximum count as ties.
inline constexpr double kTieTolerance = 1e-12;

/// Every K_G in [1, ceil(10 N / alpha)] at which expected_singletons attains
/// its maximum, ascending.
std::vector<std::size_t> optimal_group_sizes(const NetworkModel& model);

/// Smallest element of optimal_group_sizes().
std::size_t optimal_group_size(const NetworkModel& model);

struct ReuseMetrics {
  double rho_fq = 0.0;     // WT alpha / Wtau_max
  double rho_cs = 0.0;     // WT alpha / M
  double rho_ag_fq = 0.0;  // WT K_G (1 - p) / (Wtau_max + 1)
  double rho_ag_cs = 0.0;  // WT K_G (1 - p) / (M + 1)
};

/// The four schemes with the single-zero code (L = Wtau_max + 1 or M + 1).
/// The group count is the unfloored ratio WT / L.
ReuseMetrics rho_metrics(const NetworkModel& model, const OfdmParams& params);

/// rho_AG-CS / rho_CS = (M K_G / (M + 1)) (1 - (1 - p_out)/N)^(K_G - 1),
/// using the cells and group size of `model` and the given outage.
double reuse_gain(double p_out, const NetworkModel& model, const OfdmParams& params);

/// 1 - mean(singletons) / K_G over `trials` independent placements.
McEstimate collision_probability_mc(const NetworkModel& model, std::size_t trials,
                                    std::uint64_t seed, unsigned workers = 1);

}  // namespace mmtrain
