#pragma once

// Massive-MIMO energy detector for a single-antenna UE with on/off symbol
// s in {0, 1}: y = sqrt(gP) h s + z, energy E = |y|^2 / M_BS.
//
// Under s = 0, M_BS * E is Gamma(M_BS, 1) exactly. Under s = 1 we use the
// Gamma(M_BS, (1 + gP) / M_BS) law for E. With i.i.d. Gaussian h this is exact
// (y ~ CN(0, (1 + gP) I)); for other fading it is an approximation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mmtrain/channel.hpp"

namespace mmtrain {

struct DetectionConfig {
  std::size_t antennas = 64;             // M_BS
  double pathloss_power = 10.0;          // g * P
  std::optional<double> threshold;       // auto when empty
  double active_prior = 0.5;             // Pr(s = 1)

  void validate() const;
};

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

double energy_metric(std::span<const cplx> received);

/// Bayes threshold: root of log(pi0 p0(x)) - log(pi1 p1(x)) on (1, 1 + gP), by
/// bisection to 1e-9. Throws Error(no_root) when the densities do not cross
/// inside the interval (gP ~ 0 or an extreme prior).
double optimal_threshold(const DetectionConfig& config);

/// The configured threshold, else optimal_threshold, else 1 for gP == 0 where
/// every threshold gives the same error probability.
double effective_threshold(const DetectionConfig& config);

/// 1 if energy > threshold, 0 otherwise.
inline int detect(double energy, double threshold) { return energy > threshold ? 1 : 0; }

/// Model error probability at `threshold`, from the Gamma CDFs.
double error_probability(const DetectionConfig& config, double threshold);

/// Draws the received vector for one slot.
std::vector<cplx> draw_received(const DetectionConfig& config, bool active, Rng& rng);
/// Same draw into a caller buffer of length config.antennas.
void draw_received_into(const DetectionConfig& config, bool active, Rng& rng, std::span<cplx> y);

/// Empirical error rate with h ~ CN(0, I), z ~ CN(0, I) redrawn every trial.
McEstimate error_probability_mc(const DetectionConfig& config, std::size_t trials,
                                std::uint64_t seed, unsigned workers = 1);

/// Network-wide threshold: the smallest per-UE optimal threshold. When
/// `max_error` is set only thresholds whose model error probability is at or
/// below it qualify; Error(empty_input) if nothing qualifies.
double min_threshold_for_network(std::span<const double> pathloss_powers, std::size_t antennas,
                                 std::optional<double> max_error = std::nullopt);

}  // namespace mmtrain
