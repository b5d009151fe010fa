#include "mmtrain/detection.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "mmtrain/error.hpp"
#include "mmtrain/kernels.hpp"
#include "mmtrain/parallel.hpp"

namespace mmtrain {

namespace {

double gamma_log_pdf(double x, double shape, double scale) {
  return (shape - 1.0) * std::log(x) - x / scale - shape * std::log(scale) - std::lgamma(shape);
}

double idle_scale(std::size_t antennas) { return 1.0 / static_cast<double>(antennas); }

double active_scale(const DetectionConfig& c) {
  return (1.0 + c.pathloss_power) / static_cast<double>(c.antennas);
}

// log(pi0 p0(x)) - log(pi1 p1(x)); positive favours s = 0.
double log_posterior_ratio(const DetectionConfig& c, double x) {
  const double k = static_cast<double>(c.antennas);
  return gamma_log_pdf(x, k, idle_scale(c.antennas)) + std::log1p(-c.active_prior) -
         gamma_log_pdf(x, k, active_scale(c)) - std::log(c.active_prior);
}

}  // namespace

void DetectionConfig::validate() const {
  if (antennas < 1) throw Error(ErrorCode::invalid_argument, "antenna count must be >= 1");
  if (!(pathloss_power >= 0.0) || !std::isfinite(pathloss_power)) {
    throw Error(ErrorCode::invalid_argument, "pathloss power must be finite and >= 0");
  }
  if (!(active_prior > 0.0 && active_prior < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "active prior must lie in (0, 1)");
  }
  if (threshold && !(*threshold > 1.0 && *threshold < 1.0 + pathloss_power)) {
    throw Error(ErrorCode::invalid_argument, "threshold must lie in (1, 1 + gP)");
  }
}

double energy_metric(std::span<const cplx> received) {
  if (received.empty()) throw Error(ErrorCode::empty_input, "received vector is empty");
  return kernels::sum_abs2(received) / static_cast<double>(received.size());
}

double optimal_threshold(const DetectionConfig& config) {
  DetectionConfig c = config;
  c.threshold.reset();
  c.validate();
  double lo = 1.0;
  double hi = 1.0 + c.pathloss_power;
  if (!(hi > lo)) throw Error(ErrorCode::no_root, "gP = 0: energy laws coincide");
  double f_lo = log_posterior_ratio(c, lo);
  const double f_hi = log_posterior_ratio(c, hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw Error(ErrorCode::no_root, "energy densities do not cross inside (1, 1 + gP)");
  }
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = log_posterior_ratio(c, mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double effective_threshold(const DetectionConfig& config) {
  if (config.threshold) return *config.threshold;
  if (config.pathloss_power == 0.0) return 1.0;
  return optimal_threshold(config);
}

double error_probability(const DetectionConfig& config, double threshold) {
  config.validate();
  if (threshold <= 0.0) return 1.0 - config.active_prior;
  const double k = static_cast<double>(config.antennas);
  const double miss = boost::math::gamma_p(k, threshold / active_scale(config));
  const double false_alarm = boost::math::gamma_q(k, threshold / idle_scale(config.antennas));
  return config.active_prior * miss + (1.0 - config.active_prior) * false_alarm;
}

void draw_received_into(const DetectionConfig& config, bool active, Rng& rng, std::span<cplx> y) {
  if (y.size() != config.antennas) {
    throw Error(ErrorCode::dimension_mismatch, "received buffer length must equal antenna count");
  }
  if (!active) {
    for (cplx& v : y) v = rng.complex_normal(1.0);
    return;
  }
  const double amp = std::sqrt(config.pathloss_power);
  for (cplx& v : y) {
    const cplx h = rng.complex_normal(1.0);
    v = amp * h + rng.complex_normal(1.0);
  }
}

std::vector<cplx> draw_received(const DetectionConfig& config, bool active, Rng& rng) {
  std::vector<cplx> y(config.antennas);
  draw_received_into(config, active, rng, y);
  return y;
}

McEstimate error_probability_mc(const DetectionConfig& config, std::size_t trials,
                                std::uint64_t seed, unsigned workers) {
  if (trials < 1) throw Error(ErrorCode::invalid_argument, "trials must be >= 1");
  config.validate();
  const double eta = effective_threshold(config);
  std::vector<std::size_t> errors(block_count(trials), 0);
  for_each_block(trials, seed, workers,
                 [&](std::size_t b, std::size_t begin, std::size_t end, Rng& rng) {
                   std::size_t count = 0;
                   std::vector<cplx> y(config.antennas);
                   for (std::size_t t = begin; t < end; ++t) {
                     const bool active = rng.bernoulli(config.active_prior);
                     draw_received_into(config, active, rng, y);
                     count += detect(energy_metric(y), eta) != static_cast<int>(active);
                   }
                   errors[b] = count;
                 });
  std::size_t total = 0;
  for (std::size_t e : errors) total += e;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(total) / n;
  return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / n), trials};
}

double min_threshold_for_network(std::span<const double> pathloss_powers, std::size_t antennas,
                                 std::optional<double> max_error) {
  if (pathloss_powers.empty()) throw Error(ErrorCode::empty_input, "no pathloss powers given");
  double best = std::numeric_limits<double>::infinity();
  for (double gp : pathloss_powers) {
    if (!(gp > 0.0)) throw Error(ErrorCode::invalid_argument, "pathloss powers must be > 0");
    DetectionConfig c;
    c.antennas = antennas;
    c.pathloss_power = gp;
    const double eta = optimal_threshold(c);
    if (max_error && error_probability(c, eta) > *max_error) continue;
    best = std::min(best, eta);
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::empty_input, "no per-UE threshold meets the error cap");
  }
  return best;
}

}  // namespace mmtrain
