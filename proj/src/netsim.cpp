#include "mmtrain/netsim.hpp"

#include <cmath>

#include "mmtrain/error.hpp"
#include "mmtrain/parallel.hpp"

namespace mmtrain {

void NetworkModel::validate() const {
  if (cells < 1) throw Error(ErrorCode::invalid_argument, "need at least one cell");
  if (!(coverage > 0.0 && coverage <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "coverage probability must lie in (0, 1]");
  }
  if (group_size < 1) throw Error(ErrorCode::invalid_argument, "group size must be >= 1");
}

std::size_t group_count(std::size_t subcarriers, std::size_t dimension) {
  if (dimension == 0) throw Error(ErrorCode::invalid_argument, "zero pilot dimension");
  return subcarriers / dimension;
}

namespace {

// (1 - alpha/N)^(K_G - 1)
double alone_factor(const NetworkModel& m) {
  return std::pow(1.0 - m.coverage / static_cast<double>(m.cells),
                  static_cast<double>(m.group_size) - 1.0);
}

}  // namespace

PlacementOutcome place_ues(const NetworkModel& model, Rng& rng) {
  model.validate();
  PlacementOutcome out;
  out.cell_of_ue.resize(model.group_size);
  std::vector<std::size_t> occupancy(model.cells, 0);
  for (auto& cell : out.cell_of_ue) {
    if (!rng.bernoulli(model.coverage)) continue;
    cell = rng.below(model.cells);
    ++occupancy[*cell];
  }
  for (std::size_t n : occupancy) out.singleton_count += n == 1;
  return out;
}

std::size_t count_singletons(const NetworkModel& model, Rng& rng,
                             std::vector<std::size_t>& scratch) {
  scratch.assign(model.cells, 0);
  for (std::size_t k = 0; k < model.group_size; ++k) {
    if (!rng.bernoulli(model.coverage)) continue;
    ++scratch[rng.below(model.cells)];
  }
  std::size_t singles = 0;
  for (std::size_t n : scratch) singles += n == 1;
  return singles;
}

double expected_singletons(const NetworkModel& model) {
  model.validate();
  return model.coverage * static_cast<double>(model.group_size) * alone_factor(model);
}

double collision_probability(const NetworkModel& model) {
  model.validate();
  return 1.0 - model.coverage * alone_factor(model);
}

std::vector<std::size_t> optimal_group_sizes(const NetworkModel& model) {
  model.validate();
  const auto upper = static_cast<std::size_t>(
      std::ceil(10.0 * static_cast<double>(model.cells) / model.coverage));
  NetworkModel m = model;
  std::vector<double> values(upper);
  for (std::size_t k = 1; k <= upper; ++k) {
    m.group_size = k;
    values[k - 1] = expected_singletons(m);
  }
  const double best = *std::max_element(values.begin(), values.end());
  // Neighbouring sizes can tie exactly, e.g. N/alpha and N/alpha - 1 for
  // integer N/alpha; rounding must not decide between them.
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k <= upper; ++k) {
    if (values[k - 1] >= best * (1.0 - kTieTolerance)) out.push_back(k);
  }
  return out;
}

std::size_t optimal_group_size(const NetworkModel& model) { return optimal_group_sizes(model).front(); }

ReuseMetrics rho_metrics(const NetworkModel& model, const OfdmParams& params) {
  model.validate();
  const double wt = static_cast<double>(params.subcarriers);
  const double taps = static_cast<double>(params.taps);
  const double m = static_cast<double>(params.pilot_tones);
  const double served = static_cast<double>(model.group_size) * model.coverage * alone_factor(model);
  ReuseMetrics r;
  r.rho_fq = wt * model.coverage / taps;
  r.rho_cs = wt * model.coverage / m;
  r.rho_ag_fq = wt * served / (taps + 1.0);
  r.rho_ag_cs = wt * served / (m + 1.0);
  return r;
}

double reuse_gain(double p_out, const NetworkModel& model, const OfdmParams& params) {
  if (!(p_out >= 0.0 && p_out < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "p_out must lie in [0, 1)");
  }
  NetworkModel m = model;
  m.coverage = 1.0 - p_out;
  m.validate();
  const double pilots = static_cast<double>(params.pilot_tones);
  const double kg = static_cast<double>(m.group_size);
  return pilots * kg / (pilots + 1.0) * alone_factor(m);
}

McEstimate collision_probability_mc(const NetworkModel& model, std::size_t trials,
                                    std::uint64_t seed, unsigned workers) {
  if (trials < 1) throw Error(ErrorCode::invalid_argument, "trials must be >= 1");
  model.validate();
  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  std::vector<Partial> partial(block_count(trials));
  for_each_block(trials, seed, workers,
                 [&](std::size_t b, std::size_t begin, std::size_t end, Rng& rng) {
                   std::vector<std::size_t> scratch;
                   Partial p;
                   for (std::size_t t = begin; t < end; ++t) {
                     const auto x = static_cast<double>(count_singletons(model, rng, scratch));
                     p.sum += x;
                     p.sum_sq += x * x;
                   }
                   partial[b] = p;
                 });
  Partial total;
  for (const Partial& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  const double n = static_cast<double>(trials);
  const double kg = static_cast<double>(model.group_size);
  const double mean = total.sum / n;
  double se = 0.0;
  if (trials > 1) {
    const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
    se = std::sqrt(var / n) / kg;
  }
  return {1.0 - mean / kg, se, trials};
}

}  // namespace mmtrain
