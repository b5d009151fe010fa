#include <gtest/gtest.h>

#include <boost/math/distributions/gamma.hpp>
#include <cmath>

#include "mmtrain/detection.hpp"
#include "mmtrain/error.hpp"

using namespace mmtrain;

namespace {

DetectionConfig config(std::size_t m, double gp) {
  DetectionConfig c;
  c.antennas = m;
  c.pathloss_power = gp;
  return c;
}

}  // namespace

TEST(Detection, EnergyMetricIsMeanPower) {
  const std::vector<cplx> y{{1, 1}, {0, 2}, {3, 0}};
  EXPECT_DOUBLE_EQ(energy_metric(y), (2.0 + 4.0 + 9.0) / 3.0);
  EXPECT_THROW(energy_metric(std::vector<cplx>{}), Error);
}

TEST(Detection, EqualPriorThresholdMatchesClosedForm) {
  // Gamma shapes agree, so equating the two densities gives
  // eta = (1 + gP) ln(1 + gP) / gP independently of M.
  for (std::size_t m : {1u, 8u, 64u, 128u}) {
    for (double gp : {0.5, 2.0, 10.0}) {
      const double expected = (1 + gp) * std::log1p(gp) / gp;
      EXPECT_NEAR(optimal_threshold(config(m, gp)), expected, 1e-8) << m << " " << gp;
    }
  }
}

TEST(Detection, ThresholdLiesBetweenMeans) {
  auto c = config(32, 3.0);
  c.active_prior = 0.2;
  const double eta = optimal_threshold(c);
  EXPECT_GT(eta, 1.0);
  EXPECT_LT(eta, 4.0);
  EXPECT_GT(eta, optimal_threshold(config(32, 3.0)));  // rarer activity raises the bar
}

TEST(Detection, ErrorProbabilityAgainstBoostDistributions) {
  const auto c = config(16, 2.0);
  const double eta = 1.7;
  const boost::math::gamma_distribution<> idle(16, 1.0 / 16), busy(16, 3.0 / 16);
  const double ref = 0.5 * cdf(busy, eta) + 0.5 * cdf(complement(idle, eta));
  EXPECT_NEAR(error_probability(c, eta), ref, 1e-14);
}

TEST(Detection, OptimalThresholdMinimisesModelError) {
  const auto c = config(64, 10.0);
  const double eta = optimal_threshold(c);
  const double best = error_probability(c, eta);
  for (double d : {-1e-3, 1e-3, -0.1, 0.1}) EXPECT_LE(best, error_probability(c, eta + d));
}

TEST(Detection, NoSignalMeansCoinFlip) {
  const auto c = config(64, 0.0);
  EXPECT_THROW(optimal_threshold(c), Error);
  EXPECT_DOUBLE_EQ(effective_threshold(c), 1.0);
  const McEstimate pe = error_probability_mc(c, 20000, 3);
  EXPECT_NEAR(pe.value, 0.5, 3 * pe.standard_error);
}

TEST(Detection, MonteCarloMatchesModel) {
  const auto c = config(16, 1.0);
  const double eta = effective_threshold(c);
  const McEstimate pe = error_probability_mc(c, 50000, 9);
  EXPECT_NEAR(pe.value, error_probability(c, eta), 4 * pe.standard_error);
}

TEST(Detection, MonteCarloNonincreasingInAntennas) {
  double prev = 1.0, prev_se = 0.0;
  for (std::size_t m : {8u, 16u, 32u, 64u}) {
    const McEstimate pe = error_probability_mc(config(m, 2.0), 20000, 21);
    EXPECT_LE(pe.value, prev + 2 * (pe.standard_error + prev_se));
    prev = pe.value;
    prev_se = pe.standard_error;
  }
}

TEST(Detection, MonteCarloDeterministicAcrossWorkers) {
  const auto c = config(8, 1.0);
  const McEstimate a = error_probability_mc(c, 5000, 77, 1);
  const McEstimate b = error_probability_mc(c, 5000, 77, 3);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(Detection, ExplicitThresholdValidated) {
  auto c = config(8, 1.0);
  c.threshold = 1.5;
  EXPECT_DOUBLE_EQ(effective_threshold(c), 1.5);
  c.threshold = 2.5;
  EXPECT_THROW(c.validate(), Error);
  c = config(8, -1.0);
  EXPECT_THROW(c.validate(), Error);
  c = config(0, 1.0);
  EXPECT_THROW(c.validate(), Error);
}

TEST(Detection, NetworkThresholdIsWeakestUser) {
  const std::vector<double> powers{10.0, 2.0, 5.0};
  EXPECT_NEAR(min_threshold_for_network(powers, 64), optimal_threshold(config(64, 2.0)), 1e-12);
  EXPECT_THROW(min_threshold_for_network(std::vector<double>{}, 64), Error);
  // With a tight cap only the strong users qualify.
  const double capped = min_threshold_for_network(powers, 16, 1e-2);
  EXPECT_NEAR(capped, optimal_threshold(config(16, 5.0)), 1e-12);
  EXPECT_THROW(min_threshold_for_network(powers, 16, 1e-300), Error);
}
