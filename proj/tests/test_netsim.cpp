#include <gtest/gtest.h>

#include <cmath>

#include "mmtrain/error.hpp"
#include "mmtrain/netsim.hpp"

using namespace mmtrain;

namespace {

double singletons_oracle(double n, double k, double a) { return a * k * std::pow(1 - a / n, k - 1); }

}  // namespace

TEST(Netsim, ModelValidation) {
  EXPECT_THROW((NetworkModel{0, 1.0, 4}.validate()), Error);
  EXPECT_THROW((NetworkModel{4, 0.0, 4}.validate()), Error);
  EXPECT_THROW((NetworkModel{4, 1.1, 4}.validate()), Error);
  EXPECT_THROW((NetworkModel{4, 1.0, 0}.validate()), Error);
  EXPECT_DOUBLE_EQ(NetworkModel::from_outage(16, 0.3, 4).coverage, 0.7);
}

TEST(Netsim, PlacementSingleCell) {
  Rng rng(1);
  const PlacementOutcome o = place_ues(NetworkModel{1, 1.0, 1}, rng);
  ASSERT_EQ(o.cell_of_ue.size(), 1u);
  EXPECT_EQ(o.cell_of_ue[0], 0u);
  EXPECT_EQ(o.singleton_count, 1u);
}

TEST(Netsim, PlacementCountsAgree) {
  Rng a(2), b(2);
  std::vector<std::size_t> scratch;
  const NetworkModel m{16, 0.7, 12};
  for (int t = 0; t < 200; ++t) {
    const PlacementOutcome o = place_ues(m, a);
    EXPECT_LE(o.singleton_count, 12u);
    EXPECT_EQ(count_singletons(m, b, scratch), o.singleton_count);
  }
}

TEST(Netsim, AnalyticFormulas) {
  for (std::size_t n : {4u, 16u, 64u}) {
    for (std::size_t k : {1u, 4u, 16u, 64u}) {
      for (double a : {0.5, 0.7, 1.0}) {
        const NetworkModel m{n, a, k};
        const double e = singletons_oracle(n, k, a);
        EXPECT_NEAR(expected_singletons(m), e, 1e-12 * (1 + e));
        EXPECT_NEAR(collision_probability(m), 1 - e / static_cast<double>(k), 1e-12);
      }
    }
  }
  EXPECT_DOUBLE_EQ(expected_singletons(NetworkModel{16, 0.7, 1}), 0.7);
}

TEST(Netsim, SingletonMeanWithinThreeSigma) {
  const NetworkModel m{16, 0.7, 12};
  const McEstimate p = collision_probability_mc(m, 100000, 5);
  EXPECT_NEAR(p.value, collision_probability(m), 3 * p.standard_error);
  EXPECT_NEAR(expected_singletons(m), 0.7 * 12 * std::pow(1 - 0.7 / 16, 11), 1e-12);
}

TEST(Netsim, DeterministicTrivialCase) {
  const McEstimate p = collision_probability_mc(NetworkModel{1, 1.0, 1}, 1, 3);
  EXPECT_EQ(p.value, 0.0);
}

TEST(Netsim, MonteCarloIndependentOfWorkers) {
  const NetworkModel m{16, 1.0, 16};
  const McEstimate a = collision_probability_mc(m, 30000, 9, 1);
  const McEstimate b = collision_probability_mc(m, 30000, 9, 4);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(Netsim, OptimalGroupSizeTiesAndApproximation) {
  // K (1 - 1/N)^(K-1) takes equal values at K = N - 1 and K = N
  const auto at_full = optimal_group_sizes(NetworkModel{16, 1.0, 1});
  EXPECT_EQ(at_full, (std::vector<std::size_t>{15, 16}));
  EXPECT_EQ(optimal_group_size(NetworkModel{16, 1.0, 1}), 15u);
  const auto partial = optimal_group_sizes(NetworkModel{16, 0.7, 1});
  ASSERT_EQ(partial.size(), 1u);
  EXPECT_EQ(partial[0], 22u);  // continuous optimum -1 / ln(1 - 0.7/16) = 22.36
}

TEST(Netsim, SingletonCurveUnimodal) {
  for (double a : {0.5, 0.7, 1.0}) {
    const NetworkModel base{16, a, 1};
    const auto upper = static_cast<std::size_t>(std::ceil(160 / a));
    int direction_changes = 0;
    bool rising = true;
    NetworkModel m = base;
    for (std::size_t k = 1; k < upper; ++k) {
      m.group_size = k;
      const double v0 = expected_singletons(m);
      m.group_size = k + 1;
      const double v1 = expected_singletons(m);
      if (std::abs(v1 - v0) <= kTieTolerance * v0) continue;
      if (rising && v1 < v0) {
        rising = false;
        ++direction_changes;
      } else if (!rising && v1 > v0) {
        ++direction_changes;
      }
    }
    EXPECT_EQ(direction_changes, 1) << a;
  }
}

TEST(Netsim, ReuseMetrics) {
  const OfdmParams p;
  const ReuseMetrics full = rho_metrics(NetworkModel{16, 1.0, 16}, p);
  EXPECT_DOUBLE_EQ(full.rho_fq, 10.0);
  EXPECT_DOUBLE_EQ(full.rho_cs, 50.0);
  const double r = std::pow(15.0 / 16.0, 15);
  EXPECT_NEAR(full.rho_ag_cs, 1000.0 * 16 / 21 * r, 1e-9);
  EXPECT_NEAR(full.rho_ag_fq, 1000.0 * 16 / 101 * r, 1e-9);
  const ReuseMetrics outage = rho_metrics(NetworkModel{16, 0.7, 16}, p);
  EXPECT_DOUBLE_EQ(outage.rho_cs, 35.0);
  EXPECT_DOUBLE_EQ(outage.rho_fq, 7.0);
  EXPECT_EQ(group_count(1000, 21), 47u);
}

TEST(Netsim, ReuseGainIncreasing) {
  const OfdmParams p;
  const NetworkModel m{16, 1.0, 16};
  double prev = 0;
  for (double q : {0.0, 0.1, 0.2, 0.3}) {
    const double g = reuse_gain(q, m, p);
    const double oracle = 20.0 * 16 / 21 * std::pow(1 - (1 - q) / 16, 15);
    EXPECT_NEAR(g, oracle, 1e-12);
    EXPECT_GT(g, prev);
    prev = g;
  }
}
