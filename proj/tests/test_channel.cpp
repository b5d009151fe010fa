#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "mmtrain/channel.hpp"
#include "mmtrain/error.hpp"

using namespace mmtrain;

TEST(OfdmParams, DefaultsAndValidation) {
  const OfdmParams p;
  EXPECT_EQ(p.pilot_tones, 5 * p.sparsity);
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(OfdmParams::with_sparsity(1000, 100, 6).pilot_tones, 30u);

  OfdmParams bad = p;
  bad.sparsity = 101;
  EXPECT_THROW(bad.validate(), Error);
  bad = p;
  bad.symbol_energy = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = p;
  bad.pilot_tones = 3;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(SensingMatrix, EntriesArePartialDftRows) {
  const SensingMatrix x({3, 17, 999}, 1000, 100);
  ASSERT_EQ(x.rows(), 3u);
  ASSERT_EQ(x.cols(), 100u);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t d = 0; d < 100; ++d) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(x.tones()[r] * d) / 1000.0;
      EXPECT_NEAR(std::abs(x(r, d) - std::polar(1.0, angle)), 0.0, 1e-12);
    }
  }
}

TEST(SensingMatrix, RejectsBadTones) {
  EXPECT_THROW(SensingMatrix({1, 1}, 1000, 100), Error);
  EXPECT_THROW(SensingMatrix({1000}, 1000, 100), Error);
  const SensingMatrix sorted({9, 2, 5}, 1000, 10);
  EXPECT_EQ(sorted.tones(), (ToneSet{2, 5, 9}));
}

TEST(SensingMatrix, ApplyAndAdjointAreTransposes) {
  Rng rng(4);
  const SensingMatrix x({1, 50, 333, 777}, 1000, 12);
  std::vector<cplx> h(12), r(4);
  for (auto& v : h) v = rng.complex_normal();
  for (auto& v : r) v = rng.complex_normal();
  const auto xh = x.apply(h);
  const auto xr = x.apply_adjoint(r);
  cplx lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < 4; ++i) lhs += std::conj(r[i]) * xh[i];
  for (std::size_t j = 0; j < 12; ++j) rhs += std::conj(xr[j]) * h[j];
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10);
}

TEST(Channel, SampleHasExactSparsity) {
  Rng rng(5);
  const OfdmParams p;
  for (int t = 0; t < 50; ++t) {
    const SparseChannel h = sample_channel(p, rng);
    ASSERT_EQ(h.taps.size(), p.taps);
    ASSERT_EQ(h.support.size(), p.sparsity);
    EXPECT_TRUE(std::is_sorted(h.support.begin(), h.support.end()));
    std::size_t nonzero = 0;
    for (const cplx& v : h.taps) nonzero += v != cplx{} ? 1 : 0;
    EXPECT_EQ(nonzero, p.sparsity);
  }
}

TEST(Channel, GainsHaveUnitVariance) {
  Rng rng(6);
  const OfdmParams p;
  double energy = 0;
  const int n = 20000;
  for (int t = 0; t < n; ++t) energy += sample_channel(p, rng).energy();
  EXPECT_NEAR(energy / n / static_cast<double>(p.sparsity), 1.0, 0.03);
}

TEST(PilotTones, RandomSelectionRespectsExclusions) {
  Rng rng(7);
  OfdmParams p;
  p.subcarriers = 30;
  p.taps = 10;
  p.sparsity = 2;
  p.pilot_tones = 10;
  std::vector<std::size_t> exclude;
  for (std::size_t t = 0; t < 20; ++t) exclude.push_back(t);
  const ToneSet tones = select_pilot_tones(p, exclude, rng);
  ASSERT_EQ(tones.size(), 10u);
  for (std::size_t t : tones) EXPECT_GE(t, 20u);
  exclude.push_back(25);
  EXPECT_THROW(select_pilot_tones(p, exclude, rng), Error);
}

TEST(PilotTones, FdeTonesEquallySpaced) {
  const ToneSet t = fde_pilot_tones(OfdmParams{});
  ASSERT_EQ(t.size(), 100u);
  for (std::size_t k = 0; k < 100; ++k) EXPECT_EQ(t[k], 10 * k);
}

TEST(Measurement, NoiselessIsScaledProjection) {
  Rng rng(8);
  OfdmParams p;
  p.symbol_energy = 4.0;
  const SparseChannel h = sample_channel(p, rng);
  const SensingMatrix x = build_sensing_matrix(select_pilot_tones(p, {}, rng), p);
  const auto y = synthesize_measurement(x, h, p, 0.0, rng);
  const auto ref = x.apply(h.taps);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(std::abs(y[i] - 2.0 * ref[i]), 0.0, 1e-12);

  SparseChannel short_h = h;
  short_h.taps.pop_back();
  EXPECT_THROW(synthesize_measurement(x, short_h, p, 0.0, rng), Error);
}
