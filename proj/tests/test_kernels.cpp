#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mmtrain/error.hpp"
#include "mmtrain/kernels.hpp"
#include "mmtrain/rng.hpp"

namespace k = mmtrain::kernels;
using mmtrain::Rng;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_complex(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = rng.complex_normal(2.0);
  return v;
}

void expect_close(cplx a, cplx b, double scale) {
  EXPECT_NEAR(a.real(), b.real(), 1e-12 * scale);
  EXPECT_NEAR(a.imag(), b.imag(), 1e-12 * scale);
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!k::isa_supported(k::Isa::avx2)) GTEST_SKIP() << "AVX2 variant unavailable";
  }
};

}  // namespace

TEST_F(KernelEquivalence, SumAbs2AllLengths) {
  Rng rng(11);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto x = random_complex(n, rng);
    const double s = k::scalar::sum_abs2(x.data(), n);
    EXPECT_NEAR(k::avx2::sum_abs2(x.data(), n), s, 1e-12 * (1.0 + s)) << "n=" << n;
  }
}

TEST_F(KernelEquivalence, MatvecAndAdjointOddShapes) {
  Rng rng(12);
  for (std::size_t rows : {1u, 3u, 20u, 33u}) {
    for (std::size_t cols : {1u, 2u, 5u, 100u, 101u}) {
      const auto a = random_complex(rows * cols, rng);
      const auto x = random_complex(cols, rng);
      const auto r = random_complex(rows, rng);
      std::vector<cplx> y1(rows), y2(rows), z1(cols), z2(cols);
      k::scalar::matvec(a.data(), rows, cols, x.data(), y1.data());
      k::avx2::matvec(a.data(), rows, cols, x.data(), y2.data());
      k::scalar::matvec_adjoint(a.data(), rows, cols, r.data(), z1.data());
      k::avx2::matvec_adjoint(a.data(), rows, cols, r.data(), z2.data());
      for (std::size_t i = 0; i < rows; ++i) expect_close(y1[i], y2[i], 10.0 * cols);
      for (std::size_t j = 0; j < cols; ++j) expect_close(z1[j], z2[j], 10.0 * rows);
    }
  }
}

TEST_F(KernelEquivalence, AxpyIsExactPerElement) {
  Rng rng(13);
  for (std::size_t n = 0; n <= 37; ++n) {
    std::vector<double> x(n), y1(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y1[i] = rng.normal();
    }
    auto y2 = y1;
    k::scalar::axpy(-0.37, x.data(), y1.data(), n);
    k::avx2::axpy(-0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15 * (1 + std::abs(y1[i])));
  }
}

TEST(KernelDispatch, ScalarReferenceMatchesNaiveLoops) {
  const std::vector<cplx> a{{1, 2}, {3, -1}, {0, 1}, {-2, 0}, {1, 1}, {0.5, 0}};  // 2 x 3
  const std::vector<cplx> x{{1, 0}, {0, 1}, {2, -1}};
  std::vector<cplx> y(2);
  k::force_isa(k::Isa::scalar);
  k::matvec(a, 2, 3, x, y);
  for (std::size_t i = 0; i < 2; ++i) {
    cplx ref = 0;
    for (std::size_t j = 0; j < 3; ++j) ref += a[i * 3 + j] * x[j];
    expect_close(y[i], ref, 1.0);
  }
  std::vector<cplx> z(3);
  k::matvec_adjoint(a, 2, 3, y, z);
  for (std::size_t j = 0; j < 3; ++j) {
    cplx ref = 0;
    for (std::size_t i = 0; i < 2; ++i) ref += std::conj(a[i * 3 + j]) * y[i];
    expect_close(z[j], ref, 1.0);
  }
  EXPECT_DOUBLE_EQ(k::sum_abs2(x), 1 + 1 + 5);
  k::reset_isa();
}

TEST(KernelDispatch, ForceAndReset) {
  const auto start = k::active_isa();
  k::force_isa(k::Isa::scalar);
  EXPECT_EQ(k::active_isa(), k::Isa::scalar);
  if (k::isa_supported(k::Isa::avx2)) {
    k::force_isa(k::Isa::avx2);
    EXPECT_EQ(k::active_isa(), k::Isa::avx2);
  } else {
    EXPECT_THROW(k::force_isa(k::Isa::avx2), mmtrain::Error);
  }
  k::reset_isa();
  EXPECT_EQ(k::active_isa(), start);
  EXPECT_STREQ(k::to_string(k::Isa::scalar), "scalar");
}

TEST(KernelDispatch, SizeChecks) {
  std::vector<cplx> a(6), x(2), y(2);
  EXPECT_THROW(k::matvec(a, 2, 3, x, y), mmtrain::Error);
  std::vector<double> u(3), v(4);
  EXPECT_THROW(k::axpy(1.0, u, v), mmtrain::Error);
}
