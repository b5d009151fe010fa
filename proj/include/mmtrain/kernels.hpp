#pragma once

// Data-parallel inner loops shared by the simulator. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2/FMA variant. The
// variant is chosen once at startup from CPUID; set MMTRAIN_ISA=scalar in the
// environment (or call force_isa) to pin the reference path.
//
// Complex arrays are std::complex<double>, i.e. interleaved (re, im) pairs.
// Matrices are dense row-major.

#include <complex>
#include <cstddef>
#include <span>

namespace mmtrain::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Throws mmtrain::Error if `isa` is not available on this build/CPU.
void force_isa(Isa isa);
/// Back to the startup choice.
void reset_isa() noexcept;

/// sum_i |x_i|^2
double sum_abs2(std::span<const cplx> x);

/// y = A x, A is rows x cols.
void matvec(std::span<const cplx> a, std::size_t rows, std::size_t cols,
            std::span<const cplx> x, std::span<cplx> y);

/// y = A^H x, A is rows x cols (so x has `rows` entries and y has `cols`).
void matvec_adjoint(std::span<const cplx> a, std::size_t rows, std::size_t cols,
                    std::span<const cplx> x, std::span<cplx> y);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Per-ISA entry points, exposed for equivalence tests and benchmarks. They
// skip argument validation; the dispatching versions above check sizes.
namespace scalar {
double sum_abs2(const cplx* x, std::size_t n);
void matvec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
void matvec_adjoint(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
double sum_abs2(const cplx* x, std::size_t n);
void matvec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
void matvec_adjoint(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2

}  // namespace mmtrain::kernels
