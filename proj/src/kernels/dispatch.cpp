#include <atomic>
#include <cstdlib>
#include <string_view>

#include "mmtrain/error.hpp"
#include "mmtrain/kernels.hpp"

namespace mmtrain::kernels {

namespace {

struct Table {
  Isa isa;
  double (*sum_abs2)(const cplx*, std::size_t);
  void (*matvec)(const cplx*, std::size_t, std::size_t, const cplx*, cplx*);
  void (*matvec_adjoint)(const cplx*, std::size_t, std::size_t, const cplx*, cplx*);
  void (*axpy)(double, const double*, double*, std::size_t);
};

constexpr Table kScalar{Isa::scalar, scalar::sum_abs2, scalar::matvec, scalar::matvec_adjoint,
                        scalar::axpy};
constexpr Table kAvx2{Isa::avx2, avx2::sum_abs2, avx2::matvec, avx2::matvec_adjoint, avx2::axpy};

bool cpu_has_avx2() noexcept {
#if defined(MMTRAIN_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* startup_table() noexcept {
  if (const char* env = std::getenv("MMTRAIN_ISA")) {
    if (std::string_view(env) == "scalar") return &kScalar;
  }
  return cpu_has_avx2() ? &kAvx2 : &kScalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> table{startup_table()};
  return table;
}

const Table& table() { return *current().load(std::memory_order_relaxed); }

}  // namespace

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

bool isa_supported(Isa isa) noexcept { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() noexcept { return table().isa; }

void force_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorCode::invalid_argument, std::string("ISA not available: ") + to_string(isa));
  }
  current().store(isa == Isa::avx2 ? &kAvx2 : &kScalar);
}

void reset_isa() noexcept { current().store(startup_table()); }

double sum_abs2(std::span<const cplx> x) { return table().sum_abs2(x.data(), x.size()); }

void matvec(std::span<const cplx> a, std::size_t rows, std::size_t cols,
            std::span<const cplx> x, std::span<cplx> y) {
  if (a.size() != rows * cols || x.size() != cols || y.size() != rows) {
    throw Error(ErrorCode::dimension_mismatch, "matvec operand sizes");
  }
  table().matvec(a.data(), rows, cols, x.data(), y.data());
}

void matvec_adjoint(std::span<const cplx> a, std::size_t rows, std::size_t cols,
                    std::span<const cplx> x, std::span<cplx> y) {
  if (a.size() != rows * cols || x.size() != rows || y.size() != cols) {
    throw Error(ErrorCode::dimension_mismatch, "matvec_adjoint operand sizes");
  }
  table().matvec_adjoint(a.data(), rows, cols, x.data(), y.data());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::dimension_mismatch, "axpy operand sizes");
  table().axpy(alpha, x.data(), y.data(), x.size());
}

#ifndef MMTRAIN_HAVE_AVX2
namespace avx2 {
[[noreturn]] static void unavailable() {
  throw Error(ErrorCode::invalid_argument, "AVX2 kernels not built");
}
double sum_abs2(const cplx*, std::size_t) { unavailable(); }
void matvec(const cplx*, std::size_t, std::size_t, const cplx*, cplx*) { unavailable(); }
void matvec_adjoint(const cplx*, std::size_t, std::size_t, const cplx*, cplx*) { unavailable(); }
void axpy(double, const double*, double*, std::size_t) { unavailable(); }
}  // namespace avx2
#endif

}  // namespace mmtrain::kernels
