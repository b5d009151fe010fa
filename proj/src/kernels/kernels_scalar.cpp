#include "mmtrain/kernels.hpp"

namespace mmtrain::kernels::scalar {

double sum_abs2(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

void matvec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const cplx* row = a + r * cols;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      re += row[c].real() * x[c].real() - row[c].imag() * x[c].imag();
      im += row[c].real() * x[c].imag() + row[c].imag() * x[c].real();
    }
    y[r] = {re, im};
  }
}

void matvec_adjoint(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t c = 0; c < cols; ++c) y[c] = {0.0, 0.0};
  for (std::size_t r = 0; r < rows; ++r) {
    const cplx* row = a + r * cols;
    const double sr = x[r].real();
    const double si = x[r].imag();
    for (std::size_t c = 0; c < cols; ++c) {
      // conj(a) * s
      const double re = row[c].real() * sr + row[c].imag() * si;
      const double im = row[c].real() * si - row[c].imag() * sr;
      y[c] += cplx(re, im);
    }
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace mmtrain::kernels::scalar
