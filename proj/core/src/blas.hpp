#pragma once

#include <cblas.h>

#include <complex>
#include <mutex>

namespace emkm::detail {

/// The library parallelizes over imaging points itself; BLAS stays single
/// threaded so that partitioning never changes floating-point results.
inline void pin_blas_threads() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

/// C = op(A) op(B) (+ C when accumulate), row-major, complex double.
/// op is identity or plain transpose (never conjugated).
inline void zgemm(bool transpose_a, bool transpose_b, int m, int n, int k, const std::complex<double>* a, int lda,
                  const std::complex<double>* b, int ldb, std::complex<double>* c, int ldc, bool accumulate) {
  pin_blas_threads();
  const std::complex<double> alpha(1.0, 0.0);
  const std::complex<double> beta(accumulate ? 1.0 : 0.0, 0.0);
  cblas_zgemm(CblasRowMajor, transpose_a ? CblasTrans : CblasNoTrans, transpose_b ? CblasTrans : CblasNoTrans, m, n,
              k, &alpha, a, lda, b, ldb, &beta, c, ldc);
}

}  // namespace emkm::detail
