// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; callers must check avx2_available() before dispatching here.

#include <immintrin.h>

#include "fekit/kernels.hpp"

namespace fekit::kernels::avx2 {

double dot(const double* x, const double* y, int n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  acc0 = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, int n) {
  const __m256d va = _mm256_set1_pd(a);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void csr_spmv(const int* row_ptr, const int* col_ind, const double* values,
              int num_rows, const double* x, double* y) {
  for (int r = 0; r < num_rows; ++r) {
    const int begin = row_ptr[r];
    const int end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    int p = begin;
    for (; p + 4 <= end; p += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col_ind + p));
      const __m256d vx = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(values + p), vx, acc);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; p < end; ++p) s += values[p] * x[col_ind[p]];
    y[r] = s;
  }
}

void weighted_gram(int k, int m, int n, const double* w, const double* a,
                   const double* b, double* c) {
  for (int i = 0; i < k; ++i) {
    const double* ai = a + static_cast<std::ptrdiff_t>(i) * m;
    const double* bi = b + static_cast<std::ptrdiff_t>(i) * n;
    const double wi = w[i];
    for (int r = 0; r < m; ++r) {
      const __m256d war = _mm256_set1_pd(wi * ai[r]);
      double* cr = c + static_cast<std::ptrdiff_t>(r) * n;
      int col = 0;
      for (; col + 4 <= n; col += 4) {
        __m256d vc = _mm256_loadu_pd(cr + col);
        vc = _mm256_fmadd_pd(war, _mm256_loadu_pd(bi + col), vc);
        _mm256_storeu_pd(cr + col, vc);
      }
      const double s = wi * ai[r];
      for (; col < n; ++col) cr[col] += s * bi[col];
    }
  }
}

}  // namespace fekit::kernels::avx2
