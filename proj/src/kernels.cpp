#include "fekit/kernels.hpp"

#include <stdexcept>

namespace fekit::kernels {

namespace scalar {

double dot(const double* x, const double* y, int n) {
  double s0 = 0.0, s1 = 0.0;
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
  }
  if (i < n) s0 += x[i] * y[i];
  return s0 + s1;
}

void axpy(double a, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void csr_spmv(const int* row_ptr, const int* col_ind, const double* values,
              int num_rows, const double* x, double* y) {
  for (int r = 0; r < num_rows; ++r) {
    double s = 0.0;
    for (int p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += values[p] * x[col_ind[p]];
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
      const double war = wi * ai[r];
      double* cr = c + static_cast<std::ptrdiff_t>(r) * n;
      for (int col = 0; col < n; ++col) cr[col] += war * bi[col];
    }
  }
}

}  // namespace scalar

namespace {

Isa pick_default() {
#if defined(FEKIT_HAVE_AVX2) && defined(__x86_64__)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa& current() {
  static Isa isa = pick_default();
  return isa;
}

}  // namespace

bool avx2_available() {
#if defined(FEKIT_HAVE_AVX2) && defined(__x86_64__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return current(); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available())
    throw std::runtime_error("kernels: AVX2 not available on this machine");
  current() = isa;
}

double dot(const double* x, const double* y, int n) {
#if defined(FEKIT_HAVE_AVX2) && defined(__x86_64__)
  if (current() == Isa::avx2) return avx2::dot(x, y, n);
#endif
  return scalar::dot(x, y, n);
}

void axpy(double a, const double* x, double* y, int n) {
#if defined(FEKIT_HAVE_AVX2) && defined(__x86_64__)
  if (current() == Isa::avx2) return avx2::axpy(a, x, y, n);
#endif
  scalar::axpy(a, x, y, n);
}

void csr_spmv(const int* row_ptr, const int* col_ind, const double* values,
              int num_rows, const double* x, double* y) {
#if defined(FEKIT_HAVE_AVX2) && defined(__x86_64__)
  if (current() == Isa::avx2) return avx2::csr_spmv(row_ptr, col_ind, values, num_rows, x, y);
#endif
  scalar::csr_spmv(row_ptr, col_ind, values, num_rows, x, y);
}

void weighted_gram(int k, int m, int n, const double* w, const double* a,
                   const double* b, double* c) {
#if defined(FEKIT_HAVE_AVX2) && defined(__x86_64__)
  if (current() == Isa::avx2) return avx2::weighted_gram(k, m, n, w, a, b, c);
#endif
  scalar::weighted_gram(k, m, n, w, a, b, c);
}

}  // namespace fekit::kernels
