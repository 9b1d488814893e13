#pragma once

#include <cstdint>

// Data-parallel arithmetic kernels used by the solvers and by element matrix
// accumulation. Each kernel has a scalar reference implementation and, on x86
// hardware that supports it, an AVX2/FMA variant. The active variant is picked
// once at runtime from CPUID; tests exercise both through the per-ISA
// namespaces and check they agree.

namespace fekit::kernels {

enum class Isa { scalar, avx2 };

/// Variant selected for the top-level entry points.
Isa active_isa();

/// Override the runtime selection (mostly for tests and benchmarking).
/// Requesting an unsupported ISA throws.
void force_isa(Isa isa);

double dot(const double* x, const double* y, int n);
void axpy(double a, const double* x, double* y, int n);

/// y = A*x for a CSR matrix with int row pointers/column indices.
void csr_spmv(const int* row_ptr, const int* col_ind, const double* values,
              int num_rows, const double* x, double* y);

/// C += sum_i w[i] * A[i,:]^T B[i,:] with A of shape [k x m], B of shape
/// [k x n], C of shape [m x n], all row major. This is the inner contraction
/// of FE element matrices: i runs over (quadrature point x component) pairs.
void weighted_gram(int k, int m, int n, const double* w, const double* a,
                   const double* b, double* c);

namespace scalar {
double dot(const double* x, const double* y, int n);
void axpy(double a, const double* x, double* y, int n);
void csr_spmv(const int* row_ptr, const int* col_ind, const double* values,
              int num_rows, const double* x, double* y);
void weighted_gram(int k, int m, int n, const double* w, const double* a,
                   const double* b, double* c);
}  // namespace scalar

#ifdef __x86_64__
namespace avx2 {
double dot(const double* x, const double* y, int n);
void axpy(double a, const double* x, double* y, int n);
void csr_spmv(const int* row_ptr, const int* col_ind, const double* values,
              int num_rows, const double* x, double* y);
void weighted_gram(int k, int m, int n, const double* w, const double* a,
                   const double* b, double* c);
}  // namespace avx2
#endif

/// True when the AVX2 variants are compiled in and the CPU supports them.
bool avx2_available();

}  // namespace fekit::kernels
