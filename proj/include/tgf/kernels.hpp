#pragma once
// SIMD-accelerated arithmetic kernels with scalar reference implementations.
//
// Every kernel exists in a scalar reference version and (where the target
// supports it) an AVX2 or NEON version. The active backend is chosen at
// runtime from CPU capabilities and can be overridden for testing; the
// scalar and vector variants are equivalence-tested against each other.
//
// Symmetric 2x2 tensor fields are passed as three separate component arrays
// (SoA): t11, t12, t22. The tensor dot uses the Frobenius pairing
// A:B = a11*b11 + 2*a12*b12 + a22*b22.

#include <cstddef>
#include <string>

namespace tgf::kernels {

enum class Backend { Scalar, Avx2, Neon };

Backend active();
bool supported(Backend b);
// Throws std::invalid_argument if the backend is not supported on this CPU.
void set_backend(Backend b);
const char* name(Backend b);

// BLAS-1 style
double dot(const double* a, const double* b, std::size_t n);
double sum_sq(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);

// Symmetric 2x2 tensor algebra, elementwise over n cells.
// S = A*A (matrix square)
void sym_square(const double* a11, const double* a12, const double* a22,
                double* s11, double* s12, double* s22, std::size_t n);
// S = |A|^2 A with |A|^2 = a11^2 + 2 a12^2 + a22^2
void sym_cubic(const double* a11, const double* a12, const double* a22,
               double* s11, double* s12, double* s22, std::size_t n);
// sum_i A_i : B_i
double sym_dot(const double* a11, const double* a12, const double* a22,
               const double* b11, const double* b12, const double* b22,
               std::size_t n);
// sum_i |A_i|^4
double sym_quartic(const double* a11, const double* a12, const double* a22,
                   std::size_t n);
// sum_i tr(A_i^3) = sum_i A_i^2 : A_i
double sym_trace3(const double* a11, const double* a12, const double* a22,
                  std::size_t n);

// Dense row-major matmul C(m,n) = A(m,k) * B(k,n). C may not alias A or B.
void matmul(const double* A, const double* B, double* C,
            std::size_t m, std::size_t k, std::size_t n);

// Vtable for one backend; filled in by the per-ISA translation units.
struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*sym_square)(const double*, const double*, const double*,
                     double*, double*, double*, std::size_t);
  void (*sym_cubic)(const double*, const double*, const double*,
                    double*, double*, double*, std::size_t);
  double (*sym_dot)(const double*, const double*, const double*,
                    const double*, const double*, const double*, std::size_t);
  double (*sym_quartic)(const double*, const double*, const double*, std::size_t);
  double (*sym_trace3)(const double*, const double*, const double*, std::size_t);
  void (*matmul)(const double*, const double*, double*,
                 std::size_t, std::size_t, std::size_t);
};

const Table& scalar_table();
#ifdef TGF_BUILD_AVX2
const Table& avx2_table();
#endif
#ifdef TGF_BUILD_NEON
const Table& neon_table();
#endif

}  // namespace tgf::kernels
