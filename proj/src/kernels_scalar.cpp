// Scalar reference kernels. These are the ground truth the SIMD variants are
// tested against; keep them simple loops.

#include "tgf/kernels.hpp"

namespace tgf::kernels {
namespace {

double dot_(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

void axpy_(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void sym_square_(const double* a11, const double* a12, const double* a22,
                 double* s11, double* s12, double* s22, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double p = a11[i], q = a12[i], r = a22[i];
    s11[i] = p * p + q * q;
    s12[i] = q * (p + r);
    s22[i] = q * q + r * r;
  }
}

void sym_cubic_(const double* a11, const double* a12, const double* a22,
                double* s11, double* s12, double* s22, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double p = a11[i], q = a12[i], r = a22[i];
    const double m = p * p + 2.0 * q * q + r * r;
    s11[i] = m * p;
    s12[i] = m * q;
    s22[i] = m * r;
  }
}

double sym_dot_(const double* a11, const double* a12, const double* a22,
                const double* b11, const double* b12, const double* b22,
                std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += a11[i] * b11[i] + 2.0 * a12[i] * b12[i] + a22[i] * b22[i];
  return s;
}

double sym_quartic_(const double* a11, const double* a12, const double* a22,
                    std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = a11[i] * a11[i] + 2.0 * a12[i] * a12[i] + a22[i] * a22[i];
    s += m * m;
  }
  return s;
}

double sym_trace3_(const double* a11, const double* a12, const double* a22,
                   std::size_t n) {
  // tr(A^3) = p^3 + r^3 + 3 q^2 (p + r) for A = [[p,q],[q,r]]
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = a11[i], q = a12[i], r = a22[i];
    s += p * p * p + r * r * r + 3.0 * q * q * (p + r);
  }
  return s;
}

void matmul_(const double* A, const double* B, double* C,
             std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* Ci = C + i * n;
    for (std::size_t j = 0; j < n; ++j) Ci[j] = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      const double a = A[i * k + l];
      const double* Bl = B + l * n;
      for (std::size_t j = 0; j < n; ++j) Ci[j] += a * Bl[j];
    }
  }
}

}  // namespace

const Table& scalar_table() {
  static const Table t = {dot_, sum_sq_, axpy_, scal_, sym_square_, sym_cubic_,
                          sym_dot_, sym_quartic_, sym_trace3_, matmul_};
  return t;
}

}  // namespace tgf::kernels
