// AVX2 + FMA kernels, 4 doubles per lane. Remainders fall back to scalar tails.
// This translation unit is compiled with -mavx2 -mfma; it must only be
// dispatched to after a runtime CPU check.

#include <immintrin.h>

#include "tgf/kernels.hpp"

namespace tgf::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_(const double* a, std::size_t n) { return dot_(a, a, n); }

void axpy_(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void sym_square_(const double* a11, const double* a12, const double* a22,
                 double* s11, double* s12, double* s22, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_loadu_pd(a11 + i);
    const __m256d q = _mm256_loadu_pd(a12 + i);
    const __m256d r = _mm256_loadu_pd(a22 + i);
    const __m256d qq = _mm256_mul_pd(q, q);
    _mm256_storeu_pd(s11 + i, _mm256_fmadd_pd(p, p, qq));
    _mm256_storeu_pd(s12 + i, _mm256_mul_pd(q, _mm256_add_pd(p, r)));
    _mm256_storeu_pd(s22 + i, _mm256_fmadd_pd(r, r, qq));
  }
  for (; i < n; ++i) {
    const double p = a11[i], q = a12[i], r = a22[i];
    s11[i] = p * p + q * q;
    s12[i] = q * (p + r);
    s22[i] = q * q + r * r;
  }
}

void sym_cubic_(const double* a11, const double* a12, const double* a22,
                double* s11, double* s12, double* s22, std::size_t n) {
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_loadu_pd(a11 + i);
    const __m256d q = _mm256_loadu_pd(a12 + i);
    const __m256d r = _mm256_loadu_pd(a22 + i);
    __m256d m = _mm256_mul_pd(p, p);
    m = _mm256_fmadd_pd(two, _mm256_mul_pd(q, q), m);
    m = _mm256_fmadd_pd(r, r, m);
    _mm256_storeu_pd(s11 + i, _mm256_mul_pd(m, p));
    _mm256_storeu_pd(s12 + i, _mm256_mul_pd(m, q));
    _mm256_storeu_pd(s22 + i, _mm256_mul_pd(m, r));
  }
  for (; i < n; ++i) {
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
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a11 + i), _mm256_loadu_pd(b11 + i), acc);
    const __m256d qq =
        _mm256_mul_pd(_mm256_loadu_pd(a12 + i), _mm256_loadu_pd(b12 + i));
    acc = _mm256_fmadd_pd(two, qq, acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a22 + i), _mm256_loadu_pd(b22 + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    s += a11[i] * b11[i] + 2.0 * a12[i] * b12[i] + a22[i] * b22[i];
  return s;
}

double sym_quartic_(const double* a11, const double* a12, const double* a22,
                    std::size_t n) {
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_loadu_pd(a11 + i);
    const __m256d q = _mm256_loadu_pd(a12 + i);
    const __m256d r = _mm256_loadu_pd(a22 + i);
    __m256d m = _mm256_mul_pd(p, p);
    m = _mm256_fmadd_pd(two, _mm256_mul_pd(q, q), m);
    m = _mm256_fmadd_pd(r, r, m);
    acc = _mm256_fmadd_pd(m, m, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double m = a11[i] * a11[i] + 2.0 * a12[i] * a12[i] + a22[i] * a22[i];
    s += m * m;
  }
  return s;
}

double sym_trace3_(const double* a11, const double* a12, const double* a22,
                   std::size_t n) {
  const __m256d three = _mm256_set1_pd(3.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_loadu_pd(a11 + i);
    const __m256d q = _mm256_loadu_pd(a12 + i);
    const __m256d r = _mm256_loadu_pd(a22 + i);
    const __m256d p3 = _mm256_mul_pd(_mm256_mul_pd(p, p), p);
    const __m256d r3 = _mm256_mul_pd(_mm256_mul_pd(r, r), r);
    const __m256d q2pr =
        _mm256_mul_pd(_mm256_mul_pd(q, q), _mm256_add_pd(p, r));
    __m256d t = _mm256_add_pd(p3, r3);
    t = _mm256_fmadd_pd(three, q2pr, t);
    acc = _mm256_add_pd(acc, t);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double p = a11[i], q = a12[i], r = a22[i];
    s += p * p * p + r * r * r + 3.0 * q * q * (p + r);
  }
  return s;
}

void matmul_(const double* A, const double* B, double* C,
             std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* Ci = C + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) _mm256_storeu_pd(Ci + j, _mm256_setzero_pd());
    for (; j < n; ++j) Ci[j] = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      const __m256d a = _mm256_set1_pd(A[i * k + l]);
      const double* Bl = B + l * n;
      j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d c = _mm256_loadu_pd(Ci + j);
        c = _mm256_fmadd_pd(a, _mm256_loadu_pd(Bl + j), c);
        _mm256_storeu_pd(Ci + j, c);
      }
      for (; j < n; ++j) Ci[j] += A[i * k + l] * Bl[j];
    }
  }
}

}  // namespace

const Table& avx2_table() {
  static const Table t = {dot_, sum_sq_, axpy_, scal_, sym_square_, sym_cubic_,
                          sym_dot_, sym_quartic_, sym_trace3_, matmul_};
  return t;
}

}  // namespace tgf::kernels
