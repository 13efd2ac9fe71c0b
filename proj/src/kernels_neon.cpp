// NEON kernels, 2 doubles per lane. Mirrors the AVX2 variants.

#include <arm_neon.h>

#include "tgf/kernels.hpp"

namespace tgf::kernels {
namespace {

inline double hsum(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

double dot_(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_(const double* a, std::size_t n) { return dot_(a, a, n); }

void axpy_(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_(double alpha, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void sym_square_(const double* a11, const double* a12, const double* a22,
                 double* s11, double* s12, double* s22, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p = vld1q_f64(a11 + i);
    const float64x2_t q = vld1q_f64(a12 + i);
    const float64x2_t r = vld1q_f64(a22 + i);
    const float64x2_t qq = vmulq_f64(q, q);
    vst1q_f64(s11 + i, vfmaq_f64(qq, p, p));
    vst1q_f64(s12 + i, vmulq_f64(q, vaddq_f64(p, r)));
    vst1q_f64(s22 + i, vfmaq_f64(qq, r, r));
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
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p = vld1q_f64(a11 + i);
    const float64x2_t q = vld1q_f64(a12 + i);
    const float64x2_t r = vld1q_f64(a22 + i);
    float64x2_t m = vmulq_f64(p, p);
    m = vfmaq_f64(m, two, vmulq_f64(q, q));
    m = vfmaq_f64(m, r, r);
    vst1q_f64(s11 + i, vmulq_f64(m, p));
    vst1q_f64(s12 + i, vmulq_f64(m, q));
    vst1q_f64(s22 + i, vmulq_f64(m, r));
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
  const float64x2_t two = vdupq_n_f64(2.0);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a11 + i), vld1q_f64(b11 + i));
    acc = vfmaq_f64(acc, two, vmulq_f64(vld1q_f64(a12 + i), vld1q_f64(b12 + i)));
    acc = vfmaq_f64(acc, vld1q_f64(a22 + i), vld1q_f64(b22 + i));
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    s += a11[i] * b11[i] + 2.0 * a12[i] * b12[i] + a22[i] * b22[i];
  return s;
}

double sym_quartic_(const double* a11, const double* a12, const double* a22,
                    std::size_t n) {
  const float64x2_t two = vdupq_n_f64(2.0);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p = vld1q_f64(a11 + i);
    const float64x2_t q = vld1q_f64(a12 + i);
    const float64x2_t r = vld1q_f64(a22 + i);
    float64x2_t m = vmulq_f64(p, p);
    m = vfmaq_f64(m, two, vmulq_f64(q, q));
    m = vfmaq_f64(m, r, r);
    acc = vfmaq_f64(acc, m, m);
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
  const float64x2_t three = vdupq_n_f64(3.0);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p = vld1q_f64(a11 + i);
    const float64x2_t q = vld1q_f64(a12 + i);
    const float64x2_t r = vld1q_f64(a22 + i);
    const float64x2_t p3 = vmulq_f64(vmulq_f64(p, p), p);
    const float64x2_t r3 = vmulq_f64(vmulq_f64(r, r), r);
    const float64x2_t q2pr = vmulq_f64(vmulq_f64(q, q), vaddq_f64(p, r));
    acc = vaddq_f64(acc, vfmaq_f64(vaddq_f64(p3, r3), three, q2pr));
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
    for (std::size_t j = 0; j < n; ++j) Ci[j] = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      const float64x2_t a = vdupq_n_f64(A[i * k + l]);
      const double* Bl = B + l * n;
      std::size_t j = 0;
      for (; j + 2 <= n; j += 2)
        vst1q_f64(Ci + j, vfmaq_f64(vld1q_f64(Ci + j), a, vld1q_f64(Bl + j)));
      for (; j < n; ++j) Ci[j] += A[i * k + l] * Bl[j];
    }
  }
}

}  // namespace

const Table& neon_table() {
  static const Table t = {dot_, sum_sq_, axpy_, scal_, sym_square_, sym_cubic_,
                          sym_dot_, sym_quartic_, sym_trace3_, matmul_};
  return t;
}

}  // namespace tgf::kernels
