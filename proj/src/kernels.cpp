// Runtime backend selection and dispatch.

#include "tgf/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace tgf::kernels {
namespace {

Backend detect() {
#ifdef TGF_BUILD_AVX2
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::Avx2;
#endif
#ifdef TGF_BUILD_NEON
  return Backend::Neon;
#endif
  return Backend::Scalar;
}

const Table* table_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &scalar_table();
#ifdef TGF_BUILD_AVX2
    case Backend::Avx2:
      return &avx2_table();
#endif
#ifdef TGF_BUILD_NEON
    case Backend::Neon:
      return &neon_table();
#endif
    default:
      return nullptr;
  }
}

std::atomic<const Table*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

const Table& active_table() {
  const Table* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    Backend b = detect();
    t = table_for(b);
    g_backend.store(b, std::memory_order_relaxed);
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace

Backend active() {
  active_table();
  return g_backend.load(std::memory_order_relaxed);
}

bool supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#ifdef TGF_BUILD_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#ifdef TGF_BUILD_NEON
      return true;
#else
      return false;
#endif
  }
  return false;
}

void set_backend(Backend b) {
  if (!supported(b))
    throw std::invalid_argument(std::string("kernel backend not supported on this CPU: ") + name(b));
  g_backend.store(b, std::memory_order_relaxed);
  g_active.store(table_for(b), std::memory_order_release);
}

const char* name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "?";
}

double dot(const double* a, const double* b, std::size_t n) { return active_table().dot(a, b, n); }
double sum_sq(const double* a, std::size_t n) { return active_table().sum_sq(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { active_table().axpy(alpha, x, y, n); }
void scal(double alpha, double* x, std::size_t n) { active_table().scal(alpha, x, n); }

void sym_square(const double* a11, const double* a12, const double* a22,
                double* s11, double* s12, double* s22, std::size_t n) {
  active_table().sym_square(a11, a12, a22, s11, s12, s22, n);
}
void sym_cubic(const double* a11, const double* a12, const double* a22,
               double* s11, double* s12, double* s22, std::size_t n) {
  active_table().sym_cubic(a11, a12, a22, s11, s12, s22, n);
}
double sym_dot(const double* a11, const double* a12, const double* a22,
               const double* b11, const double* b12, const double* b22,
               std::size_t n) {
  return active_table().sym_dot(a11, a12, a22, b11, b12, b22, n);
}
double sym_quartic(const double* a11, const double* a12, const double* a22, std::size_t n) {
  return active_table().sym_quartic(a11, a12, a22, n);
}
double sym_trace3(const double* a11, const double* a12, const double* a22, std::size_t n) {
  return active_table().sym_trace3(a11, a12, a22, n);
}
void matmul(const double* A, const double* B, double* C,
            std::size_t m, std::size_t k, std::size_t n) {
  active_table().matmul(A, B, C, m, k, n);
}

}  // namespace tgf::kernels
