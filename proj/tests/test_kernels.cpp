#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tgf/kernels.hpp"
#include "tgf/rng.hpp"

using namespace tgf;
namespace k = tgf::kernels;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = scale * rng.next_normal();
  return v;
}

// All backends available on this machine, scalar first.
std::vector<k::Backend> backends() {
  std::vector<k::Backend> b{k::Backend::Scalar};
  if (k::supported(k::Backend::Avx2)) b.push_back(k::Backend::Avx2);
  if (k::supported(k::Backend::Neon)) b.push_back(k::Backend::Neon);
  return b;
}

struct BackendGuard {
  k::Backend saved;
  BackendGuard() : saved(k::active()) {}
  ~BackendGuard() { k::set_backend(saved); }
};

}  // namespace

TEST_CASE("dispatch reports a supported backend") {
  CHECK(k::supported(k::active()));
  CHECK(k::supported(k::Backend::Scalar));
  CHECK_THROWS(k::set_backend(static_cast<k::Backend>(42)));
}

TEST_CASE("simd variants match the scalar reference") {
  BackendGuard guard;
  Rng rng(20240817);
  // sizes chosen to exercise full lanes plus scalar tails
  for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 64u, 1001u}) {
    auto a = random_vec(rng, n), b = random_vec(rng, n);
    auto a12 = random_vec(rng, n), a22 = random_vec(rng, n);
    auto b12 = random_vec(rng, n), b22 = random_vec(rng, n);

    k::set_backend(k::Backend::Scalar);
    const double dot_ref = k::dot(a.data(), b.data(), n);
    const double ss_ref = k::sum_sq(a.data(), n);
    const double sdot_ref = k::sym_dot(a.data(), a12.data(), a22.data(),
                                       b.data(), b12.data(), b22.data(), n);
    const double quart_ref = k::sym_quartic(a.data(), a12.data(), a22.data(), n);
    const double tr3_ref = k::sym_trace3(a.data(), a12.data(), a22.data(), n);
    std::vector<double> sq11(n), sq12(n), sq22(n), cu11(n), cu12(n), cu22(n);
    k::sym_square(a.data(), a12.data(), a22.data(), sq11.data(), sq12.data(), sq22.data(), n);
    k::sym_cubic(a.data(), a12.data(), a22.data(), cu11.data(), cu12.data(), cu22.data(), n);
    std::vector<double> y_ref = b;
    k::axpy(0.37, a.data(), y_ref.data(), n);

    for (k::Backend bk : backends()) {
      if (bk == k::Backend::Scalar) continue;
      k::set_backend(bk);
      CHECK(k::dot(a.data(), b.data(), n) == doctest::Approx(dot_ref).epsilon(1e-13));
      CHECK(k::sum_sq(a.data(), n) == doctest::Approx(ss_ref).epsilon(1e-13));
      CHECK(k::sym_dot(a.data(), a12.data(), a22.data(), b.data(), b12.data(), b22.data(), n) ==
            doctest::Approx(sdot_ref).epsilon(1e-13));
      CHECK(k::sym_quartic(a.data(), a12.data(), a22.data(), n) ==
            doctest::Approx(quart_ref).epsilon(1e-13));
      CHECK(k::sym_trace3(a.data(), a12.data(), a22.data(), n) ==
            doctest::Approx(tr3_ref).epsilon(5e-13));

      std::vector<double> s11(n), s12(n), s22(n);
      k::sym_square(a.data(), a12.data(), a22.data(), s11.data(), s12.data(), s22.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(s11[i] == doctest::Approx(sq11[i]).epsilon(1e-14));
        CHECK(s12[i] == doctest::Approx(sq12[i]).epsilon(1e-14));
        CHECK(s22[i] == doctest::Approx(sq22[i]).epsilon(1e-14));
      }
      k::sym_cubic(a.data(), a12.data(), a22.data(), s11.data(), s12.data(), s22.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(s11[i] == doctest::Approx(cu11[i]).epsilon(1e-14));
        CHECK(s12[i] == doctest::Approx(cu12[i]).epsilon(1e-14));
        CHECK(s22[i] == doctest::Approx(cu22[i]).epsilon(1e-14));
      }
      std::vector<double> y = b;
      k::axpy(0.37, a.data(), y.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(y[i] == doctest::Approx(y_ref[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("matmul variants agree and match a hand example") {
  BackendGuard guard;
  // 2x2: [[1,2],[3,4]] * [[5,6],[7,8]] = [[19,22],[43,50]]
  const double A[4] = {1, 2, 3, 4};
  const double B[4] = {5, 6, 7, 8};
  double C[4];
  for (k::Backend bk : backends()) {
    k::set_backend(bk);
    k::matmul(A, B, C, 2, 2, 2);
    CHECK(C[0] == 19.0);
    CHECK(C[1] == 22.0);
    CHECK(C[2] == 43.0);
    CHECK(C[3] == 50.0);
  }

  Rng rng(7);
  const std::size_t m = 17, kk = 33, n = 29;
  auto Am = random_vec(rng, m * kk);
  auto Bm = random_vec(rng, kk * n);
  std::vector<double> Cs(m * n), Cv(m * n);
  k::set_backend(k::Backend::Scalar);
  k::matmul(Am.data(), Bm.data(), Cs.data(), m, kk, n);
  for (k::Backend bk : backends()) {
    if (bk == k::Backend::Scalar) continue;
    k::set_backend(bk);
    k::matmul(Am.data(), Bm.data(), Cv.data(), m, kk, n);
    for (std::size_t i = 0; i < m * n; ++i)
      CHECK(Cv[i] == doctest::Approx(Cs[i]).epsilon(1e-13));
  }
}

TEST_CASE("sym tensor algebra identities") {
  Rng rng(99);
  const std::size_t n = 257;
  auto p = random_vec(rng, n), q = random_vec(rng, n), r = random_vec(rng, n);
  // tr(A^3) equals A^2 : A
  std::vector<double> s11(n), s12(n), s22(n);
  k::sym_square(p.data(), q.data(), r.data(), s11.data(), s12.data(), s22.data(), n);
  const double lhs = k::sym_trace3(p.data(), q.data(), r.data(), n);
  const double rhs = k::sym_dot(s11.data(), s12.data(), s22.data(),
                                p.data(), q.data(), r.data(), n);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  // |A|^4 equals (|A|^2 A) : A
  std::vector<double> c11(n), c12(n), c22(n);
  k::sym_cubic(p.data(), q.data(), r.data(), c11.data(), c12.data(), c22.data(), n);
  const double q4 = k::sym_quartic(p.data(), q.data(), r.data(), n);
  const double q4b = k::sym_dot(c11.data(), c12.data(), c22.data(),
                                p.data(), q.data(), r.data(), n);
  CHECK(q4 == doctest::Approx(q4b).epsilon(1e-12));
}
