#include "tgf/leray.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tgf/kernels.hpp"

extern "C" {
void dsyev_(const char* jobz, const char* uplo, const int* n, double* a,
            const int* lda, double* w, double* work, const int* lwork, int* info);
void dsygv_(const int* itype, const char* jobz, const char* uplo, const int* n,
            double* a, const int* lda, double* b, const int* ldb, double* w,
            double* work, const int* lwork, int* info);
}

namespace tgf {

namespace {

// Eigendecomposition of the 1D Neumann operator (-d^2/dx^2 with one-sided
// closure at the ends), n x n. Returns V ([i][p], row-major, eigenvectors in
// columns) and ascending eigenvalues.
void neumann_1d_eig(int n, double h, std::vector<double>& V, std::vector<double>& lam) {
  std::vector<double> A(static_cast<std::size_t>(n) * n, 0.0);
  const double ih2 = 1.0 / (h * h);
  for (int i = 0; i < n; ++i) {
    double diag = 2.0 * ih2;
    if (i == 0 || i == n - 1) diag = ih2;
    A[static_cast<std::size_t>(i) * n + i] = diag;
    if (i + 1 < n) {
      A[static_cast<std::size_t>(i) * n + i + 1] = -ih2;
      A[static_cast<std::size_t>(i + 1) * n + i] = -ih2;
    }
  }
  lam.assign(n, 0.0);
  int info = 0, lwork = -1;
  double wkopt = 0.0;
  dsyev_("V", "U", &n, A.data(), &n, lam.data(), &wkopt, &lwork, &info);
  lwork = static_cast<int>(wkopt);
  std::vector<double> work(static_cast<std::size_t>(lwork));
  dsyev_("V", "U", &n, A.data(), &n, lam.data(), work.data(), &lwork, &info);
  if (info != 0) throw std::runtime_error("neumann_1d_eig: dsyev failed");
  // dsyev is column-major; the buffer read row-major holds eigenvector p in
  // row p. Transpose into V[i][p].
  V.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int p = 0; p < n; ++p)
    for (int i = 0; i < n; ++i)
      V[static_cast<std::size_t>(i) * n + p] = A[static_cast<std::size_t>(p) * n + i];
}

std::vector<double> transpose(const std::vector<double>& A, int rows, int cols) {
  std::vector<double> T(A.size());
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      T[static_cast<std::size_t>(c) * rows + r] = A[static_cast<std::size_t>(r) * cols + c];
  return T;
}

}  // namespace

PoissonSolver::PoissonSolver(const Grid& g) : grid_(g) {
  neumann_1d_eig(g.nx, g.hx, vx_, lamx_);
  neumann_1d_eig(g.ny, g.hy, vy_, lamy_);
  vxt_ = transpose(vx_, g.nx, g.nx);
  vyt_ = transpose(vy_, g.ny, g.ny);
}

ScalarField PoissonSolver::solve(const ScalarField& rhs) const {
  const Grid& g = grid_;
  const std::size_t nx = static_cast<std::size_t>(g.nx);
  const std::size_t ny = static_cast<std::size_t>(g.ny);
  std::vector<double> t1(nx * ny), t2(nx * ny);
  // data is (ny x nx) row-major: forward transforms
  kernels::matmul(rhs.c.data(), vx_.data(), t1.data(), ny, nx, nx);
  kernels::matmul(vyt_.data(), t1.data(), t2.data(), ny, ny, nx);
  for (std::size_t q = 0; q < ny; ++q)
    for (std::size_t p = 0; p < nx; ++p) {
      const double lam = lamx_[p] + lamy_[q];
      double& c = t2[q * nx + p];
      c = (p == 0 && q == 0) ? 0.0 : c / lam;
    }
  ScalarField phi(g);
  kernels::matmul(vy_.data(), t2.data(), t1.data(), ny, ny, nx);
  kernels::matmul(t1.data(), vxt_.data(), phi.c.data(), ny, nx, nx);
  return phi;
}

namespace {
// 5-point Neumann apply, y = (-Lap_N) x
void neumann_apply(const Grid& g, const std::vector<double>& x, std::vector<double>& y) {
  const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double c = x[g.ic(i, j)];
      double acc = 0.0;
      acc += (i > 0) ? (c - x[g.ic(i - 1, j)]) * ihx2 : 0.0;
      acc += (i < g.nx - 1) ? (c - x[g.ic(i + 1, j)]) * ihx2 : 0.0;
      acc += (j > 0) ? (c - x[g.ic(i, j - 1)]) * ihy2 : 0.0;
      acc += (j < g.ny - 1) ? (c - x[g.ic(i, j + 1)]) * ihy2 : 0.0;
      y[g.ic(i, j)] = acc;
    }
}
}  // namespace

ScalarField PoissonSolver::solve_cg(const ScalarField& rhs, double tol, int max_iter) const {
  const Grid& g = grid_;
  const std::size_t n = static_cast<std::size_t>(g.ncells());
  std::vector<double> b = rhs.c;
  double mean = 0.0;
  for (double v : b) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : b) v -= mean;

  ScalarField phi(g);
  std::vector<double> r = b, p = b, Ap(n, 0.0);
  double rr = kernels::sum_sq(r.data(), n);
  const double b_norm = std::sqrt(rr);
  if (b_norm == 0.0) return phi;
  for (int it = 0; it < max_iter; ++it) {
    neumann_apply(g, p, Ap);
    const double pAp = kernels::dot(p.data(), Ap.data(), n);
    const double alpha = rr / pAp;
    kernels::axpy(alpha, p.data(), phi.c.data(), n);
    kernels::axpy(-alpha, Ap.data(), r.data(), n);
    const double rr_new = kernels::sum_sq(r.data(), n);
    if (std::sqrt(rr_new) <= tol * b_norm) {
      // pin the mean
      double m2 = 0.0;
      for (double v : phi.c) m2 += v;
      m2 /= static_cast<double>(n);
      for (double& v : phi.c) v -= m2;
      return phi;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
  }
  throw std::runtime_error("PoissonSolver::solve_cg: no convergence, residual " +
                           std::to_string(std::sqrt(rr) / b_norm));
}

ScalarField LerayProjector::potential(const VelocityField& w) const {
  // div(w - grad phi) = 0  =>  (-Lap) phi = -div w
  ScalarField rhs = divergence(w);
  for (double& v : rhs.c) v = -v;
  return poisson_.solve(rhs);
}

VelocityField LerayProjector::project(const VelocityField& w) const {
  VelocityField out = w;
  out -= gradient(potential(w));
  out.zero_boundary();
  return out;
}

VelocityField LerayProjector::gradient_part(const VelocityField& w) const {
  return gradient(potential(w));
}

VelocityField LerayProjector::stokes_apply(const VelocityField& v) const {
  VelocityField lap = laplacian(v);
  lap *= -1.0;
  return project(lap);
}

namespace {

// stream-function -> velocity (discrete curl); psi given on interior nodes
// (nx-1)*(ny-1), zero on boundary nodes.
void curl_apply(const Grid& g, const std::vector<double>& psi, VelocityField& out) {
  auto P = [&](int i, int j) -> double {
    if (i <= 0 || i >= g.nx || j <= 0 || j >= g.ny) return 0.0;
    return psi[static_cast<std::size_t>(j - 1) * (g.nx - 1) + (i - 1)];
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      out.U(i, j) = (P(i, j + 1) - P(i, j)) / g.hy;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out.V(i, j) = -(P(i + 1, j) - P(i, j)) / g.hx;
}

// adjoint of curl_apply under plain (unweighted) sums
void curl_adjoint(const Grid& g, const VelocityField& f, std::vector<double>& psi) {
  psi.assign(static_cast<std::size_t>(g.nx - 1) * (g.ny - 1), 0.0);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const double val = (f.U(i, j - 1) - f.U(i, j)) / g.hy +
                         (f.V(i, j) - f.V(i - 1, j)) / g.hx;
      psi[static_cast<std::size_t>(j - 1) * (g.nx - 1) + (i - 1)] = val;
    }
}

}  // namespace

StokesEigenbasis stokes_eigs(const Grid& g, int m) {
  const int dim = (g.nx - 1) * (g.ny - 1);
  if (m < 1) throw std::invalid_argument("stokes_eigs: m must be >= 1");
  if (m > dim / 5)
    throw std::invalid_argument(
        "stokes_eigs: m exceeds 20% of the divergence-free space dimension (" +
        std::to_string(dim) + ")");

  const std::size_t nd = static_cast<std::size_t>(dim);
  std::vector<double> K(nd * nd, 0.0), M(nd * nd, 0.0);
  std::vector<double> psi(nd, 0.0), col(nd, 0.0);
  VelocityField w(g);
  const double area = g.cell_area();
  for (int q = 0; q < dim; ++q) {
    psi.assign(nd, 0.0);
    psi[static_cast<std::size_t>(q)] = 1.0;
    curl_apply(g, psi, w);
    curl_adjoint(g, w, col);
    for (int p = 0; p < dim; ++p) M[static_cast<std::size_t>(p) * nd + q] = area * col[static_cast<std::size_t>(p)];
    VelocityField lw = laplacian(w);
    lw *= -1.0;
    curl_adjoint(g, lw, col);
    for (int p = 0; p < dim; ++p) K[static_cast<std::size_t>(p) * nd + q] = area * col[static_cast<std::size_t>(p)];
  }
  // symmetrize (assembly is symmetric up to rounding)
  for (int p = 0; p < dim; ++p)
    for (int q = p + 1; q < dim; ++q) {
      const std::size_t a = static_cast<std::size_t>(p) * nd + q;
      const std::size_t b = static_cast<std::size_t>(q) * nd + p;
      const double kv = 0.5 * (K[a] + K[b]);
      K[a] = K[b] = kv;
      const double mv = 0.5 * (M[a] + M[b]);
      M[a] = M[b] = mv;
    }

  std::vector<double> lam(nd, 0.0);
  int info = 0, lwork = -1, itype = 1, n = dim;
  double wkopt = 0.0;
  dsygv_(&itype, "V", "U", &n, K.data(), &n, M.data(), &n, lam.data(), &wkopt, &lwork, &info);
  lwork = static_cast<int>(wkopt);
  std::vector<double> work(static_cast<std::size_t>(lwork));
  dsygv_(&itype, "V", "U", &n, K.data(), &n, M.data(), &n, lam.data(), work.data(), &lwork, &info);
  if (info != 0) throw std::runtime_error("stokes_eigs: dsygv failed, info " + std::to_string(info));

  StokesEigenbasis basis;
  basis.grid = g;
  basis.m = m;
  basis.eigenvalues.assign(lam.begin(), lam.begin() + m);
  basis.fields.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    // column-major eigenvector i sits in buffer row i
    std::vector<double> p(K.begin() + static_cast<std::ptrdiff_t>(i) * dim,
                          K.begin() + static_cast<std::ptrdiff_t>(i + 1) * dim);
    VelocityField e(g);
    curl_apply(g, p, e);
    basis.fields.push_back(std::move(e));
  }
  return basis;
}

double smallest_stokes_eigenvalue(const Grid& g, double tol) {
  const std::size_t dim = static_cast<std::size_t>(g.nx - 1) * (g.ny - 1);
  const double area = g.cell_area();
  VelocityField w(g);

  auto K_apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    curl_apply(g, x, w);
    VelocityField lw = laplacian(w);
    lw *= -1.0;
    curl_adjoint(g, lw, y);
    kernels::scal(area, y.data(), dim);
  };
  auto M_apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    curl_apply(g, x, w);
    curl_adjoint(g, w, y);
    kernels::scal(area, y.data(), dim);
  };
  // CG solve K x = b, warm-started
  std::vector<double> r(dim), p(dim), Ap(dim);
  auto cg = [&](const std::vector<double>& b, std::vector<double>& x) {
    K_apply(x, Ap);
    for (std::size_t i = 0; i < dim; ++i) r[i] = b[i] - Ap[i];
    p = r;
    double rr = kernels::sum_sq(r.data(), dim);
    const double bn = std::sqrt(kernels::sum_sq(b.data(), dim));
    const int cap = 40000;
    for (int it = 0; it < cap; ++it) {
      if (std::sqrt(rr) <= 1e-11 * bn) return;
      K_apply(p, Ap);
      const double alpha = rr / kernels::dot(p.data(), Ap.data(), dim);
      kernels::axpy(alpha, p.data(), x.data(), dim);
      kernels::axpy(-alpha, Ap.data(), r.data(), dim);
      const double rr_new = kernels::sum_sq(r.data(), dim);
      const double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t i = 0; i < dim; ++i) p[i] = r[i] + beta * p[i];
    }
    throw std::runtime_error("smallest_stokes_eigenvalue: inner CG stalled");
  };

  std::vector<double> x(dim), b(dim), Kx(dim), Mx(dim);
  // deterministic start with all interior modes excited
  for (std::size_t i = 0; i < dim; ++i) x[i] = 1.0 + 1e-3 * static_cast<double>(i % 17);
  double rho_prev = 0.0;
  for (int outer = 0; outer < 200; ++outer) {
    M_apply(x, b);
    cg(b, x);
    const double nx2 = std::sqrt(kernels::sum_sq(x.data(), dim));
    kernels::scal(1.0 / nx2, x.data(), dim);
    K_apply(x, Kx);
    M_apply(x, Mx);
    const double rho = kernels::dot(x.data(), Kx.data(), dim) /
                       kernels::dot(x.data(), Mx.data(), dim);
    if (outer > 2 && std::abs(rho - rho_prev) < tol * rho) return rho;
    rho_prev = rho;
  }
  return rho_prev;
}

std::vector<double> galerkin_project(const VelocityField& v, const StokesEigenbasis& basis) {
  if (!v.grid.same_layout(basis.grid))
    throw std::invalid_argument("galerkin_project: grid mismatch");
  std::vector<double> c(static_cast<std::size_t>(basis.m));
  for (int i = 0; i < basis.m; ++i) c[static_cast<std::size_t>(i)] = inner(v, basis.fields[static_cast<std::size_t>(i)]);
  return c;
}

VelocityField reconstruct(const std::vector<double>& coeffs, const StokesEigenbasis& basis) {
  VelocityField out(basis.grid);
  const std::size_t n = std::min(coeffs.size(), basis.fields.size());
  for (std::size_t i = 0; i < n; ++i) {
    kernels::axpy(coeffs[i], basis.fields[i].u.data(), out.u.data(), out.u.size());
    kernels::axpy(coeffs[i], basis.fields[i].v.data(), out.v.data(), out.v.size());
  }
  return out;
}

void save_eigenbasis(const StokesEigenbasis& b, const std::string& path) {
  nlohmann::json h;
  h["Lx"] = b.grid.Lx;
  h["Ly"] = b.grid.Ly;
  h["nx"] = b.grid.nx;
  h["ny"] = b.grid.ny;
  h["m"] = b.m;
  h["grid_hash"] = b.grid.hash();
  h["eigenvalues"] = b.eigenvalues;
  const std::string hs = h.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_eigenbasis: cannot open " + path);
  out.write("TGFE", 4);
  const std::uint32_t n = static_cast<std::uint32_t>(hs.size());
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(hs.data(), hs.size());
  for (const auto& f : b.fields) {
    out.write(reinterpret_cast<const char*>(f.u.data()),
              static_cast<std::streamsize>(f.u.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(f.v.data()),
              static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("save_eigenbasis: write failed");
}

StokesEigenbasis load_eigenbasis(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_eigenbasis: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "TGFE")
    throw std::runtime_error("load_eigenbasis: bad magic");
  std::uint32_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 4);
  std::string hs(n, '\0');
  in.read(hs.data(), n);
  nlohmann::json h = nlohmann::json::parse(hs);
  StokesEigenbasis b;
  b.grid = build_grid(h.at("Lx").get<double>(), h.at("Ly").get<double>(),
                      h.at("nx").get<int>(), h.at("ny").get<int>());
  b.m = h.at("m").get<int>();
  b.eigenvalues = h.at("eigenvalues").get<std::vector<double>>();
  b.fields.reserve(static_cast<std::size_t>(b.m));
  for (int i = 0; i < b.m; ++i) {
    VelocityField f(b.grid);
    in.read(reinterpret_cast<char*>(f.u.data()),
            static_cast<std::streamsize>(f.u.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    b.fields.push_back(std::move(f));
  }
  if (!in) throw std::runtime_error("load_eigenbasis: truncated payload");
  return b;
}

StokesEigenbasis cached_stokes_eigs(const Grid& g, int m, const std::string& cache_dir) {
  if (cache_dir.empty()) return stokes_eigs(g, m);
  std::filesystem::create_directories(cache_dir);
  const std::string path = cache_dir + "/eigs_" + std::to_string(g.hash()) + "_m" +
                           std::to_string(m) + ".bin";
  if (std::filesystem::exists(path)) {
    StokesEigenbasis b = load_eigenbasis(path);
    if (b.grid.same_layout(g) && b.m == m) return b;
  }
  StokesEigenbasis b = stokes_eigs(g, m);
  save_eigenbasis(b, path);
  return b;
}

}  // namespace tgf
