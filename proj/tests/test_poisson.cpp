#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hj/grid.hpp"
#include "hj/poisson.hpp"

using namespace hj;

namespace {

// Dense assembly of the same operator straight from the stencil definition,
// independent of the FFT code path.  Unknowns are u_{i,k} for k = 1..n_t-1
// flattened as (k-1)*n_x + i; u_{i,0} = 0 and the ghost slice equals the
// final one.
std::vector<double> dense_matrix_1d(int n_x, int n_t, double dx, double dt) {
  const int m = n_x * (n_t - 1);
  std::vector<double> A(static_cast<std::size_t>(m) * m, 0.0);
  const double idt2 = 1.0 / (dt * dt);
  const double idx2 = 1.0 / (dx * dx);
  auto idx = [n_x](int i, int k) { return (k - 1) * n_x + i; };
  for (int k = 1; k < n_t; ++k) {
    for (int i = 0; i < n_x; ++i) {
      const int r = idx(i, k);
      double* row = A.data() + static_cast<std::size_t>(r) * m;
      const bool last = (k == n_t - 1);
      row[r] += (last ? 1.0 : 2.0) * idt2;
      if (k > 1) row[idx(i, k - 1)] -= idt2;
      if (!last) row[idx(i, k + 1)] -= idt2;
      row[r] += 2.0 * idx2;
      row[idx(wrap(i + 1, n_x), k)] -= idx2;
      row[idx(wrap(i - 1, n_x), k)] -= idx2;
    }
  }
  return A;
}

// same thing in 2D, unknown order (k-1)*(n_x*n_y) + j*n_x + i
std::vector<double> dense_matrix_2d(int n_x, int n_y, int n_t, double dx,
                                    double dy, double dt) {
  const int nn = n_x * n_y;
  const int m = nn * (n_t - 1);
  std::vector<double> A(static_cast<std::size_t>(m) * m, 0.0);
  const double idt2 = 1.0 / (dt * dt);
  const double idx2 = 1.0 / (dx * dx);
  const double idy2 = 1.0 / (dy * dy);
  auto idx = [&](int i, int j, int k) { return (k - 1) * nn + j * n_x + i; };
  for (int k = 1; k < n_t; ++k) {
    for (int j = 0; j < n_y; ++j) {
      for (int i = 0; i < n_x; ++i) {
        const int r = idx(i, j, k);
        double* row = A.data() + static_cast<std::size_t>(r) * m;
        const bool last = (k == n_t - 1);
        row[r] += (last ? 1.0 : 2.0) * idt2;
        if (k > 1) row[idx(i, j, k - 1)] -= idt2;
        if (!last) row[idx(i, j, k + 1)] -= idt2;
        row[r] += 2.0 * idx2 + 2.0 * idy2;
        row[idx(wrap(i + 1, n_x), j, k)] -= idx2;
        row[idx(wrap(i - 1, n_x), j, k)] -= idx2;
        row[idx(i, wrap(j + 1, n_y), k)] -= idy2;
        row[idx(i, wrap(j - 1, n_y), k)] -= idy2;
      }
    }
  }
  return A;
}

// plain Gaussian elimination with partial pivoting
std::vector<double> dense_solve(std::vector<double> A, std::vector<double> b) {
  const int m = static_cast<int>(b.size());
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(A[r * m + col]) > std::abs(A[piv * m + col])) piv = r;
    if (piv != col) {
      for (int c = 0; c < m; ++c) std::swap(A[col * m + c], A[piv * m + c]);
      std::swap(b[col], b[piv]);
    }
    const double d = A[col * m + col];
    REQUIRE(std::abs(d) > 1e-12);
    for (int r = col + 1; r < m; ++r) {
      const double f = A[r * m + col] / d;
      if (f == 0.0) continue;
      for (int c = col; c < m; ++c) A[r * m + c] -= f * A[col * m + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(m);
  for (int r = m - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < m; ++c) s -= A[r * m + c] * x[c];
    x[r] = s / A[r * m + r];
  }
  return x;
}

Field1D random_rhs_1d(int n_x, int n_t, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field1D f(n_x, n_t - 1);
  for (double& v : f.v) v = u(rng);
  return f;
}

Field2D random_rhs_2d(int n_x, int n_y, int n_t, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field2D f(n_x, n_y, n_t - 1);
  for (double& v : f.v) v = u(rng);
  return f;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("1d solve matches dense Gaussian elimination") {
  const int n_x = 4, n_t = 3;
  const double dx = 0.5, dt = 0.25;
  const Field1D f = random_rhs_1d(n_x, n_t, 42);

  const auto x = dense_solve(dense_matrix_1d(n_x, n_t, dx, dt), f.v);

  PoissonSolver1D solver(n_x, n_t, dx, dt);
  Field1D u;
  solver.solve(f, u);
  REQUIRE(u.n_k == n_t);
  for (int i = 0; i < n_x; ++i) CHECK(u(i, 0) == 0.0);
  for (int k = 1; k < n_t; ++k)
    for (int i = 0; i < n_x; ++i)
      CHECK(u(i, k) == doctest::Approx(x[(k - 1) * n_x + i]).epsilon(1e-10));
}

TEST_CASE("1d solve matches dense on a non-power-of-two width") {
  const int n_x = 5, n_t = 4;
  const double dx = 0.4, dt = 1.0 / 3.0;
  const Field1D f = random_rhs_1d(n_x, n_t, 43);
  const auto x = dense_solve(dense_matrix_1d(n_x, n_t, dx, dt), f.v);
  PoissonSolver1D solver(n_x, n_t, dx, dt);
  Field1D u;
  solver.solve(f, u);
  for (int k = 1; k < n_t; ++k)
    for (int i = 0; i < n_x; ++i)
      CHECK(u(i, k) == doctest::Approx(x[(k - 1) * n_x + i]).epsilon(1e-10));
}

TEST_CASE("2d solve matches dense Gaussian elimination") {
  const int n_x = 3, n_y = 3, n_t = 3;
  const double dx = 2.0 / 3.0, dy = 0.5, dt = 0.5;
  const Field2D f = random_rhs_2d(n_x, n_y, n_t, 44);
  const auto x = dense_solve(dense_matrix_2d(n_x, n_y, n_t, dx, dy, dt), f.v);
  PoissonSolver2D solver(n_x, n_y, n_t, dx, dy, dt);
  Field2D u;
  solver.solve(f, u);
  REQUIRE(u.n_k == n_t);
  for (int j = 0; j < n_y; ++j)
    for (int i = 0; i < n_x; ++i) CHECK(u(i, j, 0) == 0.0);
  for (int k = 1; k < n_t; ++k)
    for (int j = 0; j < n_y; ++j)
      for (int i = 0; i < n_x; ++i)
        CHECK(u(i, j, k) ==
              doctest::Approx(x[(k - 1) * 9 + j * 3 + i]).epsilon(1e-10));
}

TEST_CASE("round trip: apply(solve(f)) reproduces f") {
  std::mt19937 rng(7);
  const int sizes[][2] = {{4, 3}, {5, 4}, {12, 7}, {16, 2}, {40, 21}, {81, 5}};
  for (auto [n_x, n_t] : sizes) {
    PoissonSolver1D solver(n_x, n_t, 2.0 / n_x, 1.0 / (n_t - 1));
    for (int rep = 0; rep < 5; ++rep) {
      const Field1D f = random_rhs_1d(n_x, n_t, rng());
      Field1D u, back;
      solver.solve(f, u);
      poisson_apply_1d(u, 2.0 / n_x, 1.0 / (n_t - 1), back);
      REQUIRE(back.v.size() == f.v.size());
      CHECK(max_abs_diff(back.v, f.v) < 1e-10);
    }
  }

  const int sizes2[][3] = {{4, 4, 3}, {5, 3, 4}, {10, 6, 5}};
  for (auto [n_x, n_y, n_t] : sizes2) {
    PoissonSolver2D solver(n_x, n_y, n_t, 2.0 / n_x, 2.0 / n_y,
                           1.0 / (n_t - 1));
    for (int rep = 0; rep < 3; ++rep) {
      const Field2D f = random_rhs_2d(n_x, n_y, n_t, rng());
      Field2D u, back;
      solver.solve(f, u);
      poisson_apply_2d(u, 2.0 / n_x, 2.0 / n_y, 1.0 / (n_t - 1), back);
      REQUIRE(back.v.size() == f.v.size());
      CHECK(max_abs_diff(back.v, f.v) < 1e-10);
    }
  }
}

TEST_CASE("solver is linear and sends zero to zero") {
  const int n_x = 8, n_t = 5;
  PoissonSolver1D solver(n_x, n_t, 0.25, 0.25);

  Field1D zero(n_x, n_t - 1), u;
  solver.solve(zero, u);
  for (double v : u.v) CHECK(v == 0.0);

  const Field1D f1 = random_rhs_1d(n_x, n_t, 1);
  const Field1D f2 = random_rhs_1d(n_x, n_t, 2);
  Field1D u1, u2, u3;
  solver.solve(f1, u1);
  solver.solve(f2, u2);
  Field1D combo(n_x, n_t - 1);
  for (std::size_t i = 0; i < combo.v.size(); ++i)
    combo.v[i] = 2.0 * f1.v[i] - 3.0 * f2.v[i];
  solver.solve(combo, u3);
  for (std::size_t i = 0; i < u3.v.size(); ++i)
    CHECK(u3.v[i] == doctest::Approx(2.0 * u1.v[i] - 3.0 * u2.v[i])
                         .epsilon(1e-11));
}

TEST_CASE("solve output buffer is reusable across calls") {
  const int n_x = 6, n_t = 4;
  PoissonSolver1D solver(n_x, n_t, 1.0 / 3.0, 1.0 / 3.0);
  const Field1D f1 = random_rhs_1d(n_x, n_t, 5);
  const Field1D f2 = random_rhs_1d(n_x, n_t, 6);
  Field1D u, expect1, expect2;
  solver.solve(f1, expect1);
  solver.solve(f2, expect2);
  solver.solve(f1, u);  // u starts empty
  CHECK(max_abs_diff(u.v, expect1.v) == 0.0);
  solver.solve(f2, u);  // u already has the right shape: reuse path
  CHECK(max_abs_diff(u.v, expect2.v) == 0.0);
}
