// Times the serial kernels against their OpenMP twins on solver-realistic
// shapes and prints one table row per kernel.  The two flavors are
// bit-identical (test_kernels proves it); this target shows what the
// parallel versions buy on the current machine.
//
//   bench_kernels [n_x n_t reps]        defaults: 256 65 200
//
// The 2D runs use n_x * n_x * n_t points, so keep n_x modest.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hj/grid.hpp"
#include "hj/hamiltonian.hpp"
#include "hj/kernels.hpp"

using namespace hj;
using namespace hj::kernels;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Checksum defeats dead-code elimination and doubles as a cross-flavor
// consistency check.
double g_sink = 0.0;

void row(const char* name, double serial_s, double omp_s, int reps) {
  std::printf("%-24s %10.3f us %10.3f us %8.2fx\n", name,
              1e6 * serial_s / reps, 1e6 * omp_s / reps, serial_s / omp_s);
}

template <typename F>
double timed(int reps, F&& body) {
  body();  // warm up, touch all pages
  const double t0 = now_seconds();
  for (int r = 0; r < reps; ++r) body();
  return now_seconds() - t0;
}

void fill(std::vector<double>& v, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& x : v) x = u(rng);
}

}  // namespace

int main(int argc, char** argv) {
  const int n_x = argc > 1 ? std::atoi(argv[1]) : 256;
  const int n_t = argc > 2 ? std::atoi(argv[2]) : 65;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 200;
  if (n_x < 4 || n_t < 3 || reps < 1) {
    std::fprintf(stderr, "usage: bench_kernels [n_x n_t reps]\n");
    return 1;
  }

#ifdef _OPENMP
  std::printf("threads: %d, ", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP off), ");
#endif
  std::printf("1d grid %dx%d, 2d grid %dx%dx%d, %d reps\n\n", n_x, n_t, n_x,
              n_x, (n_t - 1) / 4 + 1, reps);
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  std::mt19937 rng(99);
  auto ham1 = make_quadratic_1d();

  // --- 1D shapes
  Grid1D g1{0.0, 2.0, n_x, 1.0, n_t, 0.0};
  Field1D phi(n_x, n_t), rho(n_x, n_t - 1), vp(n_x, n_t - 1), vm(n_x, n_t - 1);
  fill(phi.v, rng);
  fill(rho.v, rng);
  for (double& r : rho.v) r = std::abs(r);
  for (double& v : vp.v) v = -std::abs(v);
  fill(vm.v, rng);
  for (double& v : vm.v) v = std::abs(v);

  Derivs1D d1s, d1p;
  row("derivs_1d",
      timed(reps, [&] { serial::derivs_1d(phi, g1, d1s); }),
      timed(reps, [&] { omp::derivs_1d(phi, g1, d1p); }), reps);

  Field1D rhs1s, rhs1p;
  row("phi_rhs_general_1d",
      timed(reps, [&] { serial::phi_rhs_general_1d(rho, vp, vm, 1.0, g1, 0.1, rhs1s); }),
      timed(reps, [&] { omp::phi_rhs_general_1d(rho, vp, vm, 1.0, g1, 0.1, rhs1p); }),
      reps);

  {
    Field1D ra = rho, va = vp, wa = vm, rb = rho, vb = vp, wb = vm;
    row("dual_round_general_1d",
        timed(reps, [&] { serial::dual_round_general_1d(d1s, g1, *ham1, 0.2, 0.0, ra, va, wa); }),
        timed(reps, [&] { omp::dual_round_general_1d(d1p, g1, *ham1, 0.2, 0.0, rb, vb, wb); }),
        reps);
    g_sink += ra.v[0] - rb.v[0];
  }

  row("residual_sum_1d",
      timed(reps, [&] { g_sink += serial::residual_sum_1d(phi, g1, *ham1, 0.1); }),
      timed(reps, [&] { g_sink -= omp::residual_sum_1d(phi, g1, *ham1, 0.1); }),
      reps);

  {
    Field1D m = vm, z, ra = rho, rb = rho, ma = m, mb = m;
    Field1D gamma(n_x, n_t - 1, 1.0), f(n_x, n_t - 1, 0.0);
    row("phi_rhs_homog_1d",
        timed(reps, [&] { serial::phi_rhs_homog_1d(rho, m, 1.0, g1, 0.0, rhs1s); }),
        timed(reps, [&] { omp::phi_rhs_homog_1d(rho, m, 1.0, g1, 0.0, rhs1p); }),
        reps);
    row("dual_round_homog_1d",
        timed(reps, [&] { serial::dual_round_homog_1d(d1s, gamma, f, 0.2, 0.0, ra, ma, z); }),
        timed(reps, [&] { omp::dual_round_homog_1d(d1p, gamma, f, 0.2, 0.0, rb, mb, z); }),
        reps);
    g_sink += ma.v[0] - mb.v[0];
  }

  // --- 2D shapes, fewer slices to keep the footprint comparable
  const int n_t2 = (n_t - 1) / 4 + 1;
  auto ham2 = make_quadratic_2d();
  Grid2D g2{0.0, 2.0, 0.0, 2.0, n_x, n_x, 1.0, n_t2, 0.0};
  Field2D phi2(n_x, n_x, n_t2), rho2(n_x, n_x, n_t2 - 1);
  Field2D vp2(n_x, n_x, n_t2 - 1), vm2(n_x, n_x, n_t2 - 1);
  Field2D wp2(n_x, n_x, n_t2 - 1), wm2(n_x, n_x, n_t2 - 1);
  fill(phi2.v, rng);
  fill(rho2.v, rng);
  for (double& r : rho2.v) r = std::abs(r);
  for (double& v : vp2.v) v = -0.3;
  for (double& v : vm2.v) v = 0.4;
  for (double& v : wp2.v) v = -0.1;
  for (double& v : wm2.v) v = 0.2;

  const int reps2 = std::max(1, reps / 8);
  Derivs2D d2s, d2p;
  row("derivs_2d",
      timed(reps2, [&] { serial::derivs_2d(phi2, g2, d2s); }),
      timed(reps2, [&] { omp::derivs_2d(phi2, g2, d2p); }), reps2);

  Field2D rhs2s, rhs2p;
  row("phi_rhs_general_2d",
      timed(reps2, [&] { serial::phi_rhs_general_2d(rho2, vp2, vm2, wp2, wm2, 1.0, g2, 0.1, rhs2s); }),
      timed(reps2, [&] { omp::phi_rhs_general_2d(rho2, vp2, vm2, wp2, wm2, 1.0, g2, 0.1, rhs2p); }),
      reps2);

  {
    Field2D ra = rho2, v1 = vp2, v2 = vm2, w1 = wp2, w2 = wm2;
    Field2D rb = rho2, x1 = vp2, x2 = vm2, y1 = wp2, y2 = wm2;
    row("dual_round_general_2d",
        timed(reps2, [&] { serial::dual_round_general_2d(d2s, g2, *ham2, 0.2, 0.0, ra, v1, v2, w1, w2); }),
        timed(reps2, [&] { omp::dual_round_general_2d(d2p, g2, *ham2, 0.2, 0.0, rb, x1, x2, y1, y2); }),
        reps2);
    g_sink += ra.v[0] - rb.v[0];
  }

  row("residual_sum_2d",
      timed(reps2, [&] { g_sink += serial::residual_sum_2d(phi2, g2, *ham2, 0.1); }),
      timed(reps2, [&] { g_sink -= omp::residual_sum_2d(phi2, g2, *ham2, 0.1); }),
      reps2);

  std::printf("\nchecksum %g (serial and openmp flavors cancel to ~0)\n", g_sink);
  return 0;
}
