#include "hj/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hj {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("reference: t must be >= 0");
}

void check_samples(int n) {
  if (n < 2)
    throw std::invalid_argument("reference: n_samples must be >= 2");
}

double positive_mod(double v, double len) {
  double r = std::fmod(v, len);
  return r < 0.0 ? r + len : r;
}

std::vector<double> sample_period(const std::function<double(double)>& g,
                                  double a, double b, int n) {
  std::vector<double> s(static_cast<std::size_t>(n));
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = g(a + h * i);
  return s;
}

double quad_min(const std::vector<double>& gs, double x, double t, double a,
                double b) {
  const double len = b - a;
  const double h = len / static_cast<double>(gs.size());
  const double inv2t = 1.0 / (2.0 * t);
  double best = kInf;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const double y = a + h * static_cast<double>(i);
    for (double s : {-len, 0.0, len}) {
      const double d = x - (y + s);
      best = std::min(best, gs[i] + d * d * inv2t);
    }
  }
  return best;
}

double window_min(const std::vector<double>& gs,
                  const std::function<double(double)>& g, double x, double t,
                  double a, double b) {
  const double len = b - a;
  // window endpoints first, so boundary minima are exact
  double best = std::min(g(a + positive_mod(x - t - a, len)),
                         g(a + positive_mod(x + t - a, len)));
  const double h = len / static_cast<double>(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const double y = a + h * static_cast<double>(i);
    for (double s : {-len, 0.0, len}) {
      if (std::abs(y + s - x) <= t) {
        best = std::min(best, gs[i]);
        break;
      }
    }
  }
  return best;
}

}  // namespace

double hopf_lax_quadratic_1d(const std::function<double(double)>& g, double x,
                             double t, double a, double b, int n_samples) {
  check_time(t);
  check_samples(n_samples);
  if (t == 0.0) return g(x);
  return quad_min(sample_period(g, a, b, n_samples), x, t, a, b);
}

double hopf_lax_l1_1d(const std::function<double(double)>& g, double x,
                      double t, double a, double b, int n_samples) {
  check_time(t);
  check_samples(n_samples);
  if (t == 0.0) return g(x);
  return window_min(sample_period(g, a, b, n_samples), g, x, t, a, b);
}

Field1D hopf_lax_quadratic_field_1d(const Grid1D& grid,
                                    const std::function<double(double)>& g,
                                    int n_samples) {
  grid.validate();
  check_samples(n_samples);
  const std::vector<double> gs = sample_period(g, grid.a, grid.b, n_samples);
  Field1D out(grid.n_x, grid.n_t);
  for (int i = 0; i < grid.n_x; ++i) out(i, 0) = g(grid.x(i));
  for (int k = 1; k < grid.n_t; ++k) {
    const double t = k * grid.dt();
    for (int i = 0; i < grid.n_x; ++i)
      out(i, k) = quad_min(gs, grid.x(i), t, grid.a, grid.b);
  }
  return out;
}

Field1D hopf_lax_l1_field_1d(const Grid1D& grid,
                             const std::function<double(double)>& g,
                             int n_samples) {
  grid.validate();
  check_samples(n_samples);
  const std::vector<double> gs = sample_period(g, grid.a, grid.b, n_samples);
  Field1D out(grid.n_x, grid.n_t);
  for (int i = 0; i < grid.n_x; ++i) out(i, 0) = g(grid.x(i));
  for (int k = 1; k < grid.n_t; ++k) {
    const double t = k * grid.dt();
    for (int i = 0; i < grid.n_x; ++i)
      out(i, k) = window_min(gs, g, grid.x(i), t, grid.a, grid.b);
  }
  return out;
}

namespace {

void check_march_args(int refine, double slope_bound, double epsilon,
                      double cfl_safety) {
  if (refine < 1)
    throw std::invalid_argument("reference: refine must be >= 1");
  if (!(slope_bound > 0.0))
    throw std::invalid_argument("reference: slope_bound must be > 0");
  if (!(epsilon >= 0.0))
    throw std::invalid_argument("reference: epsilon must be >= 0");
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
    throw std::invalid_argument("reference: cfl_safety must lie in (0, 1]");
}

// fine steps per coarse step obeying the stability bound
int substeps(double dt_coarse, double dx_min, double slope_bound,
             double epsilon, int dim, double cfl_safety) {
  double dt_stab = dx_min / slope_bound;
  if (epsilon > 0.0)
    dt_stab = std::min(dt_stab, dx_min * dx_min / (2.0 * dim * epsilon));
  dt_stab *= cfl_safety;
  return std::max(1, static_cast<int>(std::ceil(dt_coarse / dt_stab - 1e-12)));
}

}  // namespace

Field1D explicit_eo_solve_1d(const Grid1D& grid, const Hamiltonian1D& ham,
                             const std::function<double(double)>& g,
                             double epsilon, double slope_bound, int refine,
                             double cfl_safety) {
  grid.validate();
  check_march_args(refine, slope_bound, epsilon, cfl_safety);

  const int nf = grid.n_x * refine;
  const double dxf = (grid.b - grid.a) / nf;
  const int sub =
      substeps(grid.dt(), dxf, slope_bound, epsilon, 1, cfl_safety);
  const double dt_f = grid.dt() / sub;

  std::vector<double> xs(static_cast<std::size_t>(nf));
  std::vector<double> phi(static_cast<std::size_t>(nf));
  std::vector<double> next(static_cast<std::size_t>(nf));
  for (int i = 0; i < nf; ++i) {
    xs[static_cast<std::size_t>(i)] = grid.a + dxf * i;
    phi[static_cast<std::size_t>(i)] = g(xs[static_cast<std::size_t>(i)]);
  }

  Field1D out(grid.n_x, grid.n_t);
  for (int i = 0; i < grid.n_x; ++i) out(i, 0) = phi[i * refine];

  const double inv_dx = 1.0 / dxf;
  for (int k = 1; k < grid.n_t; ++k) {
    for (int s = 0; s < sub; ++s) {
      const double t = grid.t0 + (k - 1) * grid.dt() + s * dt_f;
      for (int i = 0; i < nf; ++i) {
        const double c = phi[static_cast<std::size_t>(i)];
        const double r = phi[static_cast<std::size_t>(wrap(i + 1, nf))];
        const double l = phi[static_cast<std::size_t>(wrap(i - 1, nf))];
        const double dp = (r - c) * inv_dx;
        const double dm = (c - l) * inv_dx;
        const double lap = (r - 2.0 * c + l) * inv_dx * inv_dx;
        next[static_cast<std::size_t>(i)] =
            c - dt_f * (ham.eval(xs[static_cast<std::size_t>(i)], t, dp, dm) -
                        epsilon * lap);
      }
      phi.swap(next);
    }
    for (int i = 0; i < grid.n_x; ++i) out(i, k) = phi[i * refine];
  }
  return out;
}

Field2D explicit_eo_solve_2d(const Grid2D& grid, const Hamiltonian2D& ham,
                             const std::function<double(double, double)>& g,
                             double epsilon, double slope_bound, int refine,
                             double cfl_safety) {
  grid.validate();
  check_march_args(refine, slope_bound, epsilon, cfl_safety);

  const int nxf = grid.n_x * refine;
  const int nyf = grid.n_y * refine;
  const double dxf = (grid.b1 - grid.a1) / nxf;
  const double dyf = (grid.b2 - grid.a2) / nyf;
  const int sub = substeps(grid.dt(), std::min(dxf, dyf), slope_bound,
                           epsilon, 2, cfl_safety);
  const double dt_f = grid.dt() / sub;

  const std::size_t nn = static_cast<std::size_t>(nxf) * nyf;
  std::vector<double> xs(static_cast<std::size_t>(nxf));
  std::vector<double> ys(static_cast<std::size_t>(nyf));
  for (int i = 0; i < nxf; ++i) xs[static_cast<std::size_t>(i)] = grid.a1 + dxf * i;
  for (int j = 0; j < nyf; ++j) ys[static_cast<std::size_t>(j)] = grid.a2 + dyf * j;

  std::vector<double> phi(nn), next(nn);
  auto at = [nxf](int i, int j) {
    return static_cast<std::size_t>(j) * nxf + i;
  };
  for (int j = 0; j < nyf; ++j)
    for (int i = 0; i < nxf; ++i)
      phi[at(i, j)] = g(xs[static_cast<std::size_t>(i)],
                        ys[static_cast<std::size_t>(j)]);

  Field2D out(grid.n_x, grid.n_y, grid.n_t);
  for (int j = 0; j < grid.n_y; ++j)
    for (int i = 0; i < grid.n_x; ++i)
      out(i, j, 0) = phi[at(i * refine, j * refine)];

  const double inv_dx = 1.0 / dxf;
  const double inv_dy = 1.0 / dyf;
  for (int k = 1; k < grid.n_t; ++k) {
    for (int s = 0; s < sub; ++s) {
      const double t = grid.t0 + (k - 1) * grid.dt() + s * dt_f;
      for (int j = 0; j < nyf; ++j) {
        const int jp = wrap(j + 1, nyf);
        const int jm = wrap(j - 1, nyf);
        for (int i = 0; i < nxf; ++i) {
          const int ip = wrap(i + 1, nxf);
          const int im = wrap(i - 1, nxf);
          const double c = phi[at(i, j)];
          const double xr = phi[at(ip, j)];
          const double xl = phi[at(im, j)];
          const double yr = phi[at(i, jp)];
          const double yl = phi[at(i, jm)];
          const double lap = (xr - 2.0 * c + xl) * inv_dx * inv_dx +
                             (yr - 2.0 * c + yl) * inv_dy * inv_dy;
          next[at(i, j)] =
              c - dt_f * (ham.eval(xs[static_cast<std::size_t>(i)],
                                   ys[static_cast<std::size_t>(j)], t,
                                   (xr - c) * inv_dx, (c - xl) * inv_dx,
                                   (yr - c) * inv_dy, (c - yl) * inv_dy) -
                          epsilon * lap);
        }
      }
      phi.swap(next);
    }
    for (int j = 0; j < grid.n_y; ++j)
      for (int i = 0; i < grid.n_x; ++i)
        out(i, j, k) = phi[at(i * refine, j * refine)];
  }
  return out;
}

}  // namespace hj
