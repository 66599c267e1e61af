#pragma once

// Ground-truth solution values used to score the iterative solvers.
//
// Two kinds are provided.  For state-independent convex Hamiltonians the
// variational (Hopf-Lax / Lax-Oleinik) formula reduces the solution at a
// single point to a minimization over initial positions, which we evaluate
// by brute force over a fine y-grid together with the nearest periodic
// images.  For everything else there is an explicit first-order marcher on
// a refined grid, stable under the usual CFL bound, whose output is
// restricted back to the requested coarse grid.

#include <functional>

#include "hj/grid.hpp"
#include "hj/hamiltonian.hpp"

namespace hj {

// min_y { g(y) + (x-y)^2/(2t) } for H(p) = p^2/2, g periodic on [a,b].
// The y-grid has n_samples points per period and each point is tried at
// shifts {-(b-a), 0, +(b-a)}, enough image coverage for |x-y*| <= b-a,
// i.e. for sqrt(2 t osc(g)) up to the domain width.  t=0 returns g(x).
// Throws std::invalid_argument for t < 0.
double hopf_lax_quadratic_1d(const std::function<double(double)>& g,
                             double x, double t, double a, double b,
                             int n_samples = 10000);

// min over |y - x| <= t of periodic g (H(p) = |p|).  The window endpoints
// x-t and x+t are always included as candidates so boundary minima are hit
// exactly; a window wider than one period degenerates to the global
// sampled minimum.  t=0 returns g(x); t < 0 throws.
double hopf_lax_l1_1d(const std::function<double(double)>& g,
                      double x, double t, double a, double b,
                      int n_samples = 10000);

// Whole-field versions of the two oracles.  These sample g once and reuse
// the values for every (i,k), which matters when filling 80x41 tables with
// a 1e4-point y-grid.  Slice 0 is the sampled initial data.
Field1D hopf_lax_quadratic_field_1d(const Grid1D& grid,
                                    const std::function<double(double)>& g,
                                    int n_samples = 10000);
Field1D hopf_lax_l1_field_1d(const Grid1D& grid,
                             const std::function<double(double)>& g,
                             int n_samples = 10000);

// Explicit forward-Euler marching of the same upwind space discretization,
//
//   phi_new = phi - dt_f * (Hhat(x, t, D+phi, D-phi) - eps * Lap(phi)),
//
// run on a `refine`-times finer spatial grid.  The fine time step divides
// the coarse dt evenly and obeys
//
//   dt_f <= cfl_safety * min(dx_f / slope_bound, dx_f^2 / (2 d eps))
//
// with d the dimension and slope_bound a caller-supplied bound on |dH/dp|.
// Recorded slices land exactly on the coarse times and coarse node i is
// fine node refine*i, so restriction is pointwise.  Throws
// std::invalid_argument for refine < 1, slope_bound <= 0, epsilon < 0, or
// cfl_safety outside (0, 1].
Field1D explicit_eo_solve_1d(const Grid1D& grid, const Hamiltonian1D& ham,
                             const std::function<double(double)>& g,
                             double epsilon, double slope_bound,
                             int refine = 8, double cfl_safety = 0.5);

Field2D explicit_eo_solve_2d(const Grid2D& grid, const Hamiltonian2D& ham,
                             const std::function<double(double, double)>& g,
                             double epsilon, double slope_bound,
                             int refine = 8, double cfl_safety = 0.5);

}  // namespace hj
