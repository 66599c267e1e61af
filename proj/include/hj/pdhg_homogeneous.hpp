#ifndef HJ_PDHG_HOMOGENEOUS_HPP
#define HJ_PDHG_HOMOGENEOUS_HPP

#include <algorithm>

#include "hj/pdhg_general.hpp"

namespace hj {

/* Specialized solver for H(x,t,p) = gamma(x,t) |p|_1 + f(x,t) with gamma > 0.
 * The flux variable m = rho * v replaces the (v+, v-) pair; the conjugate
 * becomes a box indicator in m, so each dual update is a small exact
 * minimization and no inner loop is needed. cfg.n_inner is ignored here.
 */
struct HomogeneousData1D {
    Fn1D gamma;  // empty means gamma == 1
    Fn1D f;      // empty means f == 0
};
struct HomogeneousData2D {
    Fn2D gamma;
    Fn2D f;
};

/* Density update: minimize over y >= 0
 *
 *   (y - alpha)^2 + [z_i <= -y*gamma_i] (y*gamma_i + z_i)^2
 *                 + [z_im1 >= y*gamma_up] (y*gamma_up - z_im1)^2,
 *
 * the quadratic distance to the ascent target alpha plus hinge penalties that
 * activate when the neighboring flux values would violate their feasibility
 * interval [-rho_i gamma_i, rho_{i+1} gamma_{i+1}]. Each bracket contributes
 * only on one side of a breakpoint, so the objective is piecewise quadratic;
 * the exact minimizer is found by evaluating every per-active-set stationary
 * point, every breakpoint, and 0. Ties pick the smallest y.
 *
 * The 2D version carries one such pair of penalties per axis.
 */
double rho_update_1d(double alpha, double z_i, double z_im1, double gamma_i, double gamma_up);
double rho_update_2d(double alpha, double z1_i, double z1_im1, double z2_j, double z2_jm1,
                     double gamma1_i, double gamma1_up, double gamma2_j, double gamma2_up);

// Flux update: clamp the ascent target onto its feasibility interval.
inline double m_update(double z, double rho_i, double gamma_i, double rho_ip1,
                       double gamma_ip1) {
    return std::max(std::min(z, rho_ip1 * gamma_ip1), -rho_i * gamma_i);
}

struct HomogeneousSolution1D {
    Field1D phi;
    Field1D rho, m;
    SolveReport report;
};
struct HomogeneousSolution2D {
    Field2D phi;
    Field2D rho, m1, m2;
    SolveReport report;
};

HomogeneousSolution1D solve_homogeneous_1d(const Grid1D& g, const HomogeneousData1D& data,
                                           const std::function<double(double)>& g0,
                                           const SolverConfig& cfg);
HomogeneousSolution2D solve_homogeneous_2d(const Grid2D& g, const HomogeneousData2D& data,
                                           const std::function<double(double, double)>& g0,
                                           const SolverConfig& cfg);

HomogeneousSolution1D solve_homogeneous_1d_from(const Grid1D& g, const HomogeneousData1D& data,
                                                const std::vector<double>& initial_slice,
                                                const SolverConfig& cfg);
HomogeneousSolution2D solve_homogeneous_2d_from(const Grid2D& g, const HomogeneousData2D& data,
                                                const std::vector<double>& initial_slice,
                                                const SolverConfig& cfg);

// Windowing with the same contract as solve_windowed_1d/2d.
HomogeneousSolution1D solve_windowed_homogeneous_1d(const Grid1D& g,
                                                    const HomogeneousData1D& data,
                                                    const std::function<double(double)>& g0,
                                                    const SolverConfig& cfg);
HomogeneousSolution2D solve_windowed_homogeneous_2d(
    const Grid2D& g, const HomogeneousData2D& data,
    const std::function<double(double, double)>& g0, const SolverConfig& cfg);

}  // namespace hj

#endif
