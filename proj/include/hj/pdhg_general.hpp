#ifndef HJ_PDHG_GENERAL_HPP
#define HJ_PDHG_GENERAL_HPP

#include <vector>

#include "hj/grid.hpp"
#include "hj/hamiltonian.hpp"

namespace hj {

/* Residual the iteration drives to zero: sum over interior time slices of
 * |D_t^- phi + Hhat(x, t, D_x^+ phi, D_x^- phi) - eps * Lap phi|. The stopping
 * test compares either this sum or its average per grid node against delta. */
enum class StopRule { Sum, Avg };

struct SolverConfig {
    double tau = 0.0;    // primal step; <= 0 selects the default below
    double sigma = 0.0;  // dual step; <= 0 mirrors tau (and vice versa)
    double c = 1.0;      // terminal density level
    double delta = 1e-6;
    int n_inner = 10;  // dual sweeps per primal update (general solver only)
    int n_outer = 200000;
    double epsilon = 0.0;  // diffusion coefficient, >= 0
    int time_windows = 1;  // split [0,T] into this many sequential solves
    StopRule stop_rule = StopRule::Sum;
};

/* Default steps satisfy tau*sigma*(2 + 4 eps/h)^2 = 0.9 < 1 with tau = sigma,
 * h the smallest spatial spacing. */
double default_step(double epsilon, double h);

struct SolveReport {
    bool converged = false;
    int outer_iterations = 0;
    std::vector<double> residual_history;  // stopping metric after each primal update
    double final_residual = 0.0;
    double wall_time = 0.0;  // seconds
    double tau = 0.0, sigma = 0.0;  // steps actually used
};

struct Solution1D {
    Field1D phi;                    // n_t slices
    Field1D rho, v_plus, v_minus;   // n_t-1 slices
    SolveReport report;
};

struct Solution2D {
    Field2D phi;
    Field2D rho, v_plus, v_minus, w_plus, w_minus;  // w pair is the y direction
    SolveReport report;
};

// Residual sum defined above; phi must have grid.n_t slices.
double residual_sum_1d(const Field1D& phi, const Grid1D& g, const Hamiltonian1D& h,
                       double epsilon);
double residual_sum_2d(const Field2D& phi, const Grid2D& g, const Hamiltonian2D& h,
                       double epsilon);

/* Primal-dual solve of the implicit monotone discretization of
 * phi_t + Hhat(x,t,grad phi) = eps Lap phi, phi(.,0) = g0, periodic in space.
 * Throws std::invalid_argument on bad config and std::runtime_error when the
 * iteration produces a non-finite or absurdly large (> 1e12) residual. */
Solution1D solve_1d(const Grid1D& g, const Hamiltonian1D& h,
                    const std::function<double(double)>& g0, const SolverConfig& cfg);
Solution2D solve_2d(const Grid2D& g, const Hamiltonian2D& h,
                    const std::function<double(double, double)>& g0, const SolverConfig& cfg);

// Same solves starting from an explicit initial slice (used by windowing).
Solution1D solve_1d_from(const Grid1D& g, const Hamiltonian1D& h,
                         const std::vector<double>& initial_slice, const SolverConfig& cfg);
Solution2D solve_2d_from(const Grid2D& g, const Hamiltonian2D& h,
                         const std::vector<double>& initial_slice, const SolverConfig& cfg);

/* Splits the horizon into cfg.time_windows chunks of equal slice count
 * ((n_t-1) must be divisible) and solves them sequentially, each window
 * starting from the previous window's final slice. The returned phi stitches
 * the windows together without duplicating the shared slices; the dual fields
 * and step sizes are those of the last window, and the report aggregates
 * (converged = all windows converged, iterations and wall time summed,
 * residual histories concatenated, final_residual the worst window). */
Solution1D solve_windowed_1d(const Grid1D& g, const Hamiltonian1D& h,
                             const std::function<double(double)>& g0, const SolverConfig& cfg);
Solution2D solve_windowed_2d(const Grid2D& g, const Hamiltonian2D& h,
                             const std::function<double(double, double)>& g0,
                             const SolverConfig& cfg);

}  // namespace hj

#endif
