#ifndef HJ_POISSON_HPP
#define HJ_POISSON_HPP

#include <fftw3.h>

#include "hj/grid.hpp"

namespace hj {

/* Inverse of the space-time Laplacian used as the primal preconditioner:
 * given f with n_t-1 rows, find u with n_t rows such that
 *
 *     -(D_tt u)_{i,k+1} - (D_xx u)_{i,k+1} = f_{i,k},   k = 0..n_t-2,
 *
 * with periodic x, u pinned to zero on the initial slice, and a ghost slice
 * past the end equal to the final slice (discrete Neumann in time).
 *
 * A spatial DFT turns -D_xx into the eigenvalue (2 - 2 cos(2 pi w/n_x))/dx^2,
 * leaving one tridiagonal system in time per frequency: interior diagonal
 * 2/dt^2 + lambda, final diagonal 1/dt^2 + lambda, off-diagonals -1/dt^2.
 * The w = 0 system (lambda = 0) stays nonsingular thanks to the mixed
 * Dirichlet/Neumann ends. FFTW plans are built once and reused, so keep one
 * solver per grid shape and call solve() repeatedly.
 */
class PoissonSolver1D {
public:
    PoissonSolver1D(int n_x, int n_t, double dx, double dt);
    ~PoissonSolver1D();
    PoissonSolver1D(const PoissonSolver1D&) = delete;
    PoissonSolver1D& operator=(const PoissonSolver1D&) = delete;

    // f must have n_t-1 rows; u is resized to n_t rows with u.slice(0) all zero.
    // Throws std::runtime_error if a tridiagonal pivot falls below 1e-14/dt^2.
    void solve(const Field1D& f, Field1D& u);

private:
    int n_x_, n_t_, n_c_;
    double dx_, dt_;
    std::vector<double> lambda_;  // -D_xx eigenvalues per frequency
    double* real_ = nullptr;      // (n_t-1) x n_x
    fftw_complex* spec_ = nullptr;  // (n_t-1) x n_c
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

// 2D variant; the DFT is two-dimensional and lambda = lambda_x + lambda_y.
class PoissonSolver2D {
public:
    PoissonSolver2D(int n_x, int n_y, int n_t, double dx, double dy, double dt);
    ~PoissonSolver2D();
    PoissonSolver2D(const PoissonSolver2D&) = delete;
    PoissonSolver2D& operator=(const PoissonSolver2D&) = delete;

    void solve(const Field2D& f, Field2D& u);

private:
    int n_x_, n_y_, n_t_, n_cx_;
    double dx_, dy_, dt_;
    std::vector<double> lambda_x_, lambda_y_;
    double* real_ = nullptr;
    fftw_complex* spec_ = nullptr;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

// Forward operator matching solve() exactly (same boundary treatment); used to
// verify round trips. u has n_t rows, f gets n_t-1.
void poisson_apply_1d(const Field1D& u, double dx, double dt, Field1D& f);
void poisson_apply_2d(const Field2D& u, double dx, double dy, double dt, Field2D& f);

}  // namespace hj

#endif
