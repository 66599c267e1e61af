#ifndef HJ_GRID_HPP
#define HJ_GRID_HPP

#include <functional>
#include <span>
#include <vector>

namespace hj {

/* Uniform periodic space-time grids.
 *
 * Spatial points exclude the right endpoint: x_i = a + i*dx with dx = (b-a)/n_x,
 * so x_{n_x-1} + dx wraps to x_0 = a (a and b are the same periodic point).
 * Time points include both ends: t_k = t0 + k*dt with dt = T/(n_t-1).
 *
 * Storage is 0-based; the customary 1-based index in the scheme's notation maps
 * as i_1based = i+1, k_1based = k+1 throughout this codebase.
 *
 * t0 is the start time of the window being solved (0 for a whole-horizon solve);
 * time-dependent coefficients are always sampled at the true global time.
 */
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    int n_x = 1;
    double T = 1.0;
    int n_t = 2;
    double t0 = 0.0;

    double dx() const { return (b - a) / n_x; }
    double dt() const { return T / (n_t - 1); }
    double x(int i) const { return a + i * dx(); }
    double t(int k) const { return t0 + k * dt(); }

    void validate() const;  // throws std::invalid_argument
};

struct Grid2D {
    double a1 = 0.0, b1 = 1.0;
    double a2 = 0.0, b2 = 1.0;
    int n_x = 1, n_y = 1;
    double T = 1.0;
    int n_t = 2;
    double t0 = 0.0;

    double dx() const { return (b1 - a1) / n_x; }
    double dy() const { return (b2 - a2) / n_y; }
    double dt() const { return T / (n_t - 1); }
    double x(int i) const { return a1 + i * dx(); }
    double y(int j) const { return a2 + j * dy(); }
    double t(int k) const { return t0 + k * dt(); }

    void validate() const;
};

/* Space-time field, time-major: value at (i, k) sits at v[k*n_x + i].
 * Primal fields carry n_k = n_t slices, dual fields n_k = n_t - 1. */
struct Field1D {
    int n_x = 0;
    int n_k = 0;
    std::vector<double> v;

    Field1D() = default;
    Field1D(int nx, int nk, double fill = 0.0) : n_x(nx), n_k(nk), v((size_t)nx * nk, fill) {}

    double& operator()(int i, int k) { return v[(size_t)k * n_x + i]; }
    double operator()(int i, int k) const { return v[(size_t)k * n_x + i]; }
    double* slice(int k) { return v.data() + (size_t)k * n_x; }
    const double* slice(int k) const { return v.data() + (size_t)k * n_x; }
    size_t size() const { return v.size(); }
};

/* 2D field: value at (i, j, k) sits at v[(k*n_y + j)*n_x + i] (x fastest). */
struct Field2D {
    int n_x = 0;
    int n_y = 0;
    int n_k = 0;
    std::vector<double> v;

    Field2D() = default;
    Field2D(int nx, int ny, int nk, double fill = 0.0)
        : n_x(nx), n_y(ny), n_k(nk), v((size_t)nx * ny * nk, fill) {}

    double& operator()(int i, int j, int k) { return v[((size_t)k * n_y + j) * n_x + i]; }
    double operator()(int i, int j, int k) const { return v[((size_t)k * n_y + j) * n_x + i]; }
    double* slice(int k) { return v.data() + (size_t)k * n_y * n_x; }
    const double* slice(int k) const { return v.data() + (size_t)k * n_y * n_x; }
    size_t size() const { return v.size(); }
};

// Periodic neighbor index for single steps (i in [-1, n]).
inline int wrap(int i, int n) { return i >= n ? i - n : (i < 0 ? i + n : i); }

// One-sided and centered spatial stencils on a periodic slice.
inline double d_x_plus(std::span<const double> f, int i, double dx) {
    const int n = (int)f.size();
    return (f[wrap(i + 1, n)] - f[i]) / dx;
}
inline double d_x_minus(std::span<const double> f, int i, double dx) {
    const int n = (int)f.size();
    return (f[i] - f[wrap(i - 1, n)]) / dx;
}
inline double d_xx(std::span<const double> f, int i, double dx) {
    // written as (d_x_plus - d_x_minus)/dx so that identity holds exactly
    return (d_x_plus(f, i, dx) - d_x_minus(f, i, dx)) / dx;
}

// Backward time difference of a primal field; k in 1..n_k-1.
inline double d_t_minus(const Field1D& phi, double dt, int i, int k) {
    return (phi(i, k) - phi(i, k - 1)) / dt;
}
inline double d_t_minus(const Field2D& phi, double dt, int i, int j, int k) {
    return (phi(i, j, k) - phi(i, j, k - 1)) / dt;
}

/* Forward time difference of a dual field with terminal value c:
 * (rho_{k+1} - rho_k)/dt for k < n_k-1, and (c - rho_{n_k-1})/dt on the last row. */
inline double d_t_plus_rho(const Field1D& rho, double c, double dt, int i, int k) {
    const double next = (k + 1 < rho.n_k) ? rho(i, k + 1) : c;
    return (next - rho(i, k)) / dt;
}
inline double d_t_plus_rho(const Field2D& rho, double c, double dt, int i, int j, int k) {
    const double next = (k + 1 < rho.n_k) ? rho(i, j, k + 1) : c;
    return (next - rho(i, j, k)) / dt;
}

// Sample an initial condition on the spatial grid.
std::vector<double> sample_initial(const Grid1D& g, const std::function<double(double)>& g0);
std::vector<double> sample_initial(const Grid2D& g, const std::function<double(double, double)>& g0);

}  // namespace hj

#endif
