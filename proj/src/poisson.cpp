#include "hj/poisson.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <stdexcept>

namespace hj {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> dxx_eigenvalues(int n, double h) {
    std::vector<double> lam(n / 2 + 1);
    for (int w = 0; w < (int)lam.size(); ++w)
        lam[w] = (2.0 - 2.0 * std::cos(kTwoPi * w / n)) / (h * h);
    return lam;
}

/* Tridiagonal solve along time for one spatial frequency. N unknowns, strided
 * access (stride = number of frequency pairs). Diagonal is 2/dt^2 + lam except
 * for the Neumann-adjusted last row (1/dt^2 + lam); off-diagonals are -1/dt^2.
 * The matrix is real, so the Thomas pivots are real even though the right-hand
 * side is complex. Pivots are checked against 1e-14/dt^2.
 */
void thomas_time(std::complex<double>* rhs, size_t stride, int N, double lam, double dt) {
    const double idt2 = 1.0 / (dt * dt);
    const double off = -idt2;
    const double tol = 1e-14 * idt2;

    std::vector<double> cp(N);           // scaled upper diagonal
    std::vector<std::complex<double>> dp(N);  // scaled rhs

    double piv = 2.0 * idt2 + lam;
    if (N == 1) piv = idt2 + lam;
    if (std::abs(piv) < tol) throw std::runtime_error("poisson: singular time pivot");
    cp[0] = off / piv;
    dp[0] = rhs[0] / piv;
    for (int r = 1; r < N; ++r) {
        const double diag = (r == N - 1 ? idt2 : 2.0 * idt2) + lam;
        piv = diag - off * cp[r - 1];
        if (std::abs(piv) < tol) throw std::runtime_error("poisson: singular time pivot");
        cp[r] = off / piv;
        dp[r] = (rhs[r * stride] - off * dp[r - 1]) / piv;
    }
    rhs[(size_t)(N - 1) * stride] = dp[N - 1];
    for (int r = N - 2; r >= 0; --r)
        rhs[r * stride] = dp[r] - cp[r] * rhs[(size_t)(r + 1) * stride];
}

}  // namespace

// ---------------------------------------------------------------------------

PoissonSolver1D::PoissonSolver1D(int n_x, int n_t, double dx, double dt)
    : n_x_(n_x), n_t_(n_t), n_c_(n_x / 2 + 1), dx_(dx), dt_(dt) {
    if (n_x < 1 || n_t < 2 || !(dx > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("poisson: bad grid parameters");
    lambda_ = dxx_eigenvalues(n_x, dx);

    const int N = n_t_ - 1;
    real_ = fftw_alloc_real((size_t)N * n_x_);
    spec_ = fftw_alloc_complex((size_t)N * n_c_);
    fwd_ = fftw_plan_many_dft_r2c(1, &n_x_, N, real_, nullptr, 1, n_x_, spec_, nullptr, 1, n_c_,
                                  FFTW_ESTIMATE);
    bwd_ = fftw_plan_many_dft_c2r(1, &n_x_, N, spec_, nullptr, 1, n_c_, real_, nullptr, 1, n_x_,
                                  FFTW_ESTIMATE);
}

PoissonSolver1D::~PoissonSolver1D() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(spec_);
}

void PoissonSolver1D::solve(const Field1D& f, Field1D& u) {
    if (f.n_x != n_x_ || f.n_k != n_t_ - 1)
        throw std::invalid_argument("poisson: rhs shape mismatch");
    const int N = n_t_ - 1;

    std::memcpy(real_, f.v.data(), sizeof(double) * (size_t)N * n_x_);
    fftw_execute(fwd_);

    auto* spec = reinterpret_cast<std::complex<double>*>(spec_);
#pragma omp parallel for schedule(static)
    for (int w = 0; w < n_c_; ++w) thomas_time(spec + w, n_c_, N, lambda_[w], dt_);

    fftw_execute(bwd_);  // unnormalized; scale by 1/n_x below

    if (u.n_x != n_x_ || u.n_k != n_t_) u = Field1D(n_x_, n_t_);
    for (int i = 0; i < n_x_; ++i) u(i, 0) = 0.0;
    const double scale = 1.0 / n_x_;
    for (int k = 0; k < N; ++k) {
        const double* src = real_ + (size_t)k * n_x_;
        double* dst = u.slice(k + 1);
        for (int i = 0; i < n_x_; ++i) dst[i] = scale * src[i];
    }
}

// ---------------------------------------------------------------------------

PoissonSolver2D::PoissonSolver2D(int n_x, int n_y, int n_t, double dx, double dy, double dt)
    : n_x_(n_x), n_y_(n_y), n_t_(n_t), n_cx_(n_x / 2 + 1), dx_(dx), dy_(dy), dt_(dt) {
    if (n_x < 1 || n_y < 1 || n_t < 2 || !(dx > 0.0) || !(dy > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("poisson: bad grid parameters");
    lambda_x_ = dxx_eigenvalues(n_x, dx);
    lambda_y_.resize(n_y);
    for (int j = 0; j < n_y; ++j)
        lambda_y_[j] = (2.0 - 2.0 * std::cos(kTwoPi * j / n_y)) / (dy * dy);

    const int N = n_t_ - 1;
    const int dims[2] = {n_y_, n_x_};  // row-major slices, x fastest
    real_ = fftw_alloc_real((size_t)N * n_y_ * n_x_);
    spec_ = fftw_alloc_complex((size_t)N * n_y_ * n_cx_);
    fwd_ = fftw_plan_many_dft_r2c(2, dims, N, real_, nullptr, 1, n_y_ * n_x_, spec_, nullptr, 1,
                                  n_y_ * n_cx_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_many_dft_c2r(2, dims, N, spec_, nullptr, 1, n_y_ * n_cx_, real_, nullptr, 1,
                                  n_y_ * n_x_, FFTW_ESTIMATE);
}

PoissonSolver2D::~PoissonSolver2D() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(spec_);
}

void PoissonSolver2D::solve(const Field2D& f, Field2D& u) {
    if (f.n_x != n_x_ || f.n_y != n_y_ || f.n_k != n_t_ - 1)
        throw std::invalid_argument("poisson: rhs shape mismatch");
    const int N = n_t_ - 1;
    const size_t per_slice = (size_t)n_y_ * n_cx_;

    std::memcpy(real_, f.v.data(), sizeof(double) * (size_t)N * n_y_ * n_x_);
    fftw_execute(fwd_);

    auto* spec = reinterpret_cast<std::complex<double>*>(spec_);
#pragma omp parallel for schedule(static)
    for (int jw = 0; jw < (int)per_slice; ++jw) {
        const int j = jw / n_cx_, w = jw % n_cx_;
        thomas_time(spec + jw, per_slice, N, lambda_y_[j] + lambda_x_[w], dt_);
    }

    fftw_execute(bwd_);

    if (u.n_x != n_x_ || u.n_y != n_y_ || u.n_k != n_t_) u = Field2D(n_x_, n_y_, n_t_);
    const size_t sz = (size_t)n_y_ * n_x_;
    for (size_t i = 0; i < sz; ++i) u.v[i] = 0.0;
    const double scale = 1.0 / ((double)n_x_ * n_y_);
    for (int k = 0; k < N; ++k) {
        const double* src = real_ + (size_t)k * sz;
        double* dst = u.slice(k + 1);
        for (size_t i = 0; i < sz; ++i) dst[i] = scale * src[i];
    }
}

// ---------------------------------------------------------------------------

void poisson_apply_1d(const Field1D& u, double dx, double dt, Field1D& f) {
    const int n_x = u.n_x, n_t = u.n_k;
    const double idt2 = 1.0 / (dt * dt);
    f = Field1D(n_x, n_t - 1);
    for (int k = 1; k < n_t; ++k) {
        std::span<const double> cur(u.slice(k), (size_t)n_x);
        for (int i = 0; i < n_x; ++i) {
            // ghost slice n_t equals slice n_t-1, initial slice is u(.,0)
            const double up = (k + 1 < n_t) ? u(i, k + 1) : u(i, n_t - 1);
            const double dn = u(i, k - 1);
            const double dtt = (dn - 2.0 * u(i, k) + up) * idt2;
            f(i, k - 1) = -dtt - d_xx(cur, i, dx);
        }
    }
}

void poisson_apply_2d(const Field2D& u, double dx, double dy, double dt, Field2D& f) {
    const int n_x = u.n_x, n_y = u.n_y, n_t = u.n_k;
    const double idt2 = 1.0 / (dt * dt);
    f = Field2D(n_x, n_y, n_t - 1);
    for (int k = 1; k < n_t; ++k) {
        for (int j = 0; j < n_y; ++j) {
            for (int i = 0; i < n_x; ++i) {
                const double up = (k + 1 < n_t) ? u(i, j, k + 1) : u(i, j, n_t - 1);
                const double dn = u(i, j, k - 1);
                const double dtt = (dn - 2.0 * u(i, j, k) + up) * idt2;
                const double uxx = (u(wrap(i - 1, n_x), j, k) - 2.0 * u(i, j, k) +
                                    u(wrap(i + 1, n_x), j, k)) /
                                   (dx * dx);
                const double uyy = (u(i, wrap(j - 1, n_y), k) - 2.0 * u(i, j, k) +
                                    u(i, wrap(j + 1, n_y), k)) /
                                   (dy * dy);
                f(i, j, k - 1) = -dtt - uxx - uyy;
            }
        }
    }
}

}  // namespace hj
