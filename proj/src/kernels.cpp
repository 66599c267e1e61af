#include "hj/kernels.hpp"

#include <cmath>

#include "hj/pdhg_homogeneous.hpp"

#if defined(_OPENMP)
#define HJ_OMP_FOR _Pragma("omp parallel for schedule(static)")
#else
#define HJ_OMP_FOR
#endif

namespace hj::kernels {

namespace {

// Run body(r) for r = 0..n-1, optionally splitting rows across threads. Rows
// write disjoint data, so the parallel flavor is a pure reordering.
template <class F>
inline void for_rows(bool par, int n, const F& body) {
    if (par) {
        HJ_OMP_FOR
        for (int r = 0; r < n; ++r) body(r);
    } else {
        for (int r = 0; r < n; ++r) body(r);
    }
}

// Fixed-order fold; both flavors reduce per-row partials through this.
inline double ordered_sum(const std::vector<double>& part) {
    double s = 0.0;
    for (double p : part) s += p;
    return s;
}

inline void ensure(Field1D& f, int nx, int nk) {
    if (f.n_x != nx || f.n_k != nk) f = Field1D(nx, nk);
}
inline void ensure(Field2D& f, int nx, int ny, int nk) {
    if (f.n_x != nx || f.n_y != ny || f.n_k != nk) f = Field2D(nx, ny, nk);
}

// ---------------------------------------------------------------------------
// 1D row bodies

void derivs_row_1d(const Field1D& pb, double dx, double dt, int k, Derivs1D& o) {
    const int n = pb.n_x;
    std::span<const double> s(pb.slice(k + 1), (size_t)n);
    for (int i = 0; i < n; ++i) {
        o.dp(i, k) = d_x_plus(s, i, dx);
        o.dm(i, k) = d_x_minus(s, i, dx);
        o.dt(i, k) = d_t_minus(pb, dt, i, k + 1);
        o.dxx(i, k) = d_xx(s, i, dx);
    }
}

void phi_rhs_row_general_1d(const Field1D& rho, const Field1D& vp, const Field1D& vm, double c,
                            double dx, double dt, double eps, int k, Field1D& rhs) {
    const int n = rho.n_x;
    for (int i = 0; i < n; ++i) {
        const int im = wrap(i - 1, n), ip = wrap(i + 1, n);
        const double div_p = (rho(i, k) * vp(i, k) - rho(im, k) * vp(im, k)) / dx;
        const double div_m = (rho(ip, k) * vm(ip, k) - rho(i, k) * vm(i, k)) / dx;
        const double lap = (rho(ip, k) - 2.0 * rho(i, k) + rho(im, k)) / (dx * dx);
        rhs(i, k) = d_t_plus_rho(rho, c, dt, i, k) + div_p + div_m + eps * lap;
    }
}

void dual_row_general_1d(const Derivs1D& d, const Grid1D& g, const Hamiltonian1D& h,
                         double sigma, double eps, int k, Field1D& rho, Field1D& vp,
                         Field1D& vm) {
    const double t = g.t(k + 1);
    for (int i = 0; i < rho.n_x; ++i) {
        const double x = g.x(i);
        double nvp, nvm;
        h.conjugate_prox(x, t, d.dp(i, k), d.dm(i, k), vp(i, k), vm(i, k), rho(i, k), sigma,
                         nvp, nvm);
        const double mu = rho(i, k) + sigma * (d.dt(i, k) + nvp * d.dp(i, k) +
                                               nvm * d.dm(i, k) - h.conjugate(x, t, nvp, nvm) -
                                               eps * d.dxx(i, k));
        vp(i, k) = nvp;
        vm(i, k) = nvm;
        rho(i, k) = std::max(mu, 0.0);
    }
}

double residual_row_1d(const Field1D& phi, const Grid1D& g, const Hamiltonian1D& h, double eps,
                       int ks) {  // slice index, 1..n_t-1
    const int n = phi.n_x;
    const double dx = g.dx(), dt = g.dt(), t = g.t(ks);
    std::span<const double> s(phi.slice(ks), (size_t)n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = d_t_minus(phi, dt, i, ks) +
                         h.eval(g.x(i), t, d_x_plus(s, i, dx), d_x_minus(s, i, dx)) -
                         eps * d_xx(s, i, dx);
        sum += std::fabs(r);
    }
    return sum;
}

void phi_rhs_row_homog_1d(const Field1D& rho, const Field1D& m, double c, double dx, double dt,
                          double eps, int k, Field1D& rhs) {
    const int n = rho.n_x;
    for (int i = 0; i < n; ++i) {
        const int im = wrap(i - 1, n), ip = wrap(i + 1, n);
        const double div_m = (m(i, k) - m(im, k)) / dx;
        const double lap = (rho(ip, k) - 2.0 * rho(i, k) + rho(im, k)) / (dx * dx);
        rhs(i, k) = d_t_plus_rho(rho, c, dt, i, k) + div_m + eps * lap;
    }
}

void z_row_homog_1d(const Derivs1D& d, double sigma, int k, const Field1D& m, Field1D& z) {
    for (int i = 0; i < m.n_x; ++i) z(i, k) = m(i, k) + sigma * d.dp(i, k);
}

void rho_row_homog_1d(const Derivs1D& d, const Field1D& gam, const Field1D& f, double sigma,
                      double eps, int k, const Field1D& z, Field1D& rho) {
    const int n = rho.n_x;
    for (int i = 0; i < n; ++i) {
        const double alpha =
            rho(i, k) + sigma * (d.dt(i, k) + f(i, k) - eps * d.dxx(i, k));
        rho(i, k) = rho_update_1d(alpha, z(i, k), z(wrap(i - 1, n), k), gam(i, k), gam(i, k));
    }
}

void m_row_homog_1d(const Field1D& gam, int k, const Field1D& z, const Field1D& rho,
                    Field1D& m) {
    const int n = m.n_x;
    for (int i = 0; i < n; ++i) {
        const int ip = wrap(i + 1, n);
        m(i, k) = m_update(z(i, k), rho(i, k), gam(i, k), rho(ip, k), gam(ip, k));
    }
}

// ---------------------------------------------------------------------------
// 2D row bodies; a row is one y-line (j fixed) of one dual slice k.

void derivs_row_2d(const Field2D& pb, const Grid2D& g, int k, int j, Derivs2D& o) {
    const int nx = pb.n_x, ny = pb.n_y;
    const double dx = g.dx(), dy = g.dy(), dt = g.dt();
    const int jm = wrap(j - 1, ny), jp = wrap(j + 1, ny);
    for (int i = 0; i < nx; ++i) {
        const int im = wrap(i - 1, nx), ip = wrap(i + 1, nx);
        const double c = pb(i, j, k + 1);
        const double xp = pb(ip, j, k + 1), xm = pb(im, j, k + 1);
        const double yp = pb(i, jp, k + 1), ym = pb(i, jm, k + 1);
        o.dxp(i, j, k) = (xp - c) / dx;
        o.dxm(i, j, k) = (c - xm) / dx;
        o.dyp(i, j, k) = (yp - c) / dy;
        o.dym(i, j, k) = (c - ym) / dy;
        o.dt(i, j, k) = (c - pb(i, j, k)) / dt;
        o.dlap(i, j, k) = (xp - 2.0 * c + xm) / (dx * dx) + (yp - 2.0 * c + ym) / (dy * dy);
    }
}

void phi_rhs_row_general_2d(const Field2D& rho, const Field2D& vp, const Field2D& vm,
                            const Field2D& wp, const Field2D& wm, double c, const Grid2D& g,
                            double eps, int k, int j, Field2D& rhs) {
    const int nx = rho.n_x, ny = rho.n_y;
    const double dx = g.dx(), dy = g.dy(), dt = g.dt();
    const int jm = wrap(j - 1, ny), jp = wrap(j + 1, ny);
    for (int i = 0; i < nx; ++i) {
        const int im = wrap(i - 1, nx), ip = wrap(i + 1, nx);
        const double div_x = (rho(i, j, k) * vp(i, j, k) - rho(im, j, k) * vp(im, j, k)) / dx +
                             (rho(ip, j, k) * vm(ip, j, k) - rho(i, j, k) * vm(i, j, k)) / dx;
        const double div_y = (rho(i, j, k) * wp(i, j, k) - rho(i, jm, k) * wp(i, jm, k)) / dy +
                             (rho(i, jp, k) * wm(i, jp, k) - rho(i, j, k) * wm(i, j, k)) / dy;
        const double lap =
            (rho(ip, j, k) - 2.0 * rho(i, j, k) + rho(im, j, k)) / (dx * dx) +
            (rho(i, jp, k) - 2.0 * rho(i, j, k) + rho(i, jm, k)) / (dy * dy);
        rhs(i, j, k) = d_t_plus_rho(rho, c, dt, i, j, k) + div_x + div_y + eps * lap;
    }
}

void dual_row_general_2d(const Derivs2D& d, const Grid2D& g, const Hamiltonian2D& h,
                         double sigma, double eps, int k, int j, Field2D& rho, Field2D& vp,
                         Field2D& vm, Field2D& wp, Field2D& wm) {
    const double t = g.t(k + 1), y = g.y(j);
    for (int i = 0; i < rho.n_x; ++i) {
        const double x = g.x(i);
        const double dv[4] = {d.dxp(i, j, k), d.dxm(i, j, k), d.dyp(i, j, k), d.dym(i, j, k)};
        const double v0[4] = {vp(i, j, k), vm(i, j, k), wp(i, j, k), wm(i, j, k)};
        double nv[4];
        h.conjugate_prox(x, y, t, dv, v0, rho(i, j, k), sigma, nv);
        const double bilinear =
            nv[0] * dv[0] + nv[1] * dv[1] + nv[2] * dv[2] + nv[3] * dv[3];
        const double mu =
            rho(i, j, k) + sigma * (d.dt(i, j, k) + bilinear - h.conjugate(x, y, t, nv) -
                                    eps * d.dlap(i, j, k));
        vp(i, j, k) = nv[0];
        vm(i, j, k) = nv[1];
        wp(i, j, k) = nv[2];
        wm(i, j, k) = nv[3];
        rho(i, j, k) = std::max(mu, 0.0);
    }
}

double residual_row_2d(const Field2D& phi, const Grid2D& g, const Hamiltonian2D& h, double eps,
                       int ks, int j) {
    const int nx = phi.n_x, ny = phi.n_y;
    const double dx = g.dx(), dy = g.dy(), dt = g.dt(), t = g.t(ks), y = g.y(j);
    const int jm = wrap(j - 1, ny), jp = wrap(j + 1, ny);
    double sum = 0.0;
    for (int i = 0; i < nx; ++i) {
        const int im = wrap(i - 1, nx), ip = wrap(i + 1, nx);
        const double c = phi(i, j, ks);
        const double lap = (phi(ip, j, ks) - 2.0 * c + phi(im, j, ks)) / (dx * dx) +
                           (phi(i, jp, ks) - 2.0 * c + phi(i, jm, ks)) / (dy * dy);
        const double r = (c - phi(i, j, ks - 1)) / dt +
                         h.eval(g.x(i), y, t, (phi(ip, j, ks) - c) / dx,
                                (c - phi(im, j, ks)) / dx, (phi(i, jp, ks) - c) / dy,
                                (c - phi(i, jm, ks)) / dy) -
                         eps * lap;
        sum += std::fabs(r);
    }
    return sum;
}

void phi_rhs_row_homog_2d(const Field2D& rho, const Field2D& m1, const Field2D& m2, double c,
                          const Grid2D& g, double eps, int k, int j, Field2D& rhs) {
    const int nx = rho.n_x, ny = rho.n_y;
    const double dx = g.dx(), dy = g.dy(), dt = g.dt();
    const int jm = wrap(j - 1, ny), jp = wrap(j + 1, ny);
    for (int i = 0; i < nx; ++i) {
        const int im = wrap(i - 1, nx), ip = wrap(i + 1, nx);
        const double div_m =
            (m1(i, j, k) - m1(im, j, k)) / dx + (m2(i, j, k) - m2(i, jm, k)) / dy;
        const double lap =
            (rho(ip, j, k) - 2.0 * rho(i, j, k) + rho(im, j, k)) / (dx * dx) +
            (rho(i, jp, k) - 2.0 * rho(i, j, k) + rho(i, jm, k)) / (dy * dy);
        rhs(i, j, k) = d_t_plus_rho(rho, c, dt, i, j, k) + div_m + eps * lap;
    }
}

void z_row_homog_2d(const Derivs2D& d, double sigma, int k, int j, const Field2D& m1,
                    const Field2D& m2, Field2D& z1, Field2D& z2) {
    for (int i = 0; i < m1.n_x; ++i) {
        z1(i, j, k) = m1(i, j, k) + sigma * d.dxp(i, j, k);
        z2(i, j, k) = m2(i, j, k) + sigma * d.dyp(i, j, k);
    }
}

void rho_row_homog_2d(const Derivs2D& d, const Field2D& gam, const Field2D& f, double sigma,
                      double eps, int k, int j, const Field2D& z1, const Field2D& z2,
                      Field2D& rho) {
    const int nx = rho.n_x, ny = rho.n_y;
    const int jm = wrap(j - 1, ny);
    for (int i = 0; i < nx; ++i) {
        const int im = wrap(i - 1, nx);
        const double alpha =
            rho(i, j, k) + sigma * (d.dt(i, j, k) + f(i, j, k) - eps * d.dlap(i, j, k));
        const double gc = gam(i, j, k);
        rho(i, j, k) = rho_update_2d(alpha, z1(i, j, k), z1(im, j, k), z2(i, j, k),
                                     z2(i, jm, k), gc, gc, gc, gc);
    }
}

void m_row_homog_2d(const Field2D& gam, int k, int j, const Field2D& z1, const Field2D& z2,
                    const Field2D& rho, Field2D& m1, Field2D& m2) {
    const int nx = m1.n_x, ny = m1.n_y;
    const int jp = wrap(j + 1, ny);
    for (int i = 0; i < nx; ++i) {
        const int ip = wrap(i + 1, nx);
        m1(i, j, k) = m_update(z1(i, j, k), rho(i, j, k), gam(i, j, k), rho(ip, j, k),
                               gam(ip, j, k));
        m2(i, j, k) = m_update(z2(i, j, k), rho(i, j, k), gam(i, j, k), rho(i, jp, k),
                               gam(i, jp, k));
    }
}

// ---------------------------------------------------------------------------
// Shared drivers; `par` switches the OpenMP flavor on.

void derivs_1d_impl(bool par, const Field1D& pb, const Grid1D& g, Derivs1D& o) {
    const int K = pb.n_k - 1;
    ensure(o.dp, pb.n_x, K);
    ensure(o.dm, pb.n_x, K);
    ensure(o.dt, pb.n_x, K);
    ensure(o.dxx, pb.n_x, K);
    const double dx = g.dx(), dt = g.dt();
    for_rows(par, K, [&](int k) { derivs_row_1d(pb, dx, dt, k, o); });
}

void derivs_2d_impl(bool par, const Field2D& pb, const Grid2D& g, Derivs2D& o) {
    const int K = pb.n_k - 1, ny = pb.n_y;
    ensure(o.dxp, pb.n_x, ny, K);
    ensure(o.dxm, pb.n_x, ny, K);
    ensure(o.dyp, pb.n_x, ny, K);
    ensure(o.dym, pb.n_x, ny, K);
    ensure(o.dt, pb.n_x, ny, K);
    ensure(o.dlap, pb.n_x, ny, K);
    for_rows(par, K * ny, [&](int r) { derivs_row_2d(pb, g, r / ny, r % ny, o); });
}

void phi_rhs_general_1d_impl(bool par, const Field1D& rho, const Field1D& vp,
                             const Field1D& vm, double c, const Grid1D& g, double eps,
                             Field1D& rhs) {
    ensure(rhs, rho.n_x, rho.n_k);
    const double dx = g.dx(), dt = g.dt();
    for_rows(par, rho.n_k,
             [&](int k) { phi_rhs_row_general_1d(rho, vp, vm, c, dx, dt, eps, k, rhs); });
}

void phi_rhs_general_2d_impl(bool par, const Field2D& rho, const Field2D& vp,
                             const Field2D& vm, const Field2D& wp, const Field2D& wm, double c,
                             const Grid2D& g, double eps, Field2D& rhs) {
    ensure(rhs, rho.n_x, rho.n_y, rho.n_k);
    const int ny = rho.n_y;
    for_rows(par, rho.n_k * ny, [&](int r) {
        phi_rhs_row_general_2d(rho, vp, vm, wp, wm, c, g, eps, r / ny, r % ny, rhs);
    });
}

void dual_round_general_1d_impl(bool par, const Derivs1D& d, const Grid1D& g,
                                const Hamiltonian1D& h, double sigma, double eps, Field1D& rho,
                                Field1D& vp, Field1D& vm) {
    for_rows(par, rho.n_k,
             [&](int k) { dual_row_general_1d(d, g, h, sigma, eps, k, rho, vp, vm); });
}

void dual_round_general_2d_impl(bool par, const Derivs2D& d, const Grid2D& g,
                                const Hamiltonian2D& h, double sigma, double eps, Field2D& rho,
                                Field2D& vp, Field2D& vm, Field2D& wp, Field2D& wm) {
    const int ny = rho.n_y;
    for_rows(par, rho.n_k * ny, [&](int r) {
        dual_row_general_2d(d, g, h, sigma, eps, r / ny, r % ny, rho, vp, vm, wp, wm);
    });
}

double residual_sum_1d_impl(bool par, const Field1D& phi, const Grid1D& g,
                            const Hamiltonian1D& h, double eps) {
    std::vector<double> part(phi.n_k - 1);
    for_rows(par, phi.n_k - 1,
             [&](int r) { part[r] = residual_row_1d(phi, g, h, eps, r + 1); });
    return ordered_sum(part);
}

double residual_sum_2d_impl(bool par, const Field2D& phi, const Grid2D& g,
                            const Hamiltonian2D& h, double eps) {
    const int ny = phi.n_y;
    std::vector<double> part((size_t)(phi.n_k - 1) * ny);
    for_rows(par, (phi.n_k - 1) * ny,
             [&](int r) { part[r] = residual_row_2d(phi, g, h, eps, r / ny + 1, r % ny); });
    return ordered_sum(part);
}

void phi_rhs_homog_1d_impl(bool par, const Field1D& rho, const Field1D& m, double c,
                           const Grid1D& g, double eps, Field1D& rhs) {
    ensure(rhs, rho.n_x, rho.n_k);
    const double dx = g.dx(), dt = g.dt();
    for_rows(par, rho.n_k, [&](int k) { phi_rhs_row_homog_1d(rho, m, c, dx, dt, eps, k, rhs); });
}

void phi_rhs_homog_2d_impl(bool par, const Field2D& rho, const Field2D& m1, const Field2D& m2,
                           double c, const Grid2D& g, double eps, Field2D& rhs) {
    ensure(rhs, rho.n_x, rho.n_y, rho.n_k);
    const int ny = rho.n_y;
    for_rows(par, rho.n_k * ny, [&](int r) {
        phi_rhs_row_homog_2d(rho, m1, m2, c, g, eps, r / ny, r % ny, rhs);
    });
}

/* The three passes of a flux-form sweep are separate parallel loops: the rho
 * pass reads the full z field of this sweep, and the m pass reads the full
 * fresh rho field, so each pass must complete before the next starts. */
void dual_round_homog_1d_impl(bool par, const Derivs1D& d, const Field1D& gam,
                              const Field1D& f, double sigma, double eps, Field1D& rho,
                              Field1D& m, Field1D& z) {
    ensure(z, m.n_x, m.n_k);
    const int K = m.n_k;
    for_rows(par, K, [&](int k) { z_row_homog_1d(d, sigma, k, m, z); });
    for_rows(par, K, [&](int k) { rho_row_homog_1d(d, gam, f, sigma, eps, k, z, rho); });
    for_rows(par, K, [&](int k) { m_row_homog_1d(gam, k, z, rho, m); });
}

void dual_round_homog_2d_impl(bool par, const Derivs2D& d, const Field2D& gam,
                              const Field2D& f, double sigma, double eps, Field2D& rho,
                              Field2D& m1, Field2D& m2, Field2D& z1, Field2D& z2) {
    ensure(z1, m1.n_x, m1.n_y, m1.n_k);
    ensure(z2, m1.n_x, m1.n_y, m1.n_k);
    const int ny = m1.n_y, R = m1.n_k * ny;
    for_rows(par, R, [&](int r) { z_row_homog_2d(d, sigma, r / ny, r % ny, m1, m2, z1, z2); });
    for_rows(par, R, [&](int r) {
        rho_row_homog_2d(d, gam, f, sigma, eps, r / ny, r % ny, z1, z2, rho);
    });
    for_rows(par, R, [&](int r) { m_row_homog_2d(gam, r / ny, r % ny, z1, z2, rho, m1, m2); });
}

}  // namespace

// Front ends.

#define HJ_KERNEL_DEFS(ns, PAR)                                                               \
    namespace ns {                                                                            \
    void derivs_1d(const Field1D& pb, const Grid1D& g, Derivs1D& o) {                         \
        derivs_1d_impl(PAR, pb, g, o);                                                        \
    }                                                                                         \
    void derivs_2d(const Field2D& pb, const Grid2D& g, Derivs2D& o) {                         \
        derivs_2d_impl(PAR, pb, g, o);                                                        \
    }                                                                                         \
    void phi_rhs_general_1d(const Field1D& rho, const Field1D& vp, const Field1D& vm,         \
                            double c, const Grid1D& g, double eps, Field1D& rhs) {            \
        phi_rhs_general_1d_impl(PAR, rho, vp, vm, c, g, eps, rhs);                            \
    }                                                                                         \
    void phi_rhs_general_2d(const Field2D& rho, const Field2D& vp, const Field2D& vm,         \
                            const Field2D& wp, const Field2D& wm, double c, const Grid2D& g,  \
                            double eps, Field2D& rhs) {                                       \
        phi_rhs_general_2d_impl(PAR, rho, vp, vm, wp, wm, c, g, eps, rhs);                    \
    }                                                                                         \
    void dual_round_general_1d(const Derivs1D& d, const Grid1D& g, const Hamiltonian1D& h,    \
                               double sigma, double eps, Field1D& rho, Field1D& vp,           \
                               Field1D& vm) {                                                 \
        dual_round_general_1d_impl(PAR, d, g, h, sigma, eps, rho, vp, vm);                    \
    }                                                                                         \
    void dual_round_general_2d(const Derivs2D& d, const Grid2D& g, const Hamiltonian2D& h,    \
                               double sigma, double eps, Field2D& rho, Field2D& vp,           \
                               Field2D& vm, Field2D& wp, Field2D& wm) {                       \
        dual_round_general_2d_impl(PAR, d, g, h, sigma, eps, rho, vp, vm, wp, wm);            \
    }                                                                                         \
    double residual_sum_1d(const Field1D& phi, const Grid1D& g, const Hamiltonian1D& h,       \
                           double eps) {                                                      \
        return residual_sum_1d_impl(PAR, phi, g, h, eps);                                     \
    }                                                                                         \
    double residual_sum_2d(const Field2D& phi, const Grid2D& g, const Hamiltonian2D& h,       \
                           double eps) {                                                      \
        return residual_sum_2d_impl(PAR, phi, g, h, eps);                                     \
    }                                                                                         \
    void phi_rhs_homog_1d(const Field1D& rho, const Field1D& m, double c, const Grid1D& g,    \
                          double eps, Field1D& rhs) {                                         \
        phi_rhs_homog_1d_impl(PAR, rho, m, c, g, eps, rhs);                                   \
    }                                                                                         \
    void phi_rhs_homog_2d(const Field2D& rho, const Field2D& m1, const Field2D& m2, double c, \
                          const Grid2D& g, double eps, Field2D& rhs) {                        \
        phi_rhs_homog_2d_impl(PAR, rho, m1, m2, c, g, eps, rhs);                              \
    }                                                                                         \
    void dual_round_homog_1d(const Derivs1D& d, const Field1D& gamma, const Field1D& f,       \
                             double sigma, double eps, Field1D& rho, Field1D& m,              \
                             Field1D& z) {                                                    \
        dual_round_homog_1d_impl(PAR, d, gamma, f, sigma, eps, rho, m, z);                    \
    }                                                                                         \
    void dual_round_homog_2d(const Derivs2D& d, const Field2D& gamma, const Field2D& f,       \
                             double sigma, double eps, Field2D& rho, Field2D& m1,             \
                             Field2D& m2, Field2D& z1, Field2D& z2) {                         \
        dual_round_homog_2d_impl(PAR, d, gamma, f, sigma, eps, rho, m1, m2, z1, z2);          \
    }                                                                                         \
    }

HJ_KERNEL_DEFS(serial, false)
HJ_KERNEL_DEFS(omp, true)

#undef HJ_KERNEL_DEFS

}  // namespace hj::kernels
