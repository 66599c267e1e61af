#ifndef HJ_KERNELS_HPP
#define HJ_KERNELS_HPP

#include "hj/grid.hpp"
#include "hj/hamiltonian.hpp"

/* Hot loops of the solvers, each in a serial and an OpenMP flavor. The two
 * flavors are bit-identical by construction: parallel loops only split
 * independent rows (a time slice in 1D, a (slice, y-line) pair in 2D), every
 * row is computed by the same shared body, and reductions store per-row
 * partial sums that are folded sequentially in a fixed order afterwards.
 * The serial flavor is the reference; test_kernels checks equality bit for bit
 * and bench_kernels times the two against each other.
 */
namespace hj::kernels {

// Upwind differences of the extrapolated primal at slice k+1, stored at dual
// row k (k = 0..n_t-2): dp/dm are D_x^+/D_x^-, dt is D_t^-, dxx the centered
// second difference.
struct Derivs1D {
    Field1D dp, dm, dt, dxx;
};
// 2D adds the y pair; dlap is the full spatial Laplacian.
struct Derivs2D {
    Field2D dxp, dxm, dyp, dym, dt, dlap;
};

#define HJ_KERNEL_DECLS                                                                       \
    void derivs_1d(const Field1D& phibar, const Grid1D& g, Derivs1D& out);                    \
    void derivs_2d(const Field2D& phibar, const Grid2D& g, Derivs2D& out);                    \
                                                                                              \
    /* rhs = D_t^+ rho + D_x^-(rho v+) + D_x^+(rho v-) + eps D_xx rho */                      \
    void phi_rhs_general_1d(const Field1D& rho, const Field1D& vp, const Field1D& vm,         \
                            double c, const Grid1D& g, double eps, Field1D& rhs);             \
    void phi_rhs_general_2d(const Field2D& rho, const Field2D& vp, const Field2D& vm,         \
                            const Field2D& wp, const Field2D& wm, double c, const Grid2D& g,  \
                            double eps, Field2D& rhs);                                        \
                                                                                              \
    /* One dual sweep: prox step on (v+, v-), then rho <- max(mu, 0) with the */              \
    /* fresh v and the pre-sweep rho. In-place, every (i, k) independent. */                  \
    void dual_round_general_1d(const Derivs1D& d, const Grid1D& g, const Hamiltonian1D& h,    \
                               double sigma, double eps, Field1D& rho, Field1D& vp,           \
                               Field1D& vm);                                                  \
    void dual_round_general_2d(const Derivs2D& d, const Grid2D& g, const Hamiltonian2D& h,    \
                               double sigma, double eps, Field2D& rho, Field2D& vp,           \
                               Field2D& vm, Field2D& wp, Field2D& wm);                        \
                                                                                              \
    /* Sum over slices k >= 1 and all nodes of */                                            \
    /* |D_t^- phi + Hhat(x, t_k, D phi) - eps Lap phi|. */                                    \
    double residual_sum_1d(const Field1D& phi, const Grid1D& g, const Hamiltonian1D& h,       \
                           double eps);                                                       \
    double residual_sum_2d(const Field2D& phi, const Grid2D& g, const Hamiltonian2D& h,       \
                           double eps);                                                       \
                                                                                              \
    /* rhs = D_t^+ rho + D_x^- m + eps D_xx rho (flux form) */                                \
    void phi_rhs_homog_1d(const Field1D& rho, const Field1D& m, double c, const Grid1D& g,    \
                          double eps, Field1D& rhs);                                          \
    void phi_rhs_homog_2d(const Field2D& rho, const Field2D& m1, const Field2D& m2, double c, \
                          const Grid2D& g, double eps, Field2D& rhs);                         \
                                                                                              \
    /* One flux-form dual sweep: z = m + sigma dp, exact rho minimization, */                 \
    /* then clamp m onto the fresh feasibility interval. gamma and f are */                   \
    /* pre-sampled at (x_i, t_{k+1}) in dual shape; z is scratch of that shape. */            \
    void dual_round_homog_1d(const Derivs1D& d, const Field1D& gamma, const Field1D& f,       \
                             double sigma, double eps, Field1D& rho, Field1D& m,              \
                             Field1D& z);                                                     \
    void dual_round_homog_2d(const Derivs2D& d, const Field2D& gamma, const Field2D& f,       \
                             double sigma, double eps, Field2D& rho, Field2D& m1,             \
                             Field2D& m2, Field2D& z1, Field2D& z2);

namespace serial {
HJ_KERNEL_DECLS
}
namespace omp {
HJ_KERNEL_DECLS
}

#undef HJ_KERNEL_DECLS

}  // namespace hj::kernels

#endif
