#ifndef HJ_HAMILTONIAN_HPP
#define HJ_HAMILTONIAN_HPP

#include <functional>
#include <memory>
#include <string>

namespace hj {

// Space-time coefficient fields, e.g. an additive shift f(x,t) or a speed gamma(x,t).
using Fn1D = std::function<double(double x, double t)>;
using Fn2D = std::function<double(double x, double y, double t)>;

/* Monotone numerical Hamiltonian Hhat(x,t,p+,p-) built from upwinded one-sided
 * differences, together with its convex conjugate in the dual pair v = (v+, v-)
 * and the proximal step used by the dual update:
 *
 *   conjugate_prox returns argmin_v  Hhat*(x,t,v) - <d, v> + (rho/(2*sigma)) |v - v_old|^2.
 *
 * For rho = 0 the quadratic term vanishes and the linear program is solved
 * exactly, breaking ties toward the smallest |v| (indicator-type conjugates)
 * or the unconstrained stationary point (smooth conjugates).
 *
 * Monotonicity of the scheme requires v+ <= 0 <= v-; every conjugate here is
 * +infinity outside that quadrant, and every prox lands inside it.
 */
class Hamiltonian1D {
public:
    virtual ~Hamiltonian1D() = default;

    virtual double eval(double x, double t, double p_plus, double p_minus) const = 0;

    // Hhat*(x,t,v); +infinity when v is infeasible.
    virtual double conjugate(double x, double t, double v_plus, double v_minus) const = 0;

    // Throws std::invalid_argument when sigma <= 0 or rho < 0.
    virtual void conjugate_prox(double x, double t, double d_plus, double d_minus,
                                double v_old_plus, double v_old_minus, double rho, double sigma,
                                double& v_plus, double& v_minus) const = 0;
};

/* 2D twin. Dual 4-vectors are passed as arrays ordered (vx+, vx-, vy+, vy-);
 * the difference vector d follows the same order. */
class Hamiltonian2D {
public:
    virtual ~Hamiltonian2D() = default;

    virtual double eval(double x, double y, double t, double px_plus, double px_minus,
                        double py_plus, double py_minus) const = 0;

    virtual double conjugate(double x, double y, double t, const double v[4]) const = 0;

    virtual void conjugate_prox(double x, double y, double t, const double d[4],
                                const double v_old[4], double rho, double sigma,
                                double v_out[4]) const = 0;
};

// Hhat = 1/2 min{p+,0}^2 + 1/2 max{p-,0}^2 (+ shift(x,t) when given).
std::shared_ptr<Hamiltonian1D> make_quadratic_1d();
std::shared_ptr<Hamiltonian1D> make_quadratic_shifted_1d(Fn1D shift);
std::shared_ptr<Hamiltonian2D> make_quadratic_2d();
std::shared_ptr<Hamiltonian2D> make_quadratic_shifted_2d(Fn2D shift);

// Hhat = gamma(x,t) (max{-p+,0} + max{p-,0}) + f(x,t), gamma > 0; upwinding of
// gamma(x,t)|p| + f(x,t). Pass empty functions for gamma == 1 or f == 0.
std::shared_ptr<Hamiltonian1D> make_l1_1d(Fn1D gamma = {}, Fn1D f = {});
std::shared_ptr<Hamiltonian2D> make_l1_2d(Fn2D gamma = {}, Fn2D f = {});

// Hhat = sqrt(min{p+,0}^2 + max{p-,0}^2) + potential(x,t); upwinding of
// |grad phi| + potential, after Osher and Sethian.
std::shared_ptr<Hamiltonian1D> make_norm_potential_1d(Fn1D potential = {});
std::shared_ptr<Hamiltonian2D> make_norm_potential_2d(Fn2D potential = {});

// Conjugate value that refuses infeasible duals (throws std::domain_error)
// instead of returning +infinity.
double conjugate_value(const Hamiltonian1D& h, double x, double t, double v_plus, double v_minus);
double conjugate_value(const Hamiltonian2D& h, double x, double y, double t, const double v[4]);

}  // namespace hj

#endif
