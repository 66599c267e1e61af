#include "hj/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Feasibility slack for conjugate(): sign checks are exact for prox outputs,
// the ball check absorbs the one rounding step of clamp-then-scale.
constexpr double kSignTol = 1e-12;
constexpr double kBallTol = 1e-9;

void check_steps(double rho, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("conjugate_prox: sigma must be positive");
    if (!(rho >= 0.0)) throw std::invalid_argument("conjugate_prox: rho must be nonnegative");
}

inline double at(const Fn1D& f, double x, double t) { return f ? f(x, t) : 0.0; }
inline double at(const Fn2D& f, double x, double y, double t) { return f ? f(x, y, t) : 0.0; }

/* Smooth quadratic component: argmin over {v <= 0} or {v >= 0} of
 * 1/2 v^2 - d v + (rho/(2 sigma)) (v - v0)^2. The unconstrained stationary
 * point is (d + w v0)/(1 + w) with w = rho/sigma; one-sided clamping is exact
 * for a convex 1D objective. Well-defined at rho = 0 (w = 0). */
inline double quad_prox_neg(double d, double v0, double w) {
    return std::min(0.0, (d + w * v0) / (1.0 + w));
}
inline double quad_prox_pos(double d, double v0, double w) {
    return std::max(0.0, (d + w * v0) / (1.0 + w));
}

/* Box-indicator component on [lo, hi]: argmin of -d v + (rho/(2 sigma)) (v - v0)^2.
 * For rho > 0, project v0 + sigma d / rho onto the box; for rho = 0 the problem
 * is linear and the minimizer is the box end selected by the sign of d, with
 * ties (d = 0) broken toward the end of smallest magnitude (0 for our boxes). */
inline double box_prox(double d, double v0, double rho, double sigma, double lo, double hi) {
    if (rho > 0.0) return std::clamp(v0 + sigma * d / rho, lo, hi);
    if (d > 0.0) return hi;
    if (d < 0.0) return lo;
    return std::clamp(0.0, lo, hi);
}

// ---------------------------------------------------------------------------
// Quadratic Engquist-Osher splitting of 1/2 |p|^2 (+ shift).

class QuadraticEO1D final : public Hamiltonian1D {
public:
    explicit QuadraticEO1D(Fn1D shift) : shift_(std::move(shift)) {}

    double eval(double x, double t, double pp, double pm) const override {
        const double d = std::min(pp, 0.0), u = std::max(pm, 0.0);
        return 0.5 * (d * d + u * u) + at(shift_, x, t);
    }

    double conjugate(double x, double t, double vp, double vm) const override {
        if (vp > kSignTol || vm < -kSignTol) return kInf;
        return 0.5 * (vp * vp + vm * vm) - at(shift_, x, t);
    }

    void conjugate_prox(double x, double t, double dp, double dm, double vp0, double vm0,
                        double rho, double sigma, double& vp, double& vm) const override {
        (void)x;
        (void)t;
        check_steps(rho, sigma);
        const double w = rho / sigma;
        vp = quad_prox_neg(dp, vp0, w);
        vm = quad_prox_pos(dm, vm0, w);
    }

private:
    Fn1D shift_;
};

class QuadraticEO2D final : public Hamiltonian2D {
public:
    explicit QuadraticEO2D(Fn2D shift) : shift_(std::move(shift)) {}

    double eval(double x, double y, double t, double pxp, double pxm, double pyp,
                double pym) const override {
        const double a = std::min(pxp, 0.0), b = std::max(pxm, 0.0);
        const double c = std::min(pyp, 0.0), d = std::max(pym, 0.0);
        return 0.5 * (a * a + b * b + c * c + d * d) + at(shift_, x, y, t);
    }

    double conjugate(double x, double y, double t, const double v[4]) const override {
        if (v[0] > kSignTol || v[1] < -kSignTol || v[2] > kSignTol || v[3] < -kSignTol)
            return kInf;
        return 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]) -
               at(shift_, x, y, t);
    }

    void conjugate_prox(double x, double y, double t, const double d[4], const double v0[4],
                        double rho, double sigma, double v[4]) const override {
        (void)x;
        (void)y;
        (void)t;
        check_steps(rho, sigma);
        const double w = rho / sigma;
        v[0] = quad_prox_neg(d[0], v0[0], w);
        v[1] = quad_prox_pos(d[1], v0[1], w);
        v[2] = quad_prox_neg(d[2], v0[2], w);
        v[3] = quad_prox_pos(d[3], v0[3], w);
    }

private:
    Fn2D shift_;
};

// ---------------------------------------------------------------------------
// Upwinded gamma(x,t) |p|_1 + f(x,t). Conjugate is a box indicator minus f.

class L1EO1D final : public Hamiltonian1D {
public:
    L1EO1D(Fn1D gamma, Fn1D f) : gamma_(std::move(gamma)), f_(std::move(f)) {}

    double eval(double x, double t, double pp, double pm) const override {
        const double g = gam(x, t);
        return g * (std::max(-pp, 0.0) + std::max(pm, 0.0)) + at(f_, x, t);
    }

    double conjugate(double x, double t, double vp, double vm) const override {
        const double g = gam(x, t);
        if (vp > kSignTol || vp < -g - kSignTol) return kInf;
        if (vm < -kSignTol || vm > g + kSignTol) return kInf;
        return -at(f_, x, t);
    }

    void conjugate_prox(double x, double t, double dp, double dm, double vp0, double vm0,
                        double rho, double sigma, double& vp, double& vm) const override {
        check_steps(rho, sigma);
        const double g = gam(x, t);
        vp = box_prox(dp, vp0, rho, sigma, -g, 0.0);
        vm = box_prox(dm, vm0, rho, sigma, 0.0, g);
    }

private:
    double gam(double x, double t) const {
        const double g = gamma_ ? gamma_(x, t) : 1.0;
        if (!(g > 0.0)) throw std::domain_error("l1 hamiltonian: gamma must be positive");
        return g;
    }
    Fn1D gamma_, f_;
};

class L1EO2D final : public Hamiltonian2D {
public:
    L1EO2D(Fn2D gamma, Fn2D f) : gamma_(std::move(gamma)), f_(std::move(f)) {}

    double eval(double x, double y, double t, double pxp, double pxm, double pyp,
                double pym) const override {
        const double g = gam(x, y, t);
        return g * (std::max(-pxp, 0.0) + std::max(pxm, 0.0) + std::max(-pyp, 0.0) +
                    std::max(pym, 0.0)) +
               at(f_, x, y, t);
    }

    double conjugate(double x, double y, double t, const double v[4]) const override {
        const double g = gam(x, y, t);
        for (int c = 0; c < 4; c += 2)
            if (v[c] > kSignTol || v[c] < -g - kSignTol) return kInf;
        for (int c = 1; c < 4; c += 2)
            if (v[c] < -kSignTol || v[c] > g + kSignTol) return kInf;
        return -at(f_, x, y, t);
    }

    void conjugate_prox(double x, double y, double t, const double d[4], const double v0[4],
                        double rho, double sigma, double v[4]) const override {
        check_steps(rho, sigma);
        const double g = gam(x, y, t);
        v[0] = box_prox(d[0], v0[0], rho, sigma, -g, 0.0);
        v[1] = box_prox(d[1], v0[1], rho, sigma, 0.0, g);
        v[2] = box_prox(d[2], v0[2], rho, sigma, -g, 0.0);
        v[3] = box_prox(d[3], v0[3], rho, sigma, 0.0, g);
    }

private:
    double gam(double x, double y, double t) const {
        const double g = gamma_ ? gamma_(x, y, t) : 1.0;
        if (!(g > 0.0)) throw std::domain_error("l1 hamiltonian: gamma must be positive");
        return g;
    }
    Fn2D gamma_, f_;
};

// ---------------------------------------------------------------------------
// Osher-Sethian upwinding of |p|_2 + potential. Conjugate is the indicator of
// the unit-ball slice {v+ <= 0 <= v-, |v|_2 <= 1} minus the potential. The prox
// projects onto that set: clamp onto the sign quadrant, then shrink radially.
// Both sets contain the origin and the quadrant is a cone, so the two-stage
// projection is exact. rho = 0 is handled by a tiny floor, which turns the
// linear program into a projection of an arbitrarily distant point in the
// ascent direction; the result is the correct face of the feasible set.

constexpr double kRhoFloor = 1e-12;

class NormPotential1D final : public Hamiltonian1D {
public:
    explicit NormPotential1D(Fn1D pot) : pot_(std::move(pot)) {}

    double eval(double x, double t, double pp, double pm) const override {
        const double d = std::min(pp, 0.0), u = std::max(pm, 0.0);
        return std::sqrt(d * d + u * u) + at(pot_, x, t);
    }

    double conjugate(double x, double t, double vp, double vm) const override {
        if (vp > kSignTol || vm < -kSignTol) return kInf;
        if (vp * vp + vm * vm > 1.0 + kBallTol) return kInf;
        return -at(pot_, x, t);
    }

    void conjugate_prox(double x, double t, double dp, double dm, double vp0, double vm0,
                        double rho, double sigma, double& vp, double& vm) const override {
        (void)x;
        (void)t;
        check_steps(rho, sigma);
        const double s = sigma / std::max(rho, kRhoFloor);
        vp = std::min(vp0 + s * dp, 0.0);
        vm = std::max(vm0 + s * dm, 0.0);
        const double n = std::sqrt(vp * vp + vm * vm);
        if (n > 1.0) {
            vp /= n;
            vm /= n;
        }
    }

private:
    Fn1D pot_;
};

class NormPotential2D final : public Hamiltonian2D {
public:
    explicit NormPotential2D(Fn2D pot) : pot_(std::move(pot)) {}

    double eval(double x, double y, double t, double pxp, double pxm, double pyp,
                double pym) const override {
        const double a = std::min(pxp, 0.0), b = std::max(pxm, 0.0);
        const double c = std::min(pyp, 0.0), d = std::max(pym, 0.0);
        return std::sqrt(a * a + b * b + c * c + d * d) + at(pot_, x, y, t);
    }

    double conjugate(double x, double y, double t, const double v[4]) const override {
        if (v[0] > kSignTol || v[2] > kSignTol || v[1] < -kSignTol || v[3] < -kSignTol)
            return kInf;
        const double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
        if (n2 > 1.0 + kBallTol) return kInf;
        return -at(pot_, x, y, t);
    }

    void conjugate_prox(double x, double y, double t, const double d[4], const double v0[4],
                        double rho, double sigma, double v[4]) const override {
        (void)x;
        (void)y;
        (void)t;
        check_steps(rho, sigma);
        const double s = sigma / std::max(rho, kRhoFloor);
        v[0] = std::min(v0[0] + s * d[0], 0.0);
        v[1] = std::max(v0[1] + s * d[1], 0.0);
        v[2] = std::min(v0[2] + s * d[2], 0.0);
        v[3] = std::max(v0[3] + s * d[3], 0.0);
        const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
        if (n > 1.0)
            for (int c = 0; c < 4; ++c) v[c] /= n;
    }

private:
    Fn2D pot_;
};

}  // namespace

std::shared_ptr<Hamiltonian1D> make_quadratic_1d() {
    return std::make_shared<QuadraticEO1D>(Fn1D{});
}
std::shared_ptr<Hamiltonian1D> make_quadratic_shifted_1d(Fn1D shift) {
    return std::make_shared<QuadraticEO1D>(std::move(shift));
}
std::shared_ptr<Hamiltonian2D> make_quadratic_2d() {
    return std::make_shared<QuadraticEO2D>(Fn2D{});
}
std::shared_ptr<Hamiltonian2D> make_quadratic_shifted_2d(Fn2D shift) {
    return std::make_shared<QuadraticEO2D>(std::move(shift));
}
std::shared_ptr<Hamiltonian1D> make_l1_1d(Fn1D gamma, Fn1D f) {
    return std::make_shared<L1EO1D>(std::move(gamma), std::move(f));
}
std::shared_ptr<Hamiltonian2D> make_l1_2d(Fn2D gamma, Fn2D f) {
    return std::make_shared<L1EO2D>(std::move(gamma), std::move(f));
}
std::shared_ptr<Hamiltonian1D> make_norm_potential_1d(Fn1D potential) {
    return std::make_shared<NormPotential1D>(std::move(potential));
}
std::shared_ptr<Hamiltonian2D> make_norm_potential_2d(Fn2D potential) {
    return std::make_shared<NormPotential2D>(std::move(potential));
}

double conjugate_value(const Hamiltonian1D& h, double x, double t, double vp, double vm) {
    const double s = h.conjugate(x, t, vp, vm);
    if (!std::isfinite(s)) throw std::domain_error("conjugate_value: infeasible dual point");
    return s;
}

double conjugate_value(const Hamiltonian2D& h, double x, double y, double t, const double v[4]) {
    const double s = h.conjugate(x, y, t, v);
    if (!std::isfinite(s)) throw std::domain_error("conjugate_value: infeasible dual point");
    return s;
}

}  // namespace hj
