#include "hj/pdhg_homogeneous.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hj/kernels.hpp"
#include "hj/poisson.hpp"
#include "solver_impl.hpp"

namespace hj {

namespace {

namespace K = kernels::omp;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/* Exact minimizer over y >= 0 of (y - alpha)^2 + sum_b [g_b y <= c_b](g_b y - c_b)^2.
 * Each hinge is inactive past its breakpoint c_b/g_b, so the objective is
 * piecewise quadratic with at most nb breakpoints. Candidates: the stationary
 * point of every active subset (clamped to y >= 0), every breakpoint, and 0.
 * Whatever piece contains the global minimizer, its minimum sits either at the
 * piece's own stationary point or at a piece boundary, and all of those are in
 * the candidate list, so scanning it is exact. Ties go to the smallest y.
 * Branches with c_b < 0 are never active on y >= 0 and drop out by themselves,
 * which lets callers pass all branches unconditionally. */
struct Branch {
    double g, c;
};

template <int NB>
double hinge_min(double alpha, const Branch (&b)[NB]) {
    double cand[(1 << NB) + NB + 1];
    int nc = 0;
    for (unsigned s = 0; s < (1u << NB); ++s) {
        double num = alpha, den = 1.0;
        for (int j = 0; j < NB; ++j) {
            if (s & (1u << j)) {
                num += b[j].g * b[j].c;
                den += b[j].g * b[j].g;
            }
        }
        cand[nc++] = std::max(num / den, 0.0);
    }
    for (int j = 0; j < NB; ++j) cand[nc++] = std::max(b[j].c / b[j].g, 0.0);
    cand[nc++] = 0.0;

    auto value = [&](double y) {
        double s = (y - alpha) * (y - alpha);
        for (int j = 0; j < NB; ++j) {
            if (b[j].g * y <= b[j].c) {
                const double d = b[j].g * y - b[j].c;
                s += d * d;
            }
        }
        return s;
    };

    double best_y = cand[0];
    double best_v = value(best_y);
    for (int j = 1; j < nc; ++j) {
        const double v = value(cand[j]);
        if (v < best_v || (v == best_v && cand[j] < best_y)) {
            best_v = v;
            best_y = cand[j];
        }
    }
    return best_y;
}

void check_gamma(double g) {
    if (!(g > 0.0)) throw std::invalid_argument("rho_update: gamma must be positive");
}

// Sample a coefficient field at (x_i, t_{k+1}) into dual shape.
Field1D sample_dual_1d(const Grid1D& g, const Fn1D& fn, double fallback, bool positive) {
    Field1D out(g.n_x, g.n_t - 1, fallback);
    if (fn) {
        for (int k = 0; k < g.n_t - 1; ++k)
            for (int i = 0; i < g.n_x; ++i) out(i, k) = fn(g.x(i), g.t(k + 1));
    }
    if (positive) {
        for (double v : out.v)
            if (!(v > 0.0))
                throw std::invalid_argument("solver: gamma must be positive on the grid");
    }
    return out;
}

Field2D sample_dual_2d(const Grid2D& g, const Fn2D& fn, double fallback, bool positive) {
    Field2D out(g.n_x, g.n_y, g.n_t - 1, fallback);
    if (fn) {
        for (int k = 0; k < g.n_t - 1; ++k)
            for (int j = 0; j < g.n_y; ++j)
                for (int i = 0; i < g.n_x; ++i) out(i, j, k) = fn(g.x(i), g.y(j), g.t(k + 1));
    }
    if (positive) {
        for (double v : out.v)
            if (!(v > 0.0))
                throw std::invalid_argument("solver: gamma must be positive on the grid");
    }
    return out;
}

}  // namespace

double rho_update_1d(double alpha, double z_i, double z_im1, double gamma_i, double gamma_up) {
    check_gamma(gamma_i);
    check_gamma(gamma_up);
    const Branch b[2] = {{gamma_i, -z_i}, {gamma_up, z_im1}};
    return hinge_min(alpha, b);
}

double rho_update_2d(double alpha, double z1_i, double z1_im1, double z2_j, double z2_jm1,
                     double gamma1_i, double gamma1_up, double gamma2_j, double gamma2_up) {
    check_gamma(gamma1_i);
    check_gamma(gamma1_up);
    check_gamma(gamma2_j);
    check_gamma(gamma2_up);
    const Branch b[4] = {
        {gamma1_i, -z1_i}, {gamma1_up, z1_im1}, {gamma2_j, -z2_j}, {gamma2_up, z2_jm1}};
    return hinge_min(alpha, b);
}

HomogeneousSolution1D solve_homogeneous_1d_from(const Grid1D& g, const HomogeneousData1D& data,
                                                const std::vector<double>& initial_slice,
                                                const SolverConfig& cfg) {
    g.validate();
    detail::validate_config(cfg);
    if ((int)initial_slice.size() != g.n_x)
        throw std::invalid_argument("solver: initial slice size mismatch");

    const auto t0 = Clock::now();
    const double eps = cfg.epsilon;
    // cfg.n_inner plays no role here: the dual step is a single exact sweep.
    const auto [tau, sigma] = detail::resolve_steps(cfg, g.dx());
    const int nx = g.n_x, nt = g.n_t;
    const double n_terms = (double)nx * (nt - 1);

    const Field1D gam = sample_dual_1d(g, data.gamma, 1.0, true);
    const Field1D fs = sample_dual_1d(g, data.f, 0.0, false);
    // Residuals are measured against the same upwind scheme the flux form solves.
    const auto ham = make_l1_1d(data.gamma, data.f);

    HomogeneousSolution1D sol;
    sol.phi = Field1D(nx, nt);
    for (int k = 0; k < nt; ++k)
        std::copy(initial_slice.begin(), initial_slice.end(), sol.phi.slice(k));
    sol.rho = Field1D(nx, nt - 1, cfg.c);
    sol.m = Field1D(nx, nt - 1, 0.0);

    PoissonSolver1D poisson(nx, nt, g.dx(), g.dt());
    Field1D rhs, u, phi_prev, phibar(nx, nt), z;
    kernels::Derivs1D derivs;

    SolveReport& rep = sol.report;
    rep.tau = tau;
    rep.sigma = sigma;

    for (int ell = 0; ell < cfg.n_outer; ++ell) {
        K::phi_rhs_homog_1d(sol.rho, sol.m, cfg.c, g, eps, rhs);
        poisson.solve(rhs, u);
        phi_prev = sol.phi;
        for (size_t n = 0; n < sol.phi.size(); ++n) sol.phi.v[n] += tau * u.v[n];

        const double sum = K::residual_sum_1d(sol.phi, g, *ham, eps);
        const double metric = cfg.stop_rule == StopRule::Avg ? sum / n_terms : sum;
        rep.residual_history.push_back(metric);
        detail::check_metric(metric);
        if (metric <= cfg.delta) {
            rep.converged = true;
            break;
        }

        for (size_t n = 0; n < phibar.size(); ++n)
            phibar.v[n] = 2.0 * sol.phi.v[n] - phi_prev.v[n];
        K::derivs_1d(phibar, g, derivs);
        K::dual_round_homog_1d(derivs, gam, fs, sigma, eps, sol.rho, sol.m, z);
    }

    rep.outer_iterations = (int)rep.residual_history.size();
    rep.final_residual = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
    rep.wall_time = seconds_since(t0);
    return sol;
}

HomogeneousSolution2D solve_homogeneous_2d_from(const Grid2D& g, const HomogeneousData2D& data,
                                                const std::vector<double>& initial_slice,
                                                const SolverConfig& cfg) {
    g.validate();
    detail::validate_config(cfg);
    if (initial_slice.size() != (size_t)g.n_x * g.n_y)
        throw std::invalid_argument("solver: initial slice size mismatch");

    const auto t0 = Clock::now();
    const double eps = cfg.epsilon;
    const auto [tau, sigma] = detail::resolve_steps(cfg, std::min(g.dx(), g.dy()));
    const int nx = g.n_x, ny = g.n_y, nt = g.n_t;
    const double n_terms = (double)nx * ny * (nt - 1);

    const Field2D gam = sample_dual_2d(g, data.gamma, 1.0, true);
    const Field2D fs = sample_dual_2d(g, data.f, 0.0, false);
    const auto ham = make_l1_2d(data.gamma, data.f);

    HomogeneousSolution2D sol;
    sol.phi = Field2D(nx, ny, nt);
    for (int k = 0; k < nt; ++k)
        std::copy(initial_slice.begin(), initial_slice.end(), sol.phi.slice(k));
    sol.rho = Field2D(nx, ny, nt - 1, cfg.c);
    sol.m1 = Field2D(nx, ny, nt - 1, 0.0);
    sol.m2 = Field2D(nx, ny, nt - 1, 0.0);

    PoissonSolver2D poisson(nx, ny, nt, g.dx(), g.dy(), g.dt());
    Field2D rhs, u, phi_prev, phibar(nx, ny, nt), z1, z2;
    kernels::Derivs2D derivs;

    SolveReport& rep = sol.report;
    rep.tau = tau;
    rep.sigma = sigma;

    for (int ell = 0; ell < cfg.n_outer; ++ell) {
        K::phi_rhs_homog_2d(sol.rho, sol.m1, sol.m2, cfg.c, g, eps, rhs);
        poisson.solve(rhs, u);
        phi_prev = sol.phi;
        for (size_t n = 0; n < sol.phi.size(); ++n) sol.phi.v[n] += tau * u.v[n];

        const double sum = K::residual_sum_2d(sol.phi, g, *ham, eps);
        const double metric = cfg.stop_rule == StopRule::Avg ? sum / n_terms : sum;
        rep.residual_history.push_back(metric);
        detail::check_metric(metric);
        if (metric <= cfg.delta) {
            rep.converged = true;
            break;
        }

        for (size_t n = 0; n < phibar.size(); ++n)
            phibar.v[n] = 2.0 * sol.phi.v[n] - phi_prev.v[n];
        K::derivs_2d(phibar, g, derivs);
        K::dual_round_homog_2d(derivs, gam, fs, sigma, eps, sol.rho, sol.m1, sol.m2, z1, z2);
    }

    rep.outer_iterations = (int)rep.residual_history.size();
    rep.final_residual = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
    rep.wall_time = seconds_since(t0);
    return sol;
}

HomogeneousSolution1D solve_homogeneous_1d(const Grid1D& g, const HomogeneousData1D& data,
                                           const std::function<double(double)>& g0,
                                           const SolverConfig& cfg) {
    g.validate();
    return solve_homogeneous_1d_from(g, data, sample_initial(g, g0), cfg);
}

HomogeneousSolution2D solve_homogeneous_2d(const Grid2D& g, const HomogeneousData2D& data,
                                           const std::function<double(double, double)>& g0,
                                           const SolverConfig& cfg) {
    g.validate();
    return solve_homogeneous_2d_from(g, data, sample_initial(g, g0), cfg);
}

namespace {

struct WindowedH1D : HomogeneousSolution1D {
    void adopt_duals(HomogeneousSolution1D&& s) {
        rho = std::move(s.rho);
        m = std::move(s.m);
    }
};
struct WindowedH2D : HomogeneousSolution2D {
    void adopt_duals(HomogeneousSolution2D&& s) {
        rho = std::move(s.rho);
        m1 = std::move(s.m1);
        m2 = std::move(s.m2);
    }
};

}  // namespace

HomogeneousSolution1D solve_windowed_homogeneous_1d(const Grid1D& g,
                                                    const HomogeneousData1D& data,
                                                    const std::function<double(double)>& g0,
                                                    const SolverConfig& cfg) {
    g.validate();
    if (cfg.time_windows == 1) return solve_homogeneous_1d(g, data, g0, cfg);
    WindowedH1D out;
    out.phi = Field1D(g.n_x, g.n_t);
    return detail::run_windows(g, cfg, sample_initial(g, g0), (size_t)g.n_x, std::move(out),
                               [&](const Grid1D& gw, const std::vector<double>& start,
                                   const SolverConfig& wcfg) {
                                   return solve_homogeneous_1d_from(gw, data, start, wcfg);
                               });
}

HomogeneousSolution2D solve_windowed_homogeneous_2d(
    const Grid2D& g, const HomogeneousData2D& data,
    const std::function<double(double, double)>& g0, const SolverConfig& cfg) {
    g.validate();
    if (cfg.time_windows == 1) return solve_homogeneous_2d(g, data, g0, cfg);
    WindowedH2D out;
    out.phi = Field2D(g.n_x, g.n_y, g.n_t);
    return detail::run_windows(g, cfg, sample_initial(g, g0), (size_t)g.n_x * g.n_y,
                               std::move(out),
                               [&](const Grid2D& gw, const std::vector<double>& start,
                                   const SolverConfig& wcfg) {
                                   return solve_homogeneous_2d_from(gw, data, start, wcfg);
                               });
}

}  // namespace hj
