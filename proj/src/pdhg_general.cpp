#include "hj/pdhg_general.hpp"

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

}  // namespace

double default_step(double epsilon, double h) {
    return std::sqrt(0.9) / (2.0 + 4.0 * epsilon / h);
}

double residual_sum_1d(const Field1D& phi, const Grid1D& g, const Hamiltonian1D& h,
                       double epsilon) {
    return K::residual_sum_1d(phi, g, h, epsilon);
}

double residual_sum_2d(const Field2D& phi, const Grid2D& g, const Hamiltonian2D& h,
                       double epsilon) {
    return K::residual_sum_2d(phi, g, h, epsilon);
}

Solution1D solve_1d_from(const Grid1D& g, const Hamiltonian1D& h,
                         const std::vector<double>& initial_slice, const SolverConfig& cfg) {
    g.validate();
    detail::validate_config(cfg);
    if ((int)initial_slice.size() != g.n_x)
        throw std::invalid_argument("solver: initial slice size mismatch");

    const auto t0 = Clock::now();
    const double eps = cfg.epsilon;
    const auto [tau, sigma] = detail::resolve_steps(cfg, g.dx(), cfg.n_inner);
    const int nx = g.n_x, nt = g.n_t;
    const double n_terms = (double)nx * (nt - 1);

    Solution1D sol;
    sol.phi = Field1D(nx, nt);
    for (int k = 0; k < nt; ++k)
        std::copy(initial_slice.begin(), initial_slice.end(), sol.phi.slice(k));
    sol.rho = Field1D(nx, nt - 1, cfg.c);
    sol.v_plus = Field1D(nx, nt - 1, 0.0);
    sol.v_minus = Field1D(nx, nt - 1, 0.0);

    PoissonSolver1D poisson(nx, nt, g.dx(), g.dt());
    Field1D rhs, u, phi_prev, phibar(nx, nt);
    kernels::Derivs1D derivs;

    SolveReport& rep = sol.report;
    rep.tau = tau;
    rep.sigma = sigma;

    for (int ell = 0; ell < cfg.n_outer; ++ell) {
        K::phi_rhs_general_1d(sol.rho, sol.v_plus, sol.v_minus, cfg.c, g, eps, rhs);
        poisson.solve(rhs, u);
        phi_prev = sol.phi;
        // u's initial slice is identically zero, so the pinned slice stays
        // bit-exact through this update.
        for (size_t n = 0; n < sol.phi.size(); ++n) sol.phi.v[n] += tau * u.v[n];

        const double sum = K::residual_sum_1d(sol.phi, g, h, eps);
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
        for (int m = 0; m < cfg.n_inner; ++m)
            K::dual_round_general_1d(derivs, g, h, sigma, eps, sol.rho, sol.v_plus,
                                     sol.v_minus);
    }

    rep.outer_iterations = (int)rep.residual_history.size();
    rep.final_residual = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
    rep.wall_time = seconds_since(t0);
    return sol;
}

Solution2D solve_2d_from(const Grid2D& g, const Hamiltonian2D& h,
                         const std::vector<double>& initial_slice, const SolverConfig& cfg) {
    g.validate();
    detail::validate_config(cfg);
    if (initial_slice.size() != (size_t)g.n_x * g.n_y)
        throw std::invalid_argument("solver: initial slice size mismatch");

    const auto t0 = Clock::now();
    const double eps = cfg.epsilon;
    const auto [tau, sigma] = detail::resolve_steps(cfg, std::min(g.dx(), g.dy()), cfg.n_inner);
    const int nx = g.n_x, ny = g.n_y, nt = g.n_t;
    const double n_terms = (double)nx * ny * (nt - 1);

    Solution2D sol;
    sol.phi = Field2D(nx, ny, nt);
    for (int k = 0; k < nt; ++k)
        std::copy(initial_slice.begin(), initial_slice.end(), sol.phi.slice(k));
    sol.rho = Field2D(nx, ny, nt - 1, cfg.c);
    sol.v_plus = Field2D(nx, ny, nt - 1, 0.0);
    sol.v_minus = Field2D(nx, ny, nt - 1, 0.0);
    sol.w_plus = Field2D(nx, ny, nt - 1, 0.0);
    sol.w_minus = Field2D(nx, ny, nt - 1, 0.0);

    PoissonSolver2D poisson(nx, ny, nt, g.dx(), g.dy(), g.dt());
    Field2D rhs, u, phi_prev, phibar(nx, ny, nt);
    kernels::Derivs2D derivs;

    SolveReport& rep = sol.report;
    rep.tau = tau;
    rep.sigma = sigma;

    for (int ell = 0; ell < cfg.n_outer; ++ell) {
        K::phi_rhs_general_2d(sol.rho, sol.v_plus, sol.v_minus, sol.w_plus, sol.w_minus, cfg.c,
                              g, eps, rhs);
        poisson.solve(rhs, u);
        phi_prev = sol.phi;
        for (size_t n = 0; n < sol.phi.size(); ++n) sol.phi.v[n] += tau * u.v[n];

        const double sum = K::residual_sum_2d(sol.phi, g, h, eps);
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
        for (int m = 0; m < cfg.n_inner; ++m)
            K::dual_round_general_2d(derivs, g, h, sigma, eps, sol.rho, sol.v_plus,
                                     sol.v_minus, sol.w_plus, sol.w_minus);
    }

    rep.outer_iterations = (int)rep.residual_history.size();
    rep.final_residual = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
    rep.wall_time = seconds_since(t0);
    return sol;
}

Solution1D solve_1d(const Grid1D& g, const Hamiltonian1D& h,
                    const std::function<double(double)>& g0, const SolverConfig& cfg) {
    g.validate();
    return solve_1d_from(g, h, sample_initial(g, g0), cfg);
}

Solution2D solve_2d(const Grid2D& g, const Hamiltonian2D& h,
                    const std::function<double(double, double)>& g0, const SolverConfig& cfg) {
    g.validate();
    return solve_2d_from(g, h, sample_initial(g, g0), cfg);
}

namespace {

// Adapters so run_windows can move the last window's dual fields out.
struct Windowed1D : Solution1D {
    void adopt_duals(Solution1D&& s) {
        rho = std::move(s.rho);
        v_plus = std::move(s.v_plus);
        v_minus = std::move(s.v_minus);
    }
};
struct Windowed2D : Solution2D {
    void adopt_duals(Solution2D&& s) {
        rho = std::move(s.rho);
        v_plus = std::move(s.v_plus);
        v_minus = std::move(s.v_minus);
        w_plus = std::move(s.w_plus);
        w_minus = std::move(s.w_minus);
    }
};

}  // namespace

Solution1D solve_windowed_1d(const Grid1D& g, const Hamiltonian1D& h,
                             const std::function<double(double)>& g0,
                             const SolverConfig& cfg) {
    g.validate();
    detail::validate_config(cfg);
    if (cfg.time_windows == 1) return solve_1d(g, h, g0, cfg);
    Windowed1D out;
    out.phi = Field1D(g.n_x, g.n_t);
    return detail::run_windows(g, cfg, sample_initial(g, g0), (size_t)g.n_x, std::move(out),
                               [&](const Grid1D& gw, const std::vector<double>& start,
                                   const SolverConfig& wcfg) {
                                   return solve_1d_from(gw, h, start, wcfg);
                               });
}

Solution2D solve_windowed_2d(const Grid2D& g, const Hamiltonian2D& h,
                             const std::function<double(double, double)>& g0,
                             const SolverConfig& cfg) {
    g.validate();
    detail::validate_config(cfg);
    if (cfg.time_windows == 1) return solve_2d(g, h, g0, cfg);
    Windowed2D out;
    out.phi = Field2D(g.n_x, g.n_y, g.n_t);
    return detail::run_windows(g, cfg, sample_initial(g, g0), (size_t)g.n_x * g.n_y,
                               std::move(out),
                               [&](const Grid2D& gw, const std::vector<double>& start,
                                   const SolverConfig& wcfg) {
                                   return solve_2d_from(gw, h, start, wcfg);
                               });
}

}  // namespace hj
