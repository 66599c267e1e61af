#ifndef HJ_SOLVER_IMPL_HPP
#define HJ_SOLVER_IMPL_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hj/pdhg_general.hpp"

// Internal plumbing shared by the two solvers.
namespace hj::detail {

inline void validate_config(const SolverConfig& cfg) {
    if (!std::isfinite(cfg.c) || !(cfg.c > 0.0))
        throw std::invalid_argument("solver: c must be positive");
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("solver: delta must be positive");
    if (cfg.n_inner < 1) throw std::invalid_argument("solver: n_inner must be >= 1");
    if (cfg.n_outer < 1) throw std::invalid_argument("solver: n_outer must be >= 1");
    if (!(cfg.epsilon >= 0.0))
        throw std::invalid_argument("solver: epsilon must be nonnegative");
    if (cfg.time_windows < 1)
        throw std::invalid_argument("solver: time_windows must be >= 1");
}

struct Steps {
    double tau, sigma;
};

/* Nonpositive entries fall back: both default, or the given one is mirrored.
 *
 * `inner` is the number of dual rounds per outer iteration. The re-centered
 * inner loop can move rho by up to inner * sigma per outer step, so the
 * automatic sigma is divided by it to keep the effective product within the
 * operator-norm bound; with sigma = tau and inner > 1 the transient blows up
 * on the benchmark problems. Explicit step choices are taken as given. */
inline Steps resolve_steps(const SolverConfig& cfg, double h, int inner = 1) {
    double tau = cfg.tau, sigma = cfg.sigma;
    if (tau <= 0.0 && sigma <= 0.0) {
        tau = default_step(cfg.epsilon, h);
        sigma = tau / std::max(inner, 1);
    } else if (tau <= 0.0) {
        tau = sigma;
    } else if (sigma <= 0.0) {
        sigma = tau;
    }
    if (!std::isfinite(tau) || !std::isfinite(sigma))
        throw std::invalid_argument("solver: non-finite step sizes");
    return {tau, sigma};
}

inline void check_metric(double metric) {
    if (!std::isfinite(metric) || metric > 1e12)
        throw std::runtime_error("solver: residual diverged");
}

/* Splits [t0, t0+T] into cfg.time_windows equal chunks and solves them in
 * sequence, each window starting from the previous window's final slice.
 * solve_window(gw, start, wcfg) runs one chunk; Solution must expose
 * phi/report and adopt_duals() to take over the last window's dual fields.
 * out.phi must be preallocated at full horizon size. */
template <class Solution, class Grid, class SolveFn>
Solution run_windows(const Grid& g, const SolverConfig& cfg, std::vector<double> start,
                     size_t slice_len, Solution out, const SolveFn& solve_window) {
    const int W = cfg.time_windows;
    if ((g.n_t - 1) % W != 0)
        throw std::invalid_argument("solver: time_windows must divide n_t - 1");
    const int per = (g.n_t - 1) / W;
    const double T_w = g.T * per / (g.n_t - 1);

    SolverConfig wcfg = cfg;
    wcfg.time_windows = 1;

    std::copy(start.begin(), start.end(), out.phi.slice(0));
    auto& rep = out.report;
    rep.converged = true;

    for (int w = 0; w < W; ++w) {
        Grid gw = g;
        gw.n_t = per + 1;
        gw.T = T_w;
        gw.t0 = g.t0 + w * T_w;
        auto sol = solve_window(gw, start, wcfg);

        for (int k = 1; k <= per; ++k)
            std::copy(sol.phi.slice(k), sol.phi.slice(k) + slice_len,
                      out.phi.slice(w * per + k));
        start.assign(sol.phi.slice(per), sol.phi.slice(per) + slice_len);

        rep.converged = rep.converged && sol.report.converged;
        rep.outer_iterations += sol.report.outer_iterations;
        rep.residual_history.insert(rep.residual_history.end(),
                                    sol.report.residual_history.begin(),
                                    sol.report.residual_history.end());
        rep.final_residual = std::max(rep.final_residual, sol.report.final_residual);
        rep.wall_time += sol.report.wall_time;
        rep.tau = sol.report.tau;
        rep.sigma = sol.report.sigma;
        if (w == W - 1) out.adopt_duals(std::move(sol));
    }
    return out;
}

}  // namespace hj::detail

#endif
