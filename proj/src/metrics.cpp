#include "hj/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "hj/pdhg_general.hpp"

namespace hj {

double avg_abs_residual_1d(const Field1D& phi, const Grid1D& grid,
                           const Hamiltonian1D& ham, double epsilon) {
  const double n = static_cast<double>(grid.n_x) * (grid.n_t - 1);
  return residual_sum_1d(phi, grid, ham, epsilon) / n;
}

double avg_abs_residual_2d(const Field2D& phi, const Grid2D& grid,
                           const Hamiltonian2D& ham, double epsilon) {
  const double n =
      static_cast<double>(grid.n_x) * grid.n_y * (grid.n_t - 1);
  return residual_sum_2d(phi, grid, ham, epsilon) / n;
}

double l1_relative_error(const std::vector<double>& phi,
                         const std::vector<double>& ref) {
  if (phi.size() != ref.size() || phi.empty())
    throw std::invalid_argument("l1_relative_error: shape mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    num += std::abs(phi[i] - ref[i]);
    den += std::abs(ref[i]);
  }
  if (den == 0.0)
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

double l1_relative_error(const Field1D& phi, const Field1D& ref) {
  if (phi.n_x != ref.n_x || phi.n_k != ref.n_k)
    throw std::invalid_argument("l1_relative_error: shape mismatch");
  return l1_relative_error(phi.v, ref.v);
}

double l1_relative_error(const Field2D& phi, const Field2D& ref) {
  if (phi.n_x != ref.n_x || phi.n_y != ref.n_y || phi.n_k != ref.n_k)
    throw std::invalid_argument("l1_relative_error: shape mismatch");
  return l1_relative_error(phi.v, ref.v);
}

std::vector<double> error_ratios(const std::vector<TableRow>& rows) {
  std::vector<double> r;
  if (rows.size() < 2) return r;
  r.reserve(rows.size() - 1);
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const bool ok = rows[k].error >= 0.0 && rows[k + 1].error > 0.0;
    r.push_back(ok ? rows[k].error / rows[k + 1].error
                   : std::nan(""));
  }
  return r;
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
  const std::vector<double> ratios = error_ratios(rows);
  std::string out = "grid,residual,error,ratio,iterations,wall_time,status\n";
  char buf[256];
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const TableRow& r = rows[k];
    std::string ratio;
    if (k < ratios.size() && std::isfinite(ratios[k])) {
      std::snprintf(buf, sizeof buf, "%.3f", ratios[k]);
      ratio = buf;
    }
    std::string error;
    if (r.error >= 0.0) {
      std::snprintf(buf, sizeof buf, "%.6e", r.error);
      error = buf;
    }
    std::snprintf(buf, sizeof buf, "%s,%.6e,%s,%s,%d,%.3f,%s\n",
                  r.grid_label.c_str(), r.residual, error.c_str(),
                  ratio.c_str(), r.iterations, r.wall_time,
                  r.converged ? "converged" : "max_iterations");
    out += buf;
  }
  return out;
}

}  // namespace hj
