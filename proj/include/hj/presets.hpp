#pragma once

// The four benchmark problems on [0,2]^d with T = 1, bundled with solver
// settings and a reference recipe so the CLI, the tests, and the table
// runner all execute identical configurations:
//
//   quad            phi_t + |grad phi|^2/2 = 0,         g = |x-1|^2/2
//   l1              phi_t + |grad phi|_1 = 0,           g = sum_i sin(pi x_i)
//   norm_potential  phi_t + |grad phi| + f(x) = 0,      f = 3 exp(-4|x-1|^2)+1,
//                                                       g = sum_i sin(pi x_i)
//   viscous_xt      phi_t + |grad phi|^2/2 + f(x,t) = 0.1 Lap phi,
//                   g = -|x-1|^2/10, f built from a moving well in x_1
//
// quad and l1 have brute-force variational references (separable across
// axes in 2D); the other two fall back to explicit fine-grid marching.

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hj/grid.hpp"
#include "hj/hamiltonian.hpp"
#include "hj/metrics.hpp"
#include "hj/pdhg_general.hpp"
#include "hj/pdhg_homogeneous.hpp"

namespace hj {

enum class RefKind { None, HopfLaxQuadratic, HopfLaxL1, ExplicitEO };

struct Preset1D {
  std::string name;
  Grid1D grid;  // default resolution; runners override n_x / n_t
  std::function<double(double)> g0;
  std::shared_ptr<Hamiltonian1D> ham;  // general-form solver + residuals
  SolverConfig cfg;                    // carries epsilon and tuned steps
  bool use_homogeneous = false;        // solve in flux form instead
  HomogeneousData1D homog;             // only read when use_homogeneous
  RefKind ref = RefKind::None;
  double slope_bound = 1.0;  // |dH/dp| bound for the explicit reference
  int ref_refine = 8;
};

struct Preset2D {
  std::string name;
  Grid2D grid;
  std::function<double(double, double)> g0;
  // per-axis factors of g0, used by the separable variational references
  std::function<double(double)> g0x, g0y;
  std::shared_ptr<Hamiltonian2D> ham;
  SolverConfig cfg;
  bool use_homogeneous = false;
  HomogeneousData2D homog;
  RefKind ref = RefKind::None;
  double slope_bound = 1.0;
  int ref_refine = 8;
};

std::vector<std::string> preset_names();  // quad, l1, norm_potential, viscous_xt

// Throws std::invalid_argument for an unknown name.
Preset1D make_preset_1d(const std::string& name);
Preset2D make_preset_2d(const std::string& name);

// Ground truth for the preset's PDE on an arbitrary grid (same domain).
// RefKind::None throws std::logic_error.
Field1D reference_field_1d(const Preset1D& p, const Grid1D& grid);
Field2D reference_field_2d(const Preset2D& p, const Grid2D& grid);

struct PresetRun1D {
  Field1D phi;
  SolveReport report;
  double residual = 0.0;  // avg_abs_residual of phi
  double error = -1.0;    // vs the preset reference; negative if skipped
};
struct PresetRun2D {
  Field2D phi;
  SolveReport report;
  double residual = 0.0;
  double error = -1.0;
};

// Solve at the given resolution with the preset's configuration (or an
// explicit override) and score the result.
PresetRun1D run_preset_1d(const Preset1D& p, int n_x, int n_t,
                          const SolverConfig* cfg = nullptr,
                          bool with_reference = true);
PresetRun2D run_preset_2d(const Preset2D& p, int n_x, int n_y, int n_t,
                          const SolverConfig* cfg = nullptr,
                          bool with_reference = true);

// One table row per (n_x, n_t) resp. (n_x, n_y, n_t) entry, in order.
std::vector<TableRow> run_table_1d(const Preset1D& p,
                                   const std::vector<std::pair<int, int>>& grids);
std::vector<TableRow> run_table_2d(
    const Preset2D& p, const std::vector<std::array<int, 3>>& grids);

}  // namespace hj
