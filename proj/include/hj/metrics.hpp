#pragma once

// The two quantities every benchmark run reports (mean PDE residual and
// l1 relative error against a reference), plus assembly of grid-refinement
// tables from repeated solves.

#include <string>
#include <vector>

#include "hj/grid.hpp"
#include "hj/hamiltonian.hpp"

namespace hj {

// Mean absolute residual of the discrete PDE over all interior time
// levels: residual_sum / (n_x * (n_t - 1)), and the 2D analogue with
// n_x * n_y * (n_t - 1).
double avg_abs_residual_1d(const Field1D& phi, const Grid1D& grid,
                           const Hamiltonian1D& ham, double epsilon);
double avg_abs_residual_2d(const Field2D& phi, const Grid2D& grid,
                           const Hamiltonian2D& ham, double epsilon);

// mean|phi - ref| / mean|ref|, means taken over every node including the
// initial slice.  Invariant under scaling both fields together.  A reference
// that is identically zero gives 0 for an exact match and +inf otherwise;
// use an absolute measure for such degenerate references.  Shape mismatch
// throws std::invalid_argument.
double l1_relative_error(const std::vector<double>& phi,
                         const std::vector<double>& ref);
double l1_relative_error(const Field1D& phi, const Field1D& ref);
double l1_relative_error(const Field2D& phi, const Field2D& ref);

struct TableRow {
  std::string grid_label;  // "80x41", "40x40x21", ...
  double residual = 0.0;   // avg_abs_residual of the returned iterate
  double error = -1.0;     // l1 relative error; negative means no reference
  bool converged = false;
  int iterations = 0;
  double wall_time = 0.0;  // seconds
};

// Successive error quotients error[k] / error[k+1]; slot k is NaN when
// either row lacks a reference.  Empty for fewer than two rows.
std::vector<double> error_ratios(const std::vector<TableRow>& rows);

// Header + one line per row.  The ratio column on row k is the quotient
// against the next row, blank on the last row and wherever undefined; rows
// that hit the iteration cap are marked in a status column, not dropped.
std::string table_to_csv(const std::vector<TableRow>& rows);

}  // namespace hj
