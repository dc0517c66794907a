#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "nlmc/grid.hpp"
#include "nlmc/linear_solver.hpp"
#include "nlmc/media.hpp"

namespace nlmc {

/// Two-continuum cell function: all continuum-0 values, then all continuum-1
/// values, each in region-local (or global) fine-cell order.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(int cells) : cells_(cells), values_(Vector::Zero(2 * cells)) {}
  GridFunction(int cells, Vector values);

  static GridFunction constant(int cells, double v1, double v2);

  int num_cells() const { return cells_; }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

  auto continuum(int i) { return values_.segment(static_cast<Eigen::Index>(i) * cells_, cells_); }
  auto continuum(int i) const {
    return values_.segment(static_cast<Eigen::Index>(i) * cells_, cells_);
  }
  double& at(int i, int cell) { return values_[static_cast<Eigen::Index>(i) * cells_ + cell]; }
  double at(int i, int cell) const { return values_[static_cast<Eigen::Index>(i) * cells_ + cell]; }

 private:
  int cells_ = 0;
  Vector values_;
};

/// Diffusion part a(.,.): TPFA with harmonic face transmissibilities and
/// zero Dirichlet closure on the region boundary through half-cell terms.
SparseMatrix assemble_stiffness(const GridPair& grid, const MediaField& field,
                                const OversampleRegion& region);
/// Exchange part q(.,.): sigma h^2 [1 -1; -1 1] per cell.
SparseMatrix assemble_exchange(const GridPair& grid, const MediaField& field,
                               const OversampleRegion& region);
/// a_Q = a + q.
SparseMatrix assemble_aQ(const GridPair& grid, const MediaField& field,
                         const OversampleRegion& region);
SparseMatrix assemble_aQ(const GridPair& grid, const MediaField& field);
/// Diagonal c_i h^2.
SparseMatrix assemble_mass(const GridPair& grid, const MediaField& field,
                           const OversampleRegion& region);
SparseMatrix assemble_mass(const GridPair& grid, const MediaField& field);

/// Load vector of a source: f_i(k) h^2.
Vector load_vector(const GridPair& grid, const GridFunction& f);

/// L2(Omega) pairing of piecewise-constant functions: sum (u1 v1 + u2 v2) h^2.
double l2_pair(const GridPair& grid, const GridFunction& u, const GridFunction& v);

/// Squared energy v^T A v.
double energy(const SparseMatrix& a, const Vector& v);

GridFunction solve_static_fine(const GridPair& grid, const MediaField& field,
                               const GridFunction& source, const SolverOptions& options = {},
                               SolveInfo* info = nullptr);

using SourceFunction = std::function<GridFunction(double)>;

/// states[n] is the solution at times[n]; states[0] is the initial condition.
struct TimeSeries {
  std::vector<double> times;
  std::vector<GridFunction> states;
};

/// Number of steps for a horizon; throws unless T is a whole multiple of dt.
int step_count(double dt, double horizon);

/// Backward Euler: (M/dt + A_Q) p^{n+1} = (M/dt) p^n + load(f(t^{n+1})).
TimeSeries solve_transient_fine(const GridPair& grid, const MediaField& field,
                                const SourceFunction& source, const GridFunction& initial,
                                double dt, double horizon, const SolverOptions& options = {});

/// Two blocks in the grid-field matrix format, continuum 1 first.
void write_grid_function(std::ostream& out, const GridFunction& v, int rows, int cols);
GridFunction read_grid_function(std::istream& in, int rows, int cols);

}  // namespace nlmc
