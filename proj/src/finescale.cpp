#include "nlmc/finescale.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "nlmc/errors.hpp"

namespace nlmc {

GridFunction::GridFunction(int cells, Vector values) : cells_(cells), values_(std::move(values)) {
  if (values_.size() != 2 * static_cast<Eigen::Index>(cells)) {
    throw InputError("grid function has " + std::to_string(values_.size()) +
                     " values, expected " + std::to_string(2 * cells));
  }
}

GridFunction GridFunction::constant(int cells, double v1, double v2) {
  GridFunction f(cells);
  f.continuum(0).setConstant(v1);
  f.continuum(1).setConstant(v2);
  return f;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void check_region(const GridPair& grid, const OversampleRegion& region) {
  if (region.num_fine() == 0) throw InputError("empty region");
  if (region.fine_row_end > grid.n_fine() || region.fine_col_end > grid.n_fine()) {
    throw InputError("region exceeds the grid");
  }
}

void add_stiffness(const GridPair& grid, const MediaField& field, const OversampleRegion& region,
                   Triplets& t) {
  const int n = region.num_fine();
  const FaceList faces = face_list(region);
  for (int i = 0; i < 2; ++i) {
    const auto& kappa = field.kappa(i);
    const int off = i * n;
    for (const auto& face : faces.interior) {
      const double k1 = kappa[region.fine_cells[face.first]];
      const double k2 = kappa[region.fine_cells[face.second]];
      const double trans = 2.0 * k1 * k2 / (k1 + k2);
      t.emplace_back(off + face.first, off + face.first, trans);
      t.emplace_back(off + face.second, off + face.second, trans);
      t.emplace_back(off + face.first, off + face.second, -trans);
      t.emplace_back(off + face.second, off + face.first, -trans);
    }
    for (const auto& face : faces.boundary) {
      t.emplace_back(off + face.cell, off + face.cell, 2.0 * kappa[region.fine_cells[face.cell]]);
    }
  }
  (void)grid;
}

void add_exchange(const GridPair& grid, const MediaField& field, const OversampleRegion& region,
                  Triplets& t) {
  const int n = region.num_fine();
  const double h2 = grid.fine_area();
  for (int k = 0; k < n; ++k) {
    const double s = field.sigma[region.fine_cells[k]] * h2;
    if (s == 0.0) continue;
    t.emplace_back(k, k, s);
    t.emplace_back(n + k, n + k, s);
    t.emplace_back(k, n + k, -s);
    t.emplace_back(n + k, k, -s);
  }
}

SparseMatrix from_triplets(int size, const Triplets& t) {
  SparseMatrix m(size, size);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

SparseMatrix assemble_stiffness(const GridPair& grid, const MediaField& field,
                                const OversampleRegion& region) {
  check_region(grid, region);
  Triplets t;
  add_stiffness(grid, field, region, t);
  return from_triplets(2 * region.num_fine(), t);
}

SparseMatrix assemble_exchange(const GridPair& grid, const MediaField& field,
                               const OversampleRegion& region) {
  check_region(grid, region);
  Triplets t;
  add_exchange(grid, field, region, t);
  return from_triplets(2 * region.num_fine(), t);
}

SparseMatrix assemble_aQ(const GridPair& grid, const MediaField& field,
                         const OversampleRegion& region) {
  check_region(grid, region);
  Triplets t;
  t.reserve(static_cast<std::size_t>(region.num_fine()) * 14);
  add_stiffness(grid, field, region, t);
  add_exchange(grid, field, region, t);
  return from_triplets(2 * region.num_fine(), t);
}

SparseMatrix assemble_aQ(const GridPair& grid, const MediaField& field) {
  return assemble_aQ(grid, field, whole_domain(grid));
}

SparseMatrix assemble_mass(const GridPair& grid, const MediaField& field,
                           const OversampleRegion& region) {
  check_region(grid, region);
  const int n = region.num_fine();
  const double h2 = grid.fine_area();
  Triplets t;
  t.reserve(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < 2; ++i) {
    const auto& c = field.compressibility(i);
    for (int k = 0; k < n; ++k) t.emplace_back(i * n + k, i * n + k, c[region.fine_cells[k]] * h2);
  }
  return from_triplets(2 * n, t);
}

SparseMatrix assemble_mass(const GridPair& grid, const MediaField& field) {
  return assemble_mass(grid, field, whole_domain(grid));
}

Vector load_vector(const GridPair& grid, const GridFunction& f) {
  return f.values() * grid.fine_area();
}

double l2_pair(const GridPair& grid, const GridFunction& u, const GridFunction& v) {
  if (u.num_cells() != v.num_cells()) throw InputError("l2_pair: shape mismatch");
  return u.values().dot(v.values()) * grid.fine_area();
}

double energy(const SparseMatrix& a, const Vector& v) { return v.dot(a * v); }

GridFunction solve_static_fine(const GridPair& grid, const MediaField& field,
                               const GridFunction& source, const SolverOptions& options,
                               SolveInfo* info) {
  if (source.num_cells() != grid.num_fine()) throw InputError("source does not match the grid");
  const SpdSolver solver(assemble_aQ(grid, field), options);
  return GridFunction(grid.num_fine(), solver.solve(load_vector(grid, source), info));
}

int step_count(double dt, double horizon) {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw InputError("time step and horizon must be positive");
  const double ratio = horizon / dt;
  const long steps = std::lround(ratio);
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
    throw InputError("horizon must be a whole multiple of the time step");
  }
  return static_cast<int>(steps);
}

TimeSeries solve_transient_fine(const GridPair& grid, const MediaField& field,
                                const SourceFunction& source, const GridFunction& initial,
                                double dt, double horizon, const SolverOptions& options) {
  const int steps = step_count(dt, horizon);
  if (initial.num_cells() != grid.num_fine()) throw InputError("initial state does not match the grid");
  const SparseMatrix mass = assemble_mass(grid, field);
  const SparseMatrix scaled_mass = mass / dt;
  const SpdSolver solver(SparseMatrix(scaled_mass + assemble_aQ(grid, field)), options);

  TimeSeries series;
  series.times.push_back(0.0);
  series.states.push_back(initial);
  for (int n = 1; n <= steps; ++n) {
    const double t = n * dt;
    const GridFunction f = source(t);
    const Vector rhs = scaled_mass * series.states.back().values() + load_vector(grid, f);
    series.times.push_back(t);
    series.states.emplace_back(grid.num_fine(), solver.solve(rhs));
  }
  return series;
}

void write_grid_function(std::ostream& out, const GridFunction& v, int rows, int cols) {
  for (int i = 0; i < 2; ++i) {
    const auto seg = v.continuum(i);
    write_matrix(out, std::vector<double>(seg.begin(), seg.end()), rows, cols);
  }
}

GridFunction read_grid_function(std::istream& in, int rows, int cols) {
  const int cells = rows * cols;
  GridFunction v(cells);
  for (int i = 0; i < 2; ++i) {
    const auto values = read_matrix(in, rows, cols, "grid function continuum " + std::to_string(i + 1));
    v.continuum(i) = Eigen::Map<const Vector>(values.data(), cells);
  }
  return v;
}

}  // namespace nlmc
