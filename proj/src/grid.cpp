#include "nlmc/grid.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "nlmc/errors.hpp"

namespace nlmc {

GridPair::GridPair(int n_coarse, int refine) : n_coarse_(n_coarse), refine_(refine) {
  if (n_coarse < 1 || refine < 1) {
    throw InputError("grid sizes must be positive (n_coarse=" + std::to_string(n_coarse) +
                     ", refine=" + std::to_string(refine) + ")");
  }
}

int GridPair::coarse_of_fine(int fine) const {
  const int row = fine / n_fine();
  const int col = fine % n_fine();
  return coarse_index(row / refine_, col / refine_);
}

std::vector<int> GridPair::fine_cells_of(int coarse) const {
  const int r0 = (coarse / n_coarse_) * refine_;
  const int c0 = (coarse % n_coarse_) * refine_;
  std::vector<int> cells;
  cells.reserve(static_cast<std::size_t>(refine_) * refine_);
  for (int r = r0; r < r0 + refine_; ++r) {
    for (int c = c0; c < c0 + refine_; ++c) cells.push_back(fine_index(r, c));
  }
  return cells;
}

std::array<double, 2> GridPair::fine_center(int fine) const {
  const double h = fine_size();
  return {(fine % n_fine() + 0.5) * h, (fine / n_fine() + 0.5) * h};
}

GridPair build_grid(int n_coarse, int refine) { return GridPair(n_coarse, refine); }

int OversampleRegion::local_of(const GridPair& grid, int fine) const {
  const int row = fine / grid.n_fine();
  const int col = fine % grid.n_fine();
  return contains_fine(row, col) ? local_index(row, col) : -1;
}

namespace {

OversampleRegion make_region(const GridPair& grid, int center, int layers, int r0, int r1,
                             int c0, int c1) {
  OversampleRegion region;
  region.center = center;
  region.layers = layers;
  region.coarse_row_begin = r0;
  region.coarse_row_end = r1;
  region.coarse_col_begin = c0;
  region.coarse_col_end = c1;
  const int refine = grid.refine();
  region.fine_row_begin = r0 * refine;
  region.fine_row_end = r1 * refine;
  region.fine_col_begin = c0 * refine;
  region.fine_col_end = c1 * refine;

  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) region.cells.push_back(grid.coarse_index(r, c));
  }
  region.fine_cells.reserve(static_cast<std::size_t>(region.fine_rows()) * region.fine_cols());
  for (int r = region.fine_row_begin; r < region.fine_row_end; ++r) {
    for (int c = region.fine_col_begin; c < region.fine_col_end; ++c) {
      region.fine_cells.push_back(grid.fine_index(r, c));
    }
  }
  region.area_ratio = static_cast<double>(region.cells.size()) / grid.num_coarse();
  return region;
}

}  // namespace

OversampleRegion oversample(const GridPair& grid, int coarse, int layers) {
  if (coarse < 0 || coarse >= grid.num_coarse()) {
    throw InputError("coarse index " + std::to_string(coarse) + " out of range");
  }
  if (layers < 0) throw InputError("oversampling layers must be nonnegative");
  const int n = grid.n_coarse();
  const int row = coarse / n;
  const int col = coarse % n;
  return make_region(grid, coarse, layers, std::max(0, row - layers), std::min(n, row + layers + 1),
                     std::max(0, col - layers), std::min(n, col + layers + 1));
}

OversampleRegion whole_domain(const GridPair& grid) {
  const int n = grid.n_coarse();
  return make_region(grid, 0, n, 0, n, 0, n);
}

void write_region(std::ostream& out, const OversampleRegion& region) {
  out << "center " << region.center << " layers " << region.layers << " coarse "
      << region.cells.size() << " fine " << region.fine_cells.size() << '\n';
  for (std::size_t i = 0; i < region.cells.size(); ++i) {
    out << (i ? " " : "") << region.cells[i];
  }
  out << '\n';
  for (std::size_t i = 0; i < region.fine_cells.size(); ++i) {
    out << (i ? " " : "") << region.fine_cells[i];
  }
  out << '\n';
}

FaceList face_list(int rows, int cols) {
  FaceList faces;
  if (rows <= 0 || cols <= 0) return faces;
  faces.interior.reserve(static_cast<std::size_t>(rows) * (cols - 1) +
                         static_cast<std::size_t>(cols) * (rows - 1));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int k = r * cols + c;
      if (c + 1 < cols) faces.interior.push_back({k, k + 1});
      if (r + 1 < rows) faces.interior.push_back({k, k + cols});
      if (r == 0) faces.boundary.push_back({k, Side::South});
      if (r == rows - 1) faces.boundary.push_back({k, Side::North});
      if (c == 0) faces.boundary.push_back({k, Side::West});
      if (c == cols - 1) faces.boundary.push_back({k, Side::East});
    }
  }
  return faces;
}

FaceList face_list(const OversampleRegion& region) {
  return face_list(region.fine_rows(), region.fine_cols());
}

}  // namespace nlmc
