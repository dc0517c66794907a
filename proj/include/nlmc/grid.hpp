#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

namespace nlmc {

/// Nested structured meshes on the unit square.
///
/// The coarse mesh has n_coarse x n_coarse square blocks of side H = 1/n_coarse,
/// each refined into refine x refine fine cells of side h = H/refine. Both meshes
/// are indexed row-major starting at the bottom-left corner: index = row * n + col.
class GridPair {
 public:
  GridPair(int n_coarse, int refine);

  int n_coarse() const { return n_coarse_; }
  int refine() const { return refine_; }
  int n_fine() const { return n_coarse_ * refine_; }

  int num_coarse() const { return n_coarse_ * n_coarse_; }
  int num_fine() const { return n_fine() * n_fine(); }

  double coarse_size() const { return 1.0 / n_coarse_; }
  double fine_size() const { return 1.0 / n_fine(); }
  double coarse_area() const { return coarse_size() * coarse_size(); }
  double fine_area() const { return fine_size() * fine_size(); }

  int coarse_index(int row, int col) const { return row * n_coarse_ + col; }
  int fine_index(int row, int col) const { return row * n_fine() + col; }

  int coarse_of_fine(int fine) const;
  /// Fine cells of coarse block j, row-major within the block.
  std::vector<int> fine_cells_of(int coarse) const;

  /// Cell center of fine cell k.
  std::array<double, 2> fine_center(int fine) const;

  bool operator==(const GridPair&) const = default;

 private:
  int n_coarse_;
  int refine_;
};

GridPair build_grid(int n_coarse, int refine);

/// Coarse block K_j enlarged by m Chebyshev layers of coarse blocks, clipped to
/// the domain. The result is always an axis-aligned rectangle of coarse blocks.
struct OversampleRegion {
  int center = 0;
  int layers = 0;

  // Half-open coarse block range [begin, end).
  int coarse_row_begin = 0;
  int coarse_row_end = 0;
  int coarse_col_begin = 0;
  int coarse_col_end = 0;

  // Half-open fine cell range [begin, end).
  int fine_row_begin = 0;
  int fine_row_end = 0;
  int fine_col_begin = 0;
  int fine_col_end = 0;

  /// Coarse blocks in the region, ascending (row-major).
  std::vector<int> cells;
  /// Fine cells in the region, ascending; position in this list is the local index.
  std::vector<int> fine_cells;

  /// |K_{j,m}| / |Omega|.
  double area_ratio = 0.0;

  int fine_rows() const { return fine_row_end - fine_row_begin; }
  int fine_cols() const { return fine_col_end - fine_col_begin; }
  int num_fine() const { return static_cast<int>(fine_cells.size()); }

  bool contains_coarse(int row, int col) const {
    return row >= coarse_row_begin && row < coarse_row_end && col >= coarse_col_begin &&
           col < coarse_col_end;
  }
  bool contains_fine(int row, int col) const {
    return row >= fine_row_begin && row < fine_row_end && col >= fine_col_begin &&
           col < fine_col_end;
  }
  /// Local index of a global fine cell, or -1 when outside.
  int local_of(const GridPair& grid, int fine) const;
  int local_index(int row, int col) const {
    return (row - fine_row_begin) * fine_cols() + (col - fine_col_begin);
  }
};

OversampleRegion oversample(const GridPair& grid, int coarse, int layers);
/// The whole domain as a region (equivalent to oversample with m >= n_coarse).
OversampleRegion whole_domain(const GridPair& grid);

/// Plain-text index list: header line, then the coarse cells, then the fine cells.
void write_region(std::ostream& out, const OversampleRegion& region);

enum class Side { South, North, West, East };

struct InteriorFace {
  int first;   // local index, lower/left cell
  int second;  // local index, upper/right cell
};

struct BoundaryFace {
  int cell;  // local index
  Side side; // outward direction
};

struct FaceList {
  std::vector<InteriorFace> interior;
  std::vector<BoundaryFace> boundary;
};

/// Faces of a rows x cols block of fine cells (local row-major indices).
FaceList face_list(int rows, int cols);
FaceList face_list(const OversampleRegion& region);

}  // namespace nlmc
