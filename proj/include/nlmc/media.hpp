#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nlmc/grid.hpp"

namespace nlmc {

/// Per-fine-cell coefficients of the dual-continuum model, row-major from the
/// bottom-left like the fine grid. Continuum indices are 0 and 1.
struct MediaField {
  int n = 0;  // fine cells per side
  std::vector<double> kappa1;
  std::vector<double> kappa2;
  std::vector<double> sigma;
  std::vector<double> c1;
  std::vector<double> c2;

  const std::vector<double>& kappa(int continuum) const { return continuum == 0 ? kappa1 : kappa2; }
  const std::vector<double>& compressibility(int continuum) const {
    return continuum == 0 ? c1 : c2;
  }
  int num_cells() const { return n * n; }

  double kappa_min(int continuum) const;
  double kappa_max(int continuum) const;
  /// max kappa_i / min kappa_i.
  double contrast(int continuum) const;

  /// Throws InputError unless sizes match and kappa > 0, sigma >= 0, c > 0.
  void validate() const;

  bool operator==(const MediaField&) const = default;
};

MediaField uniform_media(const GridPair& grid, double kappa = 1.0, double sigma = 1.0,
                         double c = 1.0);

/// Axis-aligned rectangle in fine-cell coordinates, half-open: rows [row0,row1), cols [col0,col1).
struct ChannelRect {
  int row0 = 0, col0 = 0, row1 = 0, col1 = 0;
};

/// Chain of axis-aligned segments through (row, col) vertices, `width` cells thick.
struct ChannelPolyline {
  std::vector<std::pair<int, int>> vertices;
  int width = 1;
};

struct ChannelLayout {
  std::vector<ChannelRect> rects;
  std::vector<ChannelPolyline> lines;

  bool empty() const { return rects.empty() && lines.empty(); }
};

/// Channel geometry for both permeability fields. A continuum whose explicit
/// layout is empty gets a random layout drawn from the seed: long meandering
/// channels for kappa1, shorter channels plus rectangular inclusions for kappa2.
struct ChannelsSpec {
  ChannelLayout kappa1;
  ChannelLayout kappa2;
  int random_channels = 4;
  int random_inclusions = 6;
  int channel_width = 2;
};

/// Paints channel cells (marker 1) of a layout onto an n x n mask.
std::vector<std::uint8_t> rasterize(const ChannelLayout& layout, int n);

/// Two-valued high-contrast media: background 1, channel cells `contrast`.
/// sigma = 1 and c1 = c2 = 1.
MediaField generate_channelized(const GridPair& grid, double contrast, std::uint64_t seed,
                                const ChannelsSpec& spec = {});

// Grid-field files: first line "nrows ncols", then nrows rows of ncols values,
// bottom row first.
void write_matrix(std::ostream& out, const std::vector<double>& values, int rows, int cols);
std::vector<double> read_matrix(std::istream& in, int rows, int cols, const std::string& what);

/// Writes one file per field plus `manifest.txt` with "role path" lines.
/// Returns the manifest path.
std::filesystem::path save_media(const MediaField& field, const std::filesystem::path& dir);
/// Loads from a manifest; every field must be n x n with n = grid.n_fine().
MediaField load_media(const std::filesystem::path& manifest, const GridPair& grid);

enum class PartitionMode { Single, Channelized };

PartitionMode parse_partition_mode(const std::string& text);
std::string to_string(PartitionMode mode);

/// Sub-regions K_l^{(i,j)} of every coarse block for both continua.
///
/// labels[i][k] is the block-local label of fine cell k in continuum i. In
/// channelized mode labels are numbered in order of first appearance when the
/// block is scanned row-major; the matrix (sub-threshold) cells are one more
/// sub-region numbered the same way.
struct ContinuumPartition {
  PartitionMode mode = PartitionMode::Single;
  std::array<std::vector<int>, 2> labels;
  /// counts[i][j] = L_i^{(j)}.
  std::array<std::vector<int>, 2> counts;
  /// cells[i][j][l] = number of fine cells of K_l^{(i,j)}.
  std::array<std::vector<std::vector<int>>, 2> cells;

  int num_subregions(int continuum, int block) const { return counts[continuum][block]; }
};

/// threshold <= 0 selects the default sqrt(min kappa_i * max kappa_i) per continuum.
ContinuumPartition partition_continua(const GridPair& grid, const MediaField& field,
                                      PartitionMode mode, double threshold = 0.0);

}  // namespace nlmc
