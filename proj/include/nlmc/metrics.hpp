#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlmc/finescale.hpp"
#include "nlmc/grid.hpp"
#include "nlmc/media.hpp"

namespace nlmc {

/// Per-block means, continuum-major: values[i][j].
struct CoarseAverages {
  std::array<std::vector<double>, 2> values;
};

CoarseAverages coarse_average(const GridPair& grid, const GridFunction& v);

/// Relative l2 distance of block averages per continuum,
///   e_i = sqrt(sum_K (ref_i^K - approx_i^K)^2 / sum_K (ref_i^K)^2).
/// An entry is empty ("undefined") when the reference vanishes but the
/// approximation does not; identical inputs give exactly 0.
using RelativeError = std::array<std::optional<double>, 2>;

RelativeError relative_l2_error(const CoarseAverages& reference, const CoarseAverages& approx);

/// a_Q energy split by coarse block: exchange terms and domain-boundary faces
/// go to the owning block, fine faces between two blocks are shared half/half.
std::vector<double> block_energies(const GridPair& grid, const MediaField& field,
                                   const GridFunction& v);

/// ||v||^2_{a_Q(D)} with D the blocks outside `excluded` (nullptr: D = Omega).
double energy_tail(const GridPair& grid, const MediaField& field, const GridFunction& v,
                   const OversampleRegion* excluded);

struct ErrorReport {
  int n_coarse = 0;
  int layers = 0;
  double area_ratio = 0.0;
  RelativeError error;
  std::string media_hash;
  std::string config_hash;
};

/// Percent with four decimals, or "undefined".
std::string format_percent(const std::optional<double>& value);

/// Rows "H,m,e1_percent,e2_percent" (with area_ratio_percent after m when requested).
void write_error_csv(std::ostream& out, const std::vector<ErrorReport>& rows, bool with_area_ratio);

/// FNV-1a of a byte string as 16 hex digits.
std::string content_hash(std::string_view bytes);
/// content_hash over the raw bytes of all five fields.
std::string media_hash(const MediaField& field);

}  // namespace nlmc
