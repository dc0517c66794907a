#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlmc/coarse.hpp"
#include "nlmc/finescale.hpp"
#include "nlmc/linear_solver.hpp"
#include "nlmc/media.hpp"

namespace nlmc {

/// Source field description, written in configs as one of
///   "zero", "constant <v>", "static-default", "five-spot", "file <path>".
struct SourceSpec {
  enum class Kind { Zero, Constant, StaticDefault, FiveSpot, File };
  Kind kind = Kind::Zero;
  double value = 0.0;
  std::string path;

  static SourceSpec parse(const std::string& text);
  std::string to_text() const;
  bool operator==(const SourceSpec&) const = default;
};

/// Samples a source on an n x n fine grid. File paths are resolved against base_dir.
std::vector<double> sample_source(const SourceSpec& spec, int n, const std::filesystem::path& base_dir);

/// +1 on a 16x16 fine-cell square centered in the lower-left quadrant, -1 on
/// one centered in the upper-right quadrant.
std::vector<double> static_default_source(int n);
/// +1 on an 8x8 fine-cell square at the center, -1/4 on 8x8 squares in each corner.
std::vector<double> five_spot_source(int n);

struct ExperimentConfig {
  // [grid]
  int n_coarse = 8;
  int refine = 16;

  // [media]
  std::string media_source = "generate";  // generate | files
  double contrast = 1e4;
  std::uint64_t seed = 1;
  int channels = 4;
  int inclusions = 6;
  int channel_width = 2;
  std::string manifest;  // for media_source = files
  double sigma = -1.0;   // < 0 keeps the field's own sigma

  // [partition]
  PartitionMode partition = PartitionMode::Channelized;
  double threshold = 0.0;  // <= 0: geometric mean of the kappa range

  // [basis]
  int layers = 3;
  int threads = 1;
  double constraint_tol = 1e-9;

  // [source]
  SourceSpec f1{SourceSpec::Kind::Constant, 1.0, {}};
  SourceSpec f2{SourceSpec::Kind::StaticDefault, 0.0, {}};

  // [transient]
  double horizon = 5.0;
  double dt = 0.25;
  MassKind mass = MassKind::Galerkin;
  std::string initial = "zero";  // zero | file <path>

  // [solver]
  SolverKind solver = SolverKind::Direct;
  double rtol = 1e-10;

  // [sweep] (n_coarse, layers) pairs at the fixed fine resolution n_coarse * refine
  std::vector<std::pair<int, int>> sweep;

  // [decay]
  std::string decay_dof = "center";  // center | <flat DOF index>
  std::vector<int> decay_layers;
  long max_global_unknowns = 400000;

  // [output]
  std::string output_dir = "out";

  /// Directory relative paths are resolved against; not serialized.
  std::filesystem::path base_dir;

  int n_fine() const { return n_coarse * refine; }
  std::filesystem::path resolve(const std::string& path) const;

  bool operator==(const ExperimentConfig& other) const;
};

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_text(const ExperimentConfig& config);

/// Checks values, schedules, and that referenced files exist. Throws InputError.
void validate(const ExperimentConfig& config);

}  // namespace nlmc
