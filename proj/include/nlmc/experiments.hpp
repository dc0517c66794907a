#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nlmc/basis.hpp"
#include "nlmc/coarse.hpp"
#include "nlmc/config.hpp"
#include "nlmc/metrics.hpp"

namespace nlmc {

/// Grid, media and auxiliary space for one coarse resolution of a config.
struct Problem {
  GridPair grid{1, 1};
  MediaField field;
  ContinuumPartition partition;
  AuxiliaryBasisSet aux;
};

/// Builds (or loads) the medium at the config's fine resolution.
MediaField make_media(const ExperimentConfig& config);
Problem make_problem(const ExperimentConfig& config, int n_coarse, const MediaField& field);

/// Two-continuum source on the fine grid from the f1/f2 specs.
GridFunction make_source(const ExperimentConfig& config, const GridPair& grid);
GridFunction make_initial(const ExperimentConfig& config, const GridPair& grid);

/// Writes "role path" lines; paths are relative to the output directory.
class ArtifactIndex {
 public:
  explicit ArtifactIndex(std::filesystem::path dir);
  std::filesystem::path add(const std::string& role, const std::string& file);
  void write() const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct StageTimes {
  std::vector<std::pair<std::string, double>> seconds;
  void record(const std::string& stage, double s) { seconds.emplace_back(stage, s); }
  void write(const std::filesystem::path& path) const;
};

struct StaticResult {
  ErrorReport report;
  GridFunction fine;
  GridFunction multiscale;
  CoarseSolution coarse;
  StageTimes times;
};

/// Experiment 1: fine and NLMC static solves, error report and grid dumps.
StaticResult run_static_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct TransientResult {
  ErrorReport report;  // final time
  std::vector<double> times;
  std::vector<RelativeError> series;
  std::vector<int> snapshot_steps;
  StageTimes times_taken;
};

/// Experiment 2: backward Euler on the fine and coarse systems.
TransientResult run_transient_experiment(const ExperimentConfig& config,
                                         const std::filesystem::path& out_dir);

struct DecayRow {
  int layers = 0;
  double area_ratio = 0.0;
  double difference = 0.0;  // ||phi - psi(m)||_{a_Q}
  double tail = 0.0;        // ||phi||^2_{a_Q(Omega \ K_{j,m})}
};

/// Global basis against localized bases over decay_layers for one DOF.
std::vector<DecayRow> run_decay_study(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Static experiment over the (n_coarse, layers) schedule at a fixed fine grid.
std::vector<ErrorReport> run_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Media files and manifest for the config's generator.
std::filesystem::path run_generate_media(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace nlmc
