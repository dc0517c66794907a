#include "nlmc/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nlmc/errors.hpp"

namespace nlmc {

namespace fs = std::filesystem;

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

void write_averages(const fs::path& path, const CoarseAverages& avg, int n) {
  GridFunction v(n * n);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < n * n; ++j) v.at(i, j) = avg.values[i][j];
  }
  auto out = open_out(path);
  write_grid_function(out, v, n, n);
}

void write_fine(const fs::path& path, const GridFunction& v, int n) {
  auto out = open_out(path);
  write_grid_function(out, v, n, n);
}

SolverOptions solver_options(const ExperimentConfig& c) {
  SolverOptions o;
  o.kind = c.solver;
  o.rtol = c.rtol;
  return o;
}

BasisOptions basis_options(const ExperimentConfig& c) {
  BasisOptions o;
  o.constraint_tol = c.constraint_tol;
  o.stationarity_tol = c.constraint_tol;
  o.threads = c.threads;
  return o;
}

/// Area ratio of the oversampling region around an interior (center) block.
double interior_area_ratio(int n_coarse, int layers) {
  const GridPair grid(n_coarse, 1);
  const int mid = n_coarse / 2;
  return oversample(grid, grid.coarse_index(mid, mid), layers).area_ratio;
}

ErrorReport make_report(const ExperimentConfig& config, const Problem& problem, int layers,
                        const RelativeError& error) {
  ErrorReport r;
  r.n_coarse = problem.grid.n_coarse();
  r.layers = layers;
  r.area_ratio = interior_area_ratio(r.n_coarse, layers);
  r.error = error;
  r.media_hash = media_hash(problem.field);
  r.config_hash = content_hash(to_text(config));
  return r;
}

void write_report_csv(const fs::path& path, const std::vector<ErrorReport>& rows, bool area) {
  auto out = open_out(path);
  write_error_csv(out, rows, area);
}

}  // namespace

MediaField make_media(const ExperimentConfig& config) {
  const GridPair fine(config.n_fine(), 1);
  MediaField field;
  if (config.media_source == "files") {
    field = load_media(config.resolve(config.manifest), fine);
  } else {
    ChannelsSpec spec;
    spec.random_channels = config.channels;
    spec.random_inclusions = config.inclusions;
    spec.channel_width = config.channel_width;
    field = generate_channelized(fine, config.contrast, config.seed, spec);
  }
  if (config.sigma >= 0.0) std::fill(field.sigma.begin(), field.sigma.end(), config.sigma);
  field.validate();
  return field;
}

Problem make_problem(const ExperimentConfig& config, int n_coarse, const MediaField& field) {
  if (n_coarse < 1 || field.n % n_coarse != 0) {
    throw InputError("coarse grid 1/" + std::to_string(n_coarse) + " does not divide the fine grid");
  }
  Problem p;
  p.grid = GridPair(n_coarse, field.n / n_coarse);
  p.field = field;
  p.partition = partition_continua(p.grid, field, config.partition, config.threshold);
  p.aux = build_auxiliary(p.grid, p.partition);
  return p;
}

GridFunction make_source(const ExperimentConfig& config, const GridPair& grid) {
  const int n = grid.n_fine();
  GridFunction f(grid.num_fine());
  const auto f1 = sample_source(config.f1, n, config.base_dir);
  const auto f2 = sample_source(config.f2, n, config.base_dir);
  f.continuum(0) = Eigen::Map<const Vector>(f1.data(), grid.num_fine());
  f.continuum(1) = Eigen::Map<const Vector>(f2.data(), grid.num_fine());
  return f;
}

GridFunction make_initial(const ExperimentConfig& config, const GridPair& grid) {
  if (config.initial == "zero") return GridFunction(grid.num_fine());
  std::istringstream in(config.initial);
  std::string word, path;
  in >> word >> path;
  std::ifstream file(config.resolve(path));
  if (word != "file" || !file) throw InputError("cannot read initial state '" + config.initial + "'");
  return read_grid_function(file, grid.n_fine(), grid.n_fine());
}

ArtifactIndex::ArtifactIndex(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

fs::path ArtifactIndex::add(const std::string& role, const std::string& file) {
  entries_.emplace_back(role, file);
  return dir_ / file;
}

void ArtifactIndex::write() const {
  auto out = open_out(dir_ / "artifacts.txt");
  for (const auto& [role, file] : entries_) out << role << ' ' << file << '\n';
}

void StageTimes::write(const fs::path& path) const {
  auto out = open_out(path);
  for (const auto& [stage, s] : seconds) out << stage << ' ' << s << '\n';
}

StaticResult run_static_experiment(const ExperimentConfig& config, const fs::path& out_dir) {
  validate(config);
  ArtifactIndex index(out_dir);
  StaticResult result;
  Stopwatch clock;

  const Problem problem = make_problem(config, config.n_coarse, make_media(config));
  const GridPair& grid = problem.grid;
  const GridFunction f = make_source(config, grid);
  result.times.record("setup", clock.lap());

  result.fine = solve_static_fine(grid, problem.field, f, solver_options(config));
  result.times.record("fine_solve", clock.lap());

  const auto bases = build_all_ms_bases(grid, problem.field, problem.aux, config.layers, basis_options(config));
  result.times.record("basis_build", clock.lap());
  const CoarseSystem system = assemble_coarse(grid, problem.field, problem.aux, bases);
  result.times.record("coarse_assembly", clock.lap());
  result.coarse = solve_coarse_static(grid, system, f, solver_options(config));
  result.multiscale = downscale(system, result.coarse.coefficients);
  result.times.record("coarse_solve", clock.lap());

  const CoarseAverages avg_fine = coarse_average(grid, result.fine);
  const CoarseAverages avg_ms = coarse_average(grid, result.multiscale);
  result.report = make_report(config, problem, config.layers, relative_l2_error(avg_fine, avg_ms));

  write_fine(index.add("fine_solution", "fine_solution.txt"), result.fine, grid.n_fine());
  write_averages(index.add("fine_average", "fine_average.txt"), avg_fine, grid.n_coarse());
  write_averages(index.add("nlmc_average", "nlmc_average.txt"), avg_ms, grid.n_coarse());
  write_fine(index.add("nlmc_solution", "nlmc_solution.txt"), result.multiscale, grid.n_fine());
  {
    auto out = open_out(index.add("coarse_solution", "coarse_solution.csv"));
    write_coarse_csv(out, grid, problem.aux, {result.coarse}, false);
  }
  write_report_csv(index.add("errors", "errors.csv"), {result.report}, false);
  result.times.write(index.add("timings", "timings.txt"));
  index.write();
  return result;
}

TransientResult run_transient_experiment(const ExperimentConfig& config, const fs::path& out_dir) {
  validate(config);
  ArtifactIndex index(out_dir);
  TransientResult result;
  Stopwatch clock;

  const Problem problem = make_problem(config, config.n_coarse, make_media(config));
  const GridPair& grid = problem.grid;
  const GridFunction f = make_source(config, grid);
  const GridFunction p0 = make_initial(config, grid);
  const SourceFunction source = [&f](double) { return f; };
  const int steps = step_count(config.dt, config.horizon);
  result.times_taken.record("setup", clock.lap());

  const TimeSeries fine =
      solve_transient_fine(grid, problem.field, source, p0, config.dt, config.horizon, solver_options(config));
  result.times_taken.record("fine_solve", clock.lap());

  const auto bases = build_all_ms_bases(grid, problem.field, problem.aux, config.layers, basis_options(config));
  result.times_taken.record("basis_build", clock.lap());
  const CoarseSystem system = assemble_coarse(grid, problem.field, problem.aux, bases);
  result.times_taken.record("coarse_assembly", clock.lap());
  const auto coarse = solve_coarse_transient(grid, system, source, initial_coefficients(grid, problem.aux, p0),
                                             config.dt, config.horizon, config.mass, solver_options(config));
  result.times_taken.record("coarse_solve", clock.lap());

  result.snapshot_steps = {std::max(1, static_cast<int>(std::lround(steps / 4.0))),
                           std::max(1, static_cast<int>(std::lround(steps / 2.0))), steps};
  for (int s = 0; s <= steps; ++s) {
    const auto avg_f = coarse_average(grid, fine.states[s]);
    const GridFunction ms = downscale(system, coarse[s].coefficients);
    const auto avg_ms = coarse_average(grid, ms);
    result.times.push_back(fine.times[s]);
    result.series.push_back(relative_l2_error(avg_f, avg_ms));
    if (s > 0 && std::find(result.snapshot_steps.begin(), result.snapshot_steps.end(), s) !=
                     result.snapshot_steps.end()) {
      const std::string tag = "_step" + std::to_string(s);
      write_fine(index.add("fine_solution" + tag, "fine_solution" + tag + ".txt"), fine.states[s], grid.n_fine());
      write_averages(index.add("fine_average" + tag, "fine_average" + tag + ".txt"), avg_f, grid.n_coarse());
      write_averages(index.add("nlmc_average" + tag, "nlmc_average" + tag + ".txt"), avg_ms, grid.n_coarse());
    }
  }
  result.report = make_report(config, problem, config.layers, result.series.back());

  {
    auto out = open_out(index.add("error_series", "error_series.csv"));
    out << "step,time,e1_percent,e2_percent\n";
    char buf[64];
    for (std::size_t s = 0; s < result.series.size(); ++s) {
      std::snprintf(buf, sizeof buf, "%.6g", result.times[s]);
      out << s << ',' << buf << ',' << format_percent(result.series[s][0]) << ','
          << format_percent(result.series[s][1]) << '\n';
    }
  }
  {
    auto out = open_out(index.add("coarse_solution", "coarse_solution.csv"));
    write_coarse_csv(out, grid, problem.aux, coarse, true);
  }
  write_report_csv(index.add("errors", "errors.csv"), {result.report}, false);
  result.times_taken.write(index.add("timings", "timings.txt"));
  index.write();
  return result;
}

std::vector<DecayRow> run_decay_study(const ExperimentConfig& config, const fs::path& out_dir) {
  validate(config);
  const Problem problem = make_problem(config, config.n_coarse, make_media(config));
  const GridPair& grid = problem.grid;
  const long unknowns = 2L * grid.num_fine() + problem.aux.size();
  if (unknowns > config.max_global_unknowns) {
    throw InputError("global basis system has " + std::to_string(unknowns) +
                     " unknowns, above the configured limit decay.max_global_unknowns = " +
                     std::to_string(config.max_global_unknowns));
  }

  int dof = 0;
  if (config.decay_dof == "center") {
    const int mid = grid.n_coarse() / 2;
    dof = problem.aux.index(0, grid.coarse_index(mid, mid), 0);
  } else {
    dof = std::stoi(config.decay_dof);
    if (dof < 0 || dof >= problem.aux.size()) throw InputError("decay.dof out of range");
  }
  std::vector<int> schedule = config.decay_layers;
  if (schedule.empty()) {
    for (int m = 0; m <= grid.n_coarse(); ++m) schedule.push_back(m);
  }

  ArtifactIndex index(out_dir);
  StageTimes times;
  Stopwatch clock;
  const BasisOptions options = basis_options(config);
  const MultiscaleBasis global = build_global_basis(grid, problem.field, problem.aux, dof, options);
  const Vector phi = zero_extend(grid, global);
  const GridFunction phi_fn(grid.num_fine(), phi);
  const SparseMatrix a_q = assemble_aQ(grid, problem.field);
  times.record("global_basis", clock.lap());

  std::vector<DecayRow> rows;
  for (const int m : schedule) {
    const MultiscaleBasis local = build_ms_basis(grid, problem.field, problem.aux, dof, m, options);
    const Vector diff = phi - zero_extend(grid, local);
    DecayRow row;
    row.layers = m;
    row.area_ratio = local.region->area_ratio;
    row.difference = std::sqrt(std::max(0.0, energy(a_q, diff)));
    row.tail = energy_tail(grid, problem.field, phi_fn, local.region.get());
    rows.push_back(row);
  }
  times.record("local_bases", clock.lap());

  auto out = open_out(index.add("decay", "decay.csv"));
  out << "m,area_ratio_percent,energy_difference,energy_tail\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.2f,%.10e,%.10e\n", r.layers, r.area_ratio * 100.0, r.difference, r.tail);
    out << buf;
  }
  out.close();
  times.write(index.add("timings", "timings.txt"));
  index.write();
  return rows;
}

std::vector<ErrorReport> run_sweep(const ExperimentConfig& config, const fs::path& out_dir) {
  validate(config);
  if (config.sweep.empty()) throw InputError("sweep.schedule is empty");
  ArtifactIndex index(out_dir);
  StageTimes times;
  Stopwatch clock;

  const MediaField field = make_media(config);
  const GridPair fine_grid(config.n_fine(), 1);
  const GridFunction f = make_source(config, fine_grid);
  const GridFunction fine = solve_static_fine(fine_grid, field, f, solver_options(config));
  times.record("fine_solve", clock.lap());
  write_fine(index.add("fine_solution", "fine_solution.txt"), fine, fine_grid.n_fine());

  std::vector<ErrorReport> rows;
  for (const auto& [n, m] : config.sweep) {
    const Problem problem = make_problem(config, n, field);
    const auto bases = build_all_ms_bases(problem.grid, field, problem.aux, m, basis_options(config));
    const CoarseSystem system = assemble_coarse(problem.grid, field, problem.aux, bases);
    const CoarseSolution u = solve_coarse_static(problem.grid, system, f, solver_options(config));
    const auto err = relative_l2_error(coarse_average(problem.grid, fine),
                                       coarse_average(problem.grid, downscale(system, u.coefficients)));
    rows.push_back(make_report(config, problem, m, err));
    times.record("H=1/" + std::to_string(n) + ",m=" + std::to_string(m), clock.lap());
  }

  bool same_h = true;
  for (const auto& r : rows) same_h = same_h && r.n_coarse == rows.front().n_coarse;
  write_report_csv(index.add("sweep", "sweep.csv"), rows, same_h && rows.size() > 1);
  times.write(index.add("timings", "timings.txt"));
  index.write();
  return rows;
}

fs::path run_generate_media(const ExperimentConfig& config, const fs::path& out_dir) {
  validate(config);
  ArtifactIndex index(out_dir);
  const MediaField field = make_media(config);
  const fs::path manifest = save_media(field, out_dir / "media");
  for (const char* role : {"kappa1", "kappa2", "sigma", "c1", "c2"}) {
    index.add(role, std::string("media/") + role + ".txt");
  }
  index.add("media_manifest", "media/manifest.txt");
  index.write();
  return manifest;
}

}  // namespace nlmc
