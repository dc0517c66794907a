#include "nlmc/basis.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "nlmc/errors.hpp"

namespace nlmc {

AuxiliaryBasisSet::AuxiliaryBasisSet(std::vector<AuxDof> dofs, int num_blocks)
    : dofs_(std::move(dofs)) {
  for (auto& off : offsets_) off.assign(static_cast<std::size_t>(num_blocks) + 1, 0);
  std::array<std::vector<int>, 2> counts;
  for (auto& c : counts) c.assign(static_cast<std::size_t>(num_blocks), 0);
  for (const auto& d : dofs_) ++counts[d.continuum][d.block];
  int running = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < num_blocks; ++j) {
      offsets_[i][j] = running;
      running += counts[i][j];
    }
    offsets_[i][num_blocks] = running;
  }
}

int AuxiliaryBasisSet::index(int continuum, int block, int label) const {
  if (label < 0 || label >= count(continuum, block)) throw InputError("auxiliary DOF label out of range");
  return offsets_[continuum][block] + label;
}

int AuxiliaryBasisSet::count(int continuum, int block) const {
  return offsets_[continuum][block + 1] - offsets_[continuum][block];
}

std::vector<int> AuxiliaryBasisSet::block_dofs(int block) const {
  std::vector<int> out;
  for (int i = 0; i < 2; ++i) {
    for (int d = offsets_[i][block]; d < offsets_[i][block + 1]; ++d) out.push_back(d);
  }
  return out;
}

double MultiscaleBasis::transfer_to(int other) const {
  const auto it = std::lower_bound(transfer.begin(), transfer.end(), std::make_pair(other, -1e308));
  if (it == transfer.end() || it->first != other) return 0.0;
  return it->second;
}

AuxiliaryBasisSet build_auxiliary(const GridPair& grid, const ContinuumPartition& partition) {
  const int blocks = grid.num_coarse();
  const double h2 = grid.fine_area();
  std::vector<AuxDof> dofs;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < blocks; ++j) {
      const int count = partition.counts[i][j];
      const auto first = dofs.size();
      for (int l = 0; l < count; ++l) dofs.push_back({i, j, l, {}, 0.0, 0.0});
      for (const int k : grid.fine_cells_of(j)) {
        const int l = partition.labels[i][k];
        if (l < 0 || l >= count) throw InputError("partition label out of range");
        dofs[first + l].fine_cells.push_back(k);
      }
      for (int l = 0; l < count; ++l) {
        auto& d = dofs[first + l];
        if (d.fine_cells.empty()) throw InputError("empty sub-region in block " + std::to_string(j));
        std::sort(d.fine_cells.begin(), d.fine_cells.end());
        d.area = static_cast<double>(d.fine_cells.size()) * h2;
        d.value = 1.0 / d.area;
      }
    }
  }
  return AuxiliaryBasisSet(std::move(dofs), blocks);
}

Projection project_pi(const GridPair& grid, const AuxiliaryBasisSet& aux, const GridFunction& v) {
  if (v.num_cells() != grid.num_fine()) throw InputError("project_pi: shape mismatch");
  const double h2 = grid.fine_area();
  Projection out{Vector::Zero(aux.size()), GridFunction(grid.num_fine())};
  for (int a = 0; a < aux.size(); ++a) {
    const AuxDof& d = aux[a];
    double sum = 0.0;
    for (const int k : d.fine_cells) sum += v.at(d.continuum, k);
    const double coeff = sum * h2 * d.value;
    out.coefficients[a] = coeff;
    for (const int k : d.fine_cells) out.function.at(d.continuum, k) += coeff * d.value;
  }
  return out;
}

RegionConstraints region_constraints(const GridPair& grid, const AuxiliaryBasisSet& aux,
                                     const OversampleRegion& region) {
  RegionConstraints rc;
  const int n = region.num_fine();
  std::vector<Eigen::Triplet<double>> t;
  for (int a = 0; a < aux.size(); ++a) {
    const AuxDof& d = aux[a];
    const int brow = d.block / grid.n_coarse();
    const int bcol = d.block % grid.n_coarse();
    if (!region.contains_coarse(brow, bcol)) continue;
    const int row = static_cast<int>(rc.dofs.size());
    rc.dofs.push_back(a);
    // (v_i, chi) = sum_k v_i(k) h^2 / |K_l| = mean of v_i over the sub-region.
    const double w = 1.0 / static_cast<double>(d.fine_cells.size());
    for (const int k : d.fine_cells) {
      t.emplace_back(row, d.continuum * n + region.local_of(grid, k), w);
    }
  }
  rc.matrix.resize(static_cast<Eigen::Index>(rc.dofs.size()), 2 * n);
  rc.matrix.setFromTriplets(t.begin(), t.end());
  return rc;
}

std::vector<MultiscaleBasis> build_block_bases(const GridPair& grid, const MediaField& field,
                                               const AuxiliaryBasisSet& aux,
                                               std::shared_ptr<const OversampleRegion> region,
                                               const std::vector<int>& targets,
                                               const BasisOptions& options) {
  const SparseMatrix a = assemble_aQ(grid, field, *region);
  const RegionConstraints rc = region_constraints(grid, aux, *region);
  const SaddlePointSolver solver(a, rc.matrix);

  std::vector<MultiscaleBasis> out;
  out.reserve(targets.size());
  std::ostringstream failures;
  for (const int dof : targets) {
    const auto pos = std::lower_bound(rc.dofs.begin(), rc.dofs.end(), dof);
    if (pos == rc.dofs.end() || *pos != dof) {
      throw InputError("auxiliary DOF " + std::to_string(dof) + " is not inside the region");
    }
    Vector g = Vector::Zero(static_cast<Eigen::Index>(rc.dofs.size()));
    g[pos - rc.dofs.begin()] = 1.0;
    const auto res = solver.solve(Vector::Zero(a.rows()), g, options.constraint_tol,
                                  options.max_refinement);

    MultiscaleBasis basis;
    basis.dof = dof;
    basis.layers = region->layers;
    basis.region = region;
    basis.psi = GridFunction(region->num_fine(), res.primal);
    basis.transfer.reserve(rc.dofs.size());
    for (std::size_t r = 0; r < rc.dofs.size(); ++r) basis.transfer.emplace_back(rc.dofs[r], res.dual[r]);
    basis.constraint_residual = res.constraint_residual;
    basis.stationarity_residual = res.stationarity_residual;
    if (res.constraint_residual > options.constraint_tol ||
        res.stationarity_residual > options.stationarity_tol) {
      failures << " dof " << dof << " (constraint " << res.constraint_residual << ", stationarity "
               << res.stationarity_residual << ")";
    }
    out.push_back(std::move(basis));
  }
  if (!failures.str().empty()) throw SolverError("basis residuals above tolerance:" + failures.str());
  return out;
}

MultiscaleBasis build_ms_basis(const GridPair& grid, const MediaField& field,
                               const AuxiliaryBasisSet& aux, int dof, int layers,
                               const BasisOptions& options) {
  if (dof < 0 || dof >= aux.size()) throw InputError("auxiliary DOF out of range");
  auto region = std::make_shared<const OversampleRegion>(oversample(grid, aux[dof].block, layers));
  return std::move(build_block_bases(grid, field, aux, region, {dof}, options).front());
}

MultiscaleBasis build_global_basis(const GridPair& grid, const MediaField& field,
                                   const AuxiliaryBasisSet& aux, int dof,
                                   const BasisOptions& options) {
  if (dof < 0 || dof >= aux.size()) throw InputError("auxiliary DOF out of range");
  auto region = std::make_shared<const OversampleRegion>(whole_domain(grid));
  return std::move(build_block_bases(grid, field, aux, region, {dof}, options).front());
}

std::vector<MultiscaleBasis> build_all_ms_bases(const GridPair& grid, const MediaField& field,
                                                const AuxiliaryBasisSet& aux, int layers,
                                                const BasisOptions& options) {
  std::vector<MultiscaleBasis> bases(static_cast<std::size_t>(aux.size()));
  const int blocks = grid.num_coarse();
  std::atomic<int> next{0};
  std::mutex mutex;
  std::vector<std::string> errors(static_cast<std::size_t>(blocks));

  auto worker = [&] {
    for (int j = next++; j < blocks; j = next++) {
      try {
        auto region = std::make_shared<const OversampleRegion>(oversample(grid, j, layers));
        for (auto& b : build_block_bases(grid, field, aux, region, aux.block_dofs(j), options)) {
          bases[b.dof] = std::move(b);
        }
      } catch (const std::exception& e) {
        errors[j] = e.what();
      }
    }
  };

  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, blocks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::ostringstream msg;
  for (int j = 0; j < blocks; ++j) {
    if (!errors[j].empty()) msg << "\n  block " << j << ": " << errors[j];
  }
  if (!msg.str().empty()) throw SolverError("multiscale basis construction failed:" + msg.str());
  return bases;
}

std::vector<MultiscaleBasis> build_all_global_bases(const GridPair& grid, const MediaField& field,
                                                    const AuxiliaryBasisSet& aux,
                                                    const BasisOptions& options) {
  auto region = std::make_shared<const OversampleRegion>(whole_domain(grid));
  std::vector<int> all(static_cast<std::size_t>(aux.size()));
  for (int a = 0; a < aux.size(); ++a) all[a] = a;
  return build_block_bases(grid, field, aux, region, all, options);
}

Vector zero_extend(const GridPair& grid, const MultiscaleBasis& basis) {
  const int n = grid.num_fine();
  const OversampleRegion& region = *basis.region;
  const int local = region.num_fine();
  Vector out = Vector::Zero(2 * static_cast<Eigen::Index>(n));
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < local; ++k) out[i * n + region.fine_cells[k]] = basis.psi.at(i, k);
  }
  return out;
}

void write_basis(std::ostream& out, const MultiscaleBasis& basis) {
  const OversampleRegion& region = *basis.region;
  out << "dof " << basis.dof << " layers " << basis.layers << " center " << region.center
      << " fine_rows " << region.fine_row_begin << ' ' << region.fine_row_end << " fine_cols "
      << region.fine_col_begin << ' ' << region.fine_col_end << '\n';
  write_grid_function(out, basis.psi, region.fine_rows(), region.fine_cols());
  out.precision(17);
  for (const auto& [dof, value] : basis.transfer) out << dof << ' ' << value << '\n';
}

}  // namespace nlmc
