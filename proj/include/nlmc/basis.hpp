#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "nlmc/finescale.hpp"
#include "nlmc/grid.hpp"
#include "nlmc/media.hpp"

namespace nlmc {

/// One auxiliary function chi_l^{(i,j)} = 1/|K_l^{(i,j)}| on its sub-region.
struct AuxDof {
  int continuum = 0;
  int block = 0;
  int label = 0;
  std::vector<int> fine_cells;  // global fine indices, ascending
  double area = 0.0;
  double value = 0.0;  // 1 / area
};

/// Auxiliary DOFs ordered continuum-major, then block row-major, then label.
class AuxiliaryBasisSet {
 public:
  AuxiliaryBasisSet() = default;
  AuxiliaryBasisSet(std::vector<AuxDof> dofs, int num_blocks);

  int size() const { return static_cast<int>(dofs_.size()); }
  const AuxDof& operator[](int index) const { return dofs_[index]; }
  const std::vector<AuxDof>& dofs() const { return dofs_; }

  int index(int continuum, int block, int label) const;
  int count(int continuum, int block) const;
  /// All DOFs of a block, continuum 0 first.
  std::vector<int> block_dofs(int block) const;

 private:
  std::vector<AuxDof> dofs_;
  std::array<std::vector<int>, 2> offsets_;  // size num_blocks + 1
};

AuxiliaryBasisSet build_auxiliary(const GridPair& grid, const ContinuumPartition& partition);

struct Projection {
  Vector coefficients;    // (v_i, chi_alpha) per DOF
  GridFunction function;  // sum coefficient * chi
};

Projection project_pi(const GridPair& grid, const AuxiliaryBasisSet& aux, const GridFunction& v);

/// Constraint rows of every auxiliary DOF whose block lies in the region.
/// Row r applied to a region-local function gives (v . e_i, chi_{dofs[r]}).
struct RegionConstraints {
  std::vector<int> dofs;  // ascending
  SparseMatrix matrix;    // dofs.size() x 2 * region cells
};

RegionConstraints region_constraints(const GridPair& grid, const AuxiliaryBasisSet& aux,
                                     const OversampleRegion& region);

struct BasisOptions {
  double constraint_tol = 1e-9;
  double stationarity_tol = 1e-9;
  int max_refinement = 3;
  /// Worker threads for batch builds; 0 selects the hardware concurrency.
  int threads = 1;
};

struct MultiscaleBasis {
  int dof = 0;
  int layers = 0;
  std::shared_ptr<const OversampleRegion> region;
  GridFunction psi;  // region-local
  /// (auxiliary DOF, multiplier) for every DOF constrained in the region.
  std::vector<std::pair<int, double>> transfer;
  double constraint_residual = 0.0;
  double stationarity_residual = 0.0;

  double transfer_to(int other) const;
};

/// Bases for every auxiliary DOF of one coarse block sharing one region and one
/// factorization of the saddle-point system.
std::vector<MultiscaleBasis> build_block_bases(const GridPair& grid, const MediaField& field,
                                               const AuxiliaryBasisSet& aux,
                                               std::shared_ptr<const OversampleRegion> region,
                                               const std::vector<int>& targets,
                                               const BasisOptions& options = {});

MultiscaleBasis build_ms_basis(const GridPair& grid, const MediaField& field,
                               const AuxiliaryBasisSet& aux, int dof, int layers,
                               const BasisOptions& options = {});

MultiscaleBasis build_global_basis(const GridPair& grid, const MediaField& field,
                                   const AuxiliaryBasisSet& aux, int dof,
                                   const BasisOptions& options = {});

/// One localized basis per auxiliary DOF, indexed by DOF. Blocks are processed
/// in parallel; results do not depend on the thread count.
std::vector<MultiscaleBasis> build_all_ms_bases(const GridPair& grid, const MediaField& field,
                                                const AuxiliaryBasisSet& aux, int layers,
                                                const BasisOptions& options = {});

/// One global basis per auxiliary DOF from a single factorization.
std::vector<MultiscaleBasis> build_all_global_bases(const GridPair& grid, const MediaField& field,
                                                    const AuxiliaryBasisSet& aux,
                                                    const BasisOptions& options = {});

/// Basis extended by zero to the whole fine grid (global two-continuum layout).
Vector zero_extend(const GridPair& grid, const MultiscaleBasis& basis);

/// Region header, psi in the grid-field format, then "dof value" transfer pairs.
void write_basis(std::ostream& out, const MultiscaleBasis& basis);

}  // namespace nlmc
