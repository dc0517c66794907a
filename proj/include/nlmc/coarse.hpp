#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlmc/basis.hpp"
#include "nlmc/finescale.hpp"

namespace nlmc {

enum class MassKind { Galerkin, Lumped };

MassKind parse_mass_kind(const std::string& text);
std::string to_string(MassKind kind);

/// NLMC coarse system. Column alpha of `expansion` is the zero-extended basis
/// psi_alpha on the global fine grid (two-continuum layout), so
/// stiffness = expansion^T A_Q expansion and mass = expansion^T M expansion.
struct CoarseSystem {
  int num_fine_cells = 0;
  SparseMatrix expansion;
  SparseMatrix stiffness;
  SparseMatrix mass;
  /// Diagonal int_{K_l} c_i dx per DOF.
  SparseMatrix lumped_mass;

  int size() const { return static_cast<int>(stiffness.rows()); }
  /// F_beta = (f, psi_beta).
  Vector rhs(const GridPair& grid, const GridFunction& source) const;
};

CoarseSystem assemble_coarse(const GridPair& grid, const MediaField& field,
                             const AuxiliaryBasisSet& aux, const std::vector<MultiscaleBasis>& bases);

struct CoarseSolution {
  Vector coefficients;
  double time = 0.0;
};

CoarseSolution solve_coarse_static(const GridPair& grid, const CoarseSystem& system,
                                   const GridFunction& source, const SolverOptions& options = {},
                                   SolveInfo* info = nullptr);

/// Coefficients at every step, including the initial state.
std::vector<CoarseSolution> solve_coarse_transient(const GridPair& grid, const CoarseSystem& system,
                                                   const SourceFunction& source,
                                                   const Vector& initial, double dt,
                                                   double horizon, MassKind mass = MassKind::Galerkin,
                                                   const SolverOptions& options = {});

/// Initial coefficients from a fine initial state: the pairings (p0_i, chi_alpha).
Vector initial_coefficients(const GridPair& grid, const AuxiliaryBasisSet& aux,
                            const GridFunction& p0);

/// p_ms = sum_alpha u_alpha psi_alpha on the fine grid.
GridFunction downscale(const CoarseSystem& system, const Vector& coefficients);

/// CSV: continuum,block_row,block_col,sub_region,coefficient[,time]; one row per
/// DOF and solution, 1-based continuum and sub-region numbers.
void write_coarse_csv(std::ostream& out, const GridPair& grid, const AuxiliaryBasisSet& aux,
                      const std::vector<CoarseSolution>& solutions, bool with_time);

}  // namespace nlmc
