#include "nlmc/coarse.hpp"

#include <cstdio>
#include <ostream>

#include "nlmc/errors.hpp"

namespace nlmc {

MassKind parse_mass_kind(const std::string& text) {
  if (text == "galerkin") return MassKind::Galerkin;
  if (text == "lumped") return MassKind::Lumped;
  throw InputError("unknown mass matrix '" + text + "' (expected galerkin or lumped)");
}

std::string to_string(MassKind kind) { return kind == MassKind::Galerkin ? "galerkin" : "lumped"; }

Vector CoarseSystem::rhs(const GridPair& grid, const GridFunction& source) const {
  if (source.num_cells() != num_fine_cells) throw InputError("source does not match the grid");
  return expansion.transpose() * load_vector(grid, source);
}

namespace {

SparseMatrix symmetric_part(const SparseMatrix& m) {
  SparseMatrix t = m.transpose();
  SparseMatrix s = 0.5 * (m + t);
  s.prune(0.0);
  return s;
}

}  // namespace

CoarseSystem assemble_coarse(const GridPair& grid, const MediaField& field,
                             const AuxiliaryBasisSet& aux, const std::vector<MultiscaleBasis>& bases) {
  if (static_cast<int>(bases.size()) != aux.size()) {
    throw InputError("basis collection has " + std::to_string(bases.size()) + " entries, expected " +
                     std::to_string(aux.size()));
  }
  const int n = grid.num_fine();
  std::size_t nnz = 0;
  for (int a = 0; a < aux.size(); ++a) {
    if (bases[a].dof != a || !bases[a].region) {
      throw InputError("missing multiscale basis for DOF " + std::to_string(a));
    }
    nnz += 2 * static_cast<std::size_t>(bases[a].region->num_fine());
  }

  CoarseSystem sys;
  sys.num_fine_cells = n;
  sys.expansion.resize(2 * static_cast<Eigen::Index>(n), aux.size());
  sys.expansion.reserve(static_cast<Eigen::Index>(nnz));
  for (int a = 0; a < aux.size(); ++a) {
    const MultiscaleBasis& b = bases[a];
    const OversampleRegion& region = *b.region;
    sys.expansion.startVec(a);
    // Inner indices must ascend: continuum 0 block first, region cells ascending.
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < region.num_fine(); ++k) {
        const double v = b.psi.at(i, k);
        if (v != 0.0) sys.expansion.insertBack(i * n + region.fine_cells[k], a) = v;
      }
    }
  }
  sys.expansion.finalize();

  const SparseMatrix a_q = assemble_aQ(grid, field);
  const SparseMatrix mass = assemble_mass(grid, field);
  const SparseMatrix applied = a_q * sys.expansion;
  sys.stiffness = symmetric_part(SparseMatrix(sys.expansion.transpose() * applied));
  const SparseMatrix mass_applied = mass * sys.expansion;
  sys.mass = symmetric_part(SparseMatrix(sys.expansion.transpose() * mass_applied));

  std::vector<Eigen::Triplet<double>> lumped;
  const double h2 = grid.fine_area();
  for (int a = 0; a < aux.size(); ++a) {
    const auto& c = field.compressibility(aux[a].continuum);
    double sum = 0.0;
    for (const int k : aux[a].fine_cells) sum += c[k];
    lumped.emplace_back(a, a, sum * h2);
  }
  sys.lumped_mass.resize(aux.size(), aux.size());
  sys.lumped_mass.setFromTriplets(lumped.begin(), lumped.end());
  return sys;
}

CoarseSolution solve_coarse_static(const GridPair& grid, const CoarseSystem& system,
                                   const GridFunction& source, const SolverOptions& options,
                                   SolveInfo* info) {
  const SpdSolver solver(system.stiffness, options);
  return {solver.solve(system.rhs(grid, source), info), 0.0};
}

std::vector<CoarseSolution> solve_coarse_transient(const GridPair& grid, const CoarseSystem& system,
                                                   const SourceFunction& source,
                                                   const Vector& initial, double dt,
                                                   double horizon, MassKind mass,
                                                   const SolverOptions& options) {
  const int steps = step_count(dt, horizon);
  if (initial.size() != system.size()) throw InputError("initial coefficients do not match the system");
  const SparseMatrix scaled =
      (mass == MassKind::Galerkin ? system.mass : system.lumped_mass) / dt;
  const SpdSolver solver(SparseMatrix(scaled + system.stiffness), options);

  std::vector<CoarseSolution> out;
  out.push_back({initial, 0.0});
  for (int s = 1; s <= steps; ++s) {
    const double t = s * dt;
    const Vector rhs = scaled * out.back().coefficients + system.rhs(grid, source(t));
    out.push_back({solver.solve(rhs), t});
  }
  return out;
}

Vector initial_coefficients(const GridPair& grid, const AuxiliaryBasisSet& aux,
                            const GridFunction& p0) {
  return project_pi(grid, aux, p0).coefficients;
}

GridFunction downscale(const CoarseSystem& system, const Vector& coefficients) {
  if (coefficients.size() != system.size()) throw InputError("downscale: DOF count mismatch");
  return GridFunction(system.num_fine_cells, system.expansion * coefficients);
}

void write_coarse_csv(std::ostream& out, const GridPair& grid, const AuxiliaryBasisSet& aux,
                      const std::vector<CoarseSolution>& solutions, bool with_time) {
  out << "continuum,block_row,block_col,sub_region,coefficient" << (with_time ? ",time" : "") << '\n';
  char buf[64];
  for (const auto& sol : solutions) {
    for (int a = 0; a < aux.size(); ++a) {
      const AuxDof& d = aux[a];
      std::snprintf(buf, sizeof buf, "%.17g", sol.coefficients[a]);
      out << d.continuum + 1 << ',' << d.block / grid.n_coarse() << ',' << d.block % grid.n_coarse()
          << ',' << d.label + 1 << ',' << buf;
      if (with_time) {
        std::snprintf(buf, sizeof buf, "%.17g", sol.time);
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

}  // namespace nlmc
