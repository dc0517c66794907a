#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "nlmc/coarse.hpp"
#include "nlmc/errors.hpp"
#include "nlmc/metrics.hpp"
#include "test_support.hpp"

using namespace nlmc;

namespace {

struct Instance {
  GridPair grid;
  MediaField field;
  AuxiliaryBasisSet aux;
  std::vector<MultiscaleBasis> bases;
  CoarseSystem system;
};

Instance make_instance(MediaField field, const GridPair& g, PartitionMode mode, int layers) {
  const auto part = partition_continua(g, field, mode);
  AuxiliaryBasisSet aux = build_auxiliary(g, part);
  auto bases = layers < 0 ? build_all_global_bases(g, field, aux) : build_all_ms_bases(g, field, aux, layers);
  CoarseSystem sys = assemble_coarse(g, field, aux, bases);
  return {g, std::move(field), std::move(aux), std::move(bases), std::move(sys)};
}

Instance channel_instance(int n_coarse, int refine, int layers, std::uint64_t seed = 41) {
  const GridPair g = build_grid(n_coarse, refine);
  return make_instance(generate_channelized(g, 1e4, seed), g, PartitionMode::Channelized, layers);
}

GridFunction smooth_source(const GridPair& g) {
  GridFunction f(g.num_fine());
  for (int k = 0; k < g.num_fine(); ++k) {
    const auto [x, y] = g.fine_center(k);
    f.at(0, k) = 1.0 + x;
    f.at(1, k) = std::sin(3.0 * x) * y;
  }
  return f;
}

bool regions_share_or_touch(const OversampleRegion& a, const OversampleRegion& b) {
  const bool rows = a.fine_row_begin <= b.fine_row_end && b.fine_row_begin <= a.fine_row_end;
  const bool cols = a.fine_col_begin <= b.fine_col_end && b.fine_col_begin <= a.fine_col_end;
  const bool corner_only = (a.fine_row_begin == b.fine_row_end || b.fine_row_begin == a.fine_row_end) &&
                           (a.fine_col_begin == b.fine_col_end || b.fine_col_begin == a.fine_col_end);
  return rows && cols && !corner_only;
}

}  // namespace

TEST_CASE("coarse matrices") {
  SUBCASE("sigma = 0 gives an exactly symmetric continuum-block matrix") {
    const GridPair g = build_grid(4, 4);
    const auto inst = make_instance(uniform_media(g, 1.0, 0.0, 1.0), g, PartitionMode::Single, 1);
    const Eigen::MatrixXd a(inst.system.stiffness);
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.topRightCorner(16, 16).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.bottomLeftCorner(16, 16).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.topLeftCorner(16, 16) - a.bottomRightCorner(16, 16)).cwiseAbs().maxCoeff() <= 1e-10 * a.norm());
  }

  SUBCASE("global bases: stiffness equals the negated transfer matrix") {
    const auto inst = channel_instance(4, 8, -1);
    const Eigen::MatrixXd a(inst.system.stiffness);
    const double scale = a.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (int alpha = 0; alpha < inst.aux.size(); ++alpha) {
      for (int beta = 0; beta < inst.aux.size(); ++beta) {
        worst = std::max(worst, std::abs(a(alpha, beta) + inst.bases[beta].transfer_to(alpha)));
      }
    }
    CHECK(worst <= 1e-8 * scale);
  }

  SUBCASE("matches a dense Galerkin product; SPD; sparsity") {
    const auto inst = channel_instance(4, 8, 1);
    const auto& g = inst.grid;
    const Eigen::MatrixXd a_fine = test::brute_force_aQ(g, inst.field, whole_domain(g));
    Eigen::MatrixXd psi(a_fine.rows(), inst.aux.size());
    for (int k = 0; k < inst.aux.size(); ++k) psi.col(k) = zero_extend(g, inst.bases[k]);
    const Eigen::MatrixXd oracle = psi.transpose() * a_fine * psi;
    const Eigen::MatrixXd a(inst.system.stiffness);
    CHECK((a - oracle).cwiseAbs().maxCoeff() <= 1e-10 * oracle.cwiseAbs().maxCoeff());

    CHECK(Eigen::LLT<Eigen::MatrixXd>(a).info() == Eigen::Success);
    const Eigen::MatrixXd m(inst.system.mass);
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
    MESSAGE("smallest Galerkin mass eigenvalue " << min_eig);
    CHECK(min_eig > 0.0);

    int zero_pairs = 0;
    for (int alpha = 0; alpha < inst.aux.size(); ++alpha) {
      for (int beta = 0; beta < inst.aux.size(); ++beta) {
        if (regions_share_or_touch(*inst.bases[alpha].region, *inst.bases[beta].region)) continue;
        ++zero_pairs;
        CHECK(a(alpha, beta) == 0.0);
      }
    }
    CHECK(zero_pairs > 0);
  }

  SUBCASE("lumped mass is the sub-region compressibility integral") {
    const auto inst = channel_instance(4, 4, 1);
    for (int alpha = 0; alpha < inst.aux.size(); ++alpha) {
      const AuxDof& d = inst.aux[alpha];
      double sum = 0.0;
      for (const int k : d.fine_cells) sum += inst.field.compressibility(d.continuum)[k] * inst.grid.fine_area();
      CHECK(inst.system.lumped_mass.coeff(alpha, alpha) == doctest::Approx(sum).epsilon(1e-14));
    }
  }

  SUBCASE("incomplete basis collections are rejected") {
    const auto inst = channel_instance(2, 4, 0);
    auto partial = inst.bases;
    partial.pop_back();
    CHECK_THROWS_AS(assemble_coarse(inst.grid, inst.field, inst.aux, partial), InputError);
  }
}

TEST_CASE("static coarse solve") {
  SUBCASE("zero source") {
    const auto inst = channel_instance(4, 4, 1);
    const auto u = solve_coarse_static(inst.grid, inst.system, GridFunction(inst.grid.num_fine()));
    CHECK(u.coefficients.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("single block with decoupled continua") {
    const GridPair g = build_grid(1, 8);
    const auto inst = make_instance(uniform_media(g, 1.0, 0.0, 1.0), g, PartitionMode::Single, 0);
    const auto u = solve_coarse_static(g, inst.system, GridFunction::constant(g.num_fine(), 1.0, 0.0));
    REQUIRE(u.coefficients.size() == 2);
    CHECK(u.coefficients[0] > 0.0);
    CHECK(u.coefficients[1] == 0.0);
  }

  const auto inst = channel_instance(4, 8, 2);
  const auto& g = inst.grid;
  const GridFunction f = smooth_source(g);
  SolveInfo info;
  const auto u = solve_coarse_static(g, inst.system, f, {}, &info);
  CHECK(info.relative_residual <= 1e-10);
  const GridFunction p_ms = downscale(inst.system, u.coefficients);

  SUBCASE("coefficients are the constrained pairings") {
    const auto pairings = project_pi(g, inst.aux, p_ms).coefficients;
    CHECK((pairings - u.coefficients).cwiseAbs().maxCoeff() <= 1e-8 * u.coefficients.cwiseAbs().maxCoeff());
  }

  SUBCASE("Galerkin orthogonality") {
    const SparseMatrix a = assemble_aQ(g, inst.field);
    const Vector lhs = inst.system.expansion.transpose() * (a * p_ms.values());
    const Vector rhs = inst.system.rhs(g, f);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-8 * rhs.cwiseAbs().maxCoeff());
  }

  SUBCASE("energy bound and dense oracle") {
    const auto p_f = solve_static_fine(g, inst.field, f);
    const SparseMatrix a = assemble_aQ(g, inst.field);
    CHECK(energy(a, p_ms.values()) <= energy(a, p_f.values()) * (1.0 + 1e-6));
    const Eigen::MatrixXd dense(inst.system.stiffness);
    const Vector oracle = dense.ldlt().solve(inst.system.rhs(g, f));
    CHECK((u.coefficients - oracle).norm() <= 1e-8 * oracle.norm());
  }
}

TEST_CASE("transient coarse solve") {
  const auto inst = channel_instance(4, 4, 2);
  const auto& g = inst.grid;
  const Vector zero = Vector::Zero(inst.system.size());

  SUBCASE("zero data") {
    const auto series = solve_coarse_transient(
        g, inst.system, [&](double) { return GridFunction(g.num_fine()); }, zero, 0.5, 2.0);
    REQUIRE(series.size() == 5);
    CHECK(series.back().time == 2.0);
    for (const auto& s : series) CHECK(s.coefficients.cwiseAbs().maxCoeff() == 0.0);
  }

  const GridFunction f = smooth_source(g);
  const auto constant = [&](double) { return f; };

  SUBCASE("long-time limit is the static solution") {
    const Vector steady = solve_coarse_static(g, inst.system, f).coefficients;
    double previous = 1e300;
    for (const double horizon : {0.25, 0.5, 1.0}) {
      const auto series = solve_coarse_transient(g, inst.system, constant, zero, 0.25, horizon);
      const double gap = (series.back().coefficients - steady).norm();
      CHECK(gap < previous);
      previous = gap;
    }
    for (const MassKind mass : {MassKind::Galerkin, MassKind::Lumped}) {
      const auto series = solve_coarse_transient(g, inst.system, constant, zero, 0.25, 50.0, mass);
      CHECK((series.back().coefficients - steady).norm() <= 1e-8 * steady.norm());
    }
  }

  SUBCASE("backward Euler is first order in time") {
    const auto ramp = [&](double t) {
      GridFunction s = f;
      s.values() *= std::cos(4.0 * t);
      return s;
    };
    std::vector<Vector> finals;
    for (const double dt : {0.02, 0.01, 0.005, 0.0025}) {
      finals.push_back(solve_coarse_transient(g, inst.system, ramp, zero, dt, 0.2).back().coefficients);
    }
    const double r1 = (finals[0] - finals[1]).norm() / (finals[1] - finals[2]).norm();
    const double r2 = (finals[1] - finals[2]).norm() / (finals[2] - finals[3]).norm();
    MESSAGE("step-halving ratios " << r1 << " " << r2);
    CHECK(r2 == doctest::Approx(2.0).epsilon(0.15));
  }

  CHECK_THROWS_AS(solve_coarse_transient(g, inst.system, constant, Vector::Zero(3), 0.5, 1.0), InputError);
  CHECK_THROWS_AS(solve_coarse_transient(g, inst.system, constant, zero, 0.3, 1.0), InputError);
}

TEST_CASE("downscaling") {
  const GridPair g = build_grid(4, 4);
  const auto inst = make_instance(test::random_media(g, 43, 1e3), g, PartitionMode::Single, 1);
  for (const int alpha : {0, 9, 31}) {
    Vector e = Vector::Zero(inst.system.size());
    e[alpha] = 1.0;
    CHECK(downscale(inst.system, e).values() == zero_extend(g, inst.bases[alpha]));
  }
  const Vector u = Vector::LinSpaced(inst.system.size(), -1.0, 2.0);
  const Vector v = Vector::LinSpaced(inst.system.size(), 3.0, 0.5);
  const Vector lin = downscale(inst.system, u + v).values() - downscale(inst.system, u).values() -
                     downscale(inst.system, v).values();
  CHECK(lin.cwiseAbs().maxCoeff() <= 1e-13);

  const auto sol = solve_coarse_static(g, inst.system, smooth_source(g));
  const auto avg = coarse_average(g, downscale(inst.system, sol.coefficients));
  for (int alpha = 0; alpha < inst.aux.size(); ++alpha) {
    const AuxDof& d = inst.aux[alpha];
    CHECK(avg.values[d.continuum][d.block] ==
          doctest::Approx(sol.coefficients[alpha]).epsilon(1e-8).scale(sol.coefficients.cwiseAbs().maxCoeff()));
  }
  CHECK_THROWS_AS(downscale(inst.system, Vector::Zero(2)), InputError);
}

TEST_CASE("coarse CSV") {
  const GridPair g = build_grid(2, 2);
  const auto part = partition_continua(g, uniform_media(g), PartitionMode::Single);
  const auto aux = build_auxiliary(g, part);
  Vector c = Vector::LinSpaced(8, 0.0, 7.0);
  c[3] = 0.1;
  std::ostringstream plain, timed;
  write_coarse_csv(plain, g, aux, {{c, 0.0}}, false);
  write_coarse_csv(timed, g, aux, {{c, 0.0}, {c * 2.0, 0.25}}, true);
  std::istringstream lines(plain.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "continuum,block_row,block_col,sub_region,coefficient");
  std::getline(lines, line);
  CHECK(line == "1,0,0,1,0");
  for (int k = 0; k < 3; ++k) std::getline(lines, line);
  CHECK(line == "1,1,1,1,0.10000000000000001");
  std::getline(lines, line);
  CHECK(line == "2,0,0,1,4");
  const std::string t = timed.str();
  CHECK(t.rfind("continuum,block_row,block_col,sub_region,coefficient,time\n", 0) == 0);
  CHECK(t.find("2,1,1,1,14,0.25\n") != std::string::npos);
  CHECK(std::count(t.begin(), t.end(), '\n') == 17);
}
