#pragma once

// Independent oracles shared by the unit and acceptance tests. None of these
// go through the library's assembly or solver paths.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlmc/basis.hpp"
#include "nlmc/finescale.hpp"
#include "nlmc/grid.hpp"
#include "nlmc/media.hpp"

namespace nlmc::test {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("nlmc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Lognormal-ish random media with kappa in [1, contrast], values per cell.
inline MediaField random_media(const GridPair& grid, std::uint64_t seed, double contrast = 100.0,
                               double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MediaField f = uniform_media(grid, 1.0, sigma, 1.0);
  for (int k = 0; k < grid.num_fine(); ++k) {
    f.kappa1[k] = std::pow(contrast, u(rng));
    f.kappa2[k] = std::pow(contrast, u(rng));
    f.sigma[k] = sigma * (0.5 + u(rng));
    f.c1[k] = 0.5 + u(rng);
    f.c2[k] = 0.5 + u(rng);
  }
  return f;
}

/// Cell-by-cell TPFA assembly of a_Q over a region: every cell looks at its four
/// neighbours; a neighbour outside the region is a Dirichlet face at h/2.
inline Eigen::MatrixXd brute_force_aQ(const GridPair& grid, const MediaField& field,
                                      const OversampleRegion& region) {
  const int rows = region.fine_rows();
  const int cols = region.fine_cols();
  const int n = rows * cols;
  const double h2 = grid.fine_area();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < 2; ++i) {
    const auto& kappa = field.kappa(i);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const int local = r * cols + c;
        const int global = grid.fine_index(region.fine_row_begin + r, region.fine_col_begin + c);
        const double k0 = kappa[global];
        const int dr[4] = {-1, 1, 0, 0};
        const int dc[4] = {0, 0, -1, 1};
        for (int d = 0; d < 4; ++d) {
          const int nr = r + dr[d];
          const int nc = c + dc[d];
          if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) {
            a(i * n + local, i * n + local) += 2.0 * k0;
            continue;
          }
          const int nglobal = grid.fine_index(region.fine_row_begin + nr, region.fine_col_begin + nc);
          const double k1 = kappa[nglobal];
          const double t = 1.0 / (0.5 / k0 + 0.5 / k1);
          a(i * n + local, i * n + local) += t;
          a(i * n + local, i * n + nr * cols + nc) -= t;
        }
      }
    }
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int local = r * cols + c;
      const int global = grid.fine_index(region.fine_row_begin + r, region.fine_col_begin + c);
      const double s = field.sigma[global] * h2;
      a(local, local) += s;
      a(n + local, n + local) += s;
      a(local, n + local) -= s;
      a(n + local, local) -= s;
    }
  }
  return a;
}

/// Dense solve of the full KKT system by LU with full pivoting.
struct DenseKkt {
  Eigen::VectorXd primal;
  Eigen::VectorXd dual;
};

inline DenseKkt dense_kkt_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
  const auto n = a.rows();
  const auto m = b.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + m, n + m);
  k.topLeftCorner(n, n) = a;
  k.topRightCorner(n, m) = b.transpose();
  k.bottomLeftCorner(m, n) = b;
  Eigen::VectorXd rhs(n + m);
  rhs << f, g;
  const Eigen::VectorXd z = k.fullPivLu().solve(rhs);
  return {z.head(n), z.tail(m)};
}

/// Constraint matrix built directly from the partition labels.
inline Eigen::MatrixXd brute_force_constraints(const GridPair& grid, const ContinuumPartition& part,
                                               const OversampleRegion& region,
                                               std::vector<std::array<int, 3>>* ids = nullptr) {
  const int n = region.num_fine();
  std::vector<Eigen::VectorXd> rows;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < grid.num_coarse(); ++j) {
      if (!region.contains_coarse(j / grid.n_coarse(), j % grid.n_coarse())) continue;
      for (int l = 0; l < part.counts[i][j]; ++l) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * n);
        int count = 0;
        for (int k = 0; k < grid.num_fine(); ++k) {
          if (grid.coarse_of_fine(k) == j && part.labels[i][k] == l) ++count;
        }
        for (int k = 0; k < grid.num_fine(); ++k) {
          if (grid.coarse_of_fine(k) == j && part.labels[i][k] == l) {
            row[i * n + region.local_of(grid, k)] = 1.0 / count;
          }
        }
        rows.push_back(row);
        if (ids) ids->push_back({i, j, l});
      }
    }
  }
  Eigen::MatrixXd b(static_cast<Eigen::Index>(rows.size()), 2 * n);
  for (std::size_t r = 0; r < rows.size(); ++r) b.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  return b;
}

/// Union-find component count of cells with value >= cut inside one block.
inline int union_find_components(const std::vector<double>& values, int n, int r0, int c0, int size,
                                 double cut) {
  std::vector<int> parent(static_cast<std::size_t>(size) * size);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto high = [&](int r, int c) { return values[static_cast<std::size_t>(r0 + r) * n + c0 + c] >= cut; };
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      if (!high(r, c)) continue;
      if (c + 1 < size && high(r, c + 1)) parent[find(r * size + c)] = find(r * size + c + 1);
      if (r + 1 < size && high(r + 1, c)) parent[find(r * size + c)] = find((r + 1) * size + c);
    }
  }
  int components = 0;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      if (high(r, c) && find(r * size + c) == r * size + c) ++components;
    }
  }
  return components;
}

}  // namespace nlmc::test
