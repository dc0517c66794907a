#include <doctest.h>

#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "nlmc/errors.hpp"
#include "nlmc/grid.hpp"

using namespace nlmc;

namespace {

std::string percent2(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", ratio * 100.0);
  return buf;
}

int interior(const GridPair& g) { return g.coarse_index(g.n_coarse() / 2, g.n_coarse() / 2); }

}  // namespace

TEST_CASE("build_grid sizes and nesting") {
  const GridPair unit = build_grid(1, 1);
  CHECK(unit.n_fine() == 1);
  CHECK(unit.coarse_size() == 1.0);
  CHECK(unit.fine_size() == 1.0);

  const GridPair g = build_grid(64, 4);
  CHECK(g.n_fine() == 256);
  CHECK(g.coarse_size() == 1.0 / 64);
  CHECK(g.fine_size() == 1.0 / 256);

  const GridPair g2 = build_grid(8, 32);
  CHECK(g2.coarse_of_fine(g2.fine_index(0, 31)) == 0);
  CHECK(g2.coarse_of_fine(g2.fine_index(0, 32)) == 1);
  CHECK(g2.coarse_of_fine(g2.fine_index(32, 0)) == 8);

  CHECK_THROWS_AS(build_grid(0, 4), InputError);
  CHECK_THROWS_AS(build_grid(4, -1), InputError);
}

TEST_CASE("fine-to-coarse map partitions the fine cells") {
  const GridPair g = build_grid(5, 3);
  std::vector<int> seen(static_cast<std::size_t>(g.num_fine()), 0);
  for (int j = 0; j < g.num_coarse(); ++j) {
    for (const int k : g.fine_cells_of(j)) {
      CHECK(g.coarse_of_fine(k) == j);
      ++seen[k];
    }
  }
  for (const int s : seen) CHECK(s == 1);
}

TEST_CASE("oversample regions") {
  SUBCASE("interior blocks give (2m+1)^2 cells and the tabulated area ratios") {
    const GridPair g32 = build_grid(32, 1);
    const auto r = oversample(g32, interior(g32), 6);
    CHECK(r.cells.size() == 13u * 13u);
    CHECK(percent2(r.area_ratio) == "16.50");

    const GridPair g64 = build_grid(64, 1);
    const auto r64 = oversample(g64, interior(g64), 8);
    CHECK(r64.cells.size() == 17u * 17u);
    CHECK(percent2(r64.area_ratio) == "7.06");

    const char* table2[] = {"4.79", "7.91", "11.82", "16.50"};
    for (int m = 3; m <= 6; ++m) {
      const auto region = oversample(g32, interior(g32), m);
      CHECK(region.area_ratio == (2.0 * m + 1) * (2.0 * m + 1) / 1024.0);
      CHECK(percent2(region.area_ratio) == table2[m - 3]);
    }
    const std::pair<int, const char*> table3[] = {{2, "0.61"}, {4, "1.98"}, {6, "4.13"}, {7, "5.49"}, {8, "7.06"}};
    for (const auto& [m, text] : table3) CHECK(percent2(oversample(g64, interior(g64), m).area_ratio) == text);
  }

  SUBCASE("boundary clipping and m = 0") {
    const GridPair g = build_grid(6, 2);
    const auto corner = oversample(g, 0, 1);
    CHECK(corner.cells == std::vector<int>{0, 1, 6, 7});
    CHECK(corner.fine_rows() == 4);
    CHECK(corner.fine_cols() == 4);
    CHECK(oversample(g, 14, 0).cells == std::vector<int>{14});
    CHECK(oversample(g, 14, 0).fine_cells == g.fine_cells_of(14));
    CHECK_THROWS_AS(oversample(g, 36, 1), InputError);
    CHECK_THROWS_AS(oversample(g, -1, 1), InputError);
  }

  SUBCASE("regions are monotone in m") {
    const GridPair g = build_grid(9, 2);
    std::mt19937 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      const int j = static_cast<int>(rng() % g.num_coarse());
      const int m = static_cast<int>(rng() % 6);
      const auto small = oversample(g, j, m);
      const auto big = oversample(g, j, m + 1);
      const std::set<int> outer(big.fine_cells.begin(), big.fine_cells.end());
      for (const int k : small.fine_cells) CHECK(outer.count(k) == 1);
      if (m >= 9) CHECK(small.cells.size() == 81u);
    }
  }

  SUBCASE("local indices") {
    const GridPair g = build_grid(4, 3);
    const auto r = oversample(g, g.coarse_index(1, 2), 1);
    for (int local = 0; local < r.num_fine(); ++local) CHECK(r.local_of(g, r.fine_cells[local]) == local);
    CHECK(r.local_of(g, g.fine_index(0, 0)) == -1);
    const auto all = whole_domain(g);
    CHECK(all.num_fine() == g.num_fine());
    CHECK(all.area_ratio == 1.0);
  }
}

TEST_CASE("face_list counts") {
  const auto one = face_list(1, 1);
  CHECK(one.interior.empty());
  CHECK(one.boundary.size() == 4);

  const auto strip = face_list(1, 2);
  CHECK(strip.interior.size() == 1);
  CHECK(strip.boundary.size() == 6);

  // Brute force: every (cell, neighbour) pair inside the block, each face seen twice.
  const int n = 256;
  long pairs = 0;
  long outward = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int nbr[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& [nr, nc] : nbr) {
        if (nr >= 0 && nr < n && nc >= 0 && nc < n) {
          ++pairs;
        } else {
          ++outward;
        }
      }
    }
  }
  const auto big = face_list(n, n);
  CHECK(static_cast<long>(big.interior.size()) == pairs / 2);
  CHECK(big.interior.size() == 2u * 256u * 255u);
  CHECK(static_cast<long>(big.boundary.size()) == outward);
}

TEST_CASE("region text dump") {
  const GridPair g = build_grid(3, 1);
  std::ostringstream out;
  write_region(out, oversample(g, 0, 1));
  CHECK(out.str() == "center 0 layers 1 coarse 4 fine 4\n0 1 3 4\n0 1 3 4\n");
}
