#include "diracwalk/lattice.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <complex>
#include <set>

using namespace diracwalk;

TEST(Lattice, BuildBasics) {
  EXPECT_EQ(build_lattice(2, 4).n_sites, 16);
  EXPECT_EQ(build_lattice(3, 10).n_sites, 1000);
  EXPECT_EQ(build_lattice(6, 3).n_sites, 729);
}

TEST(Lattice, BuildRejectsBadInput) {
  EXPECT_THROW(build_lattice(2, 1), std::invalid_argument);
  EXPECT_THROW(build_lattice(0, 4), std::invalid_argument);
  EXPECT_THROW(build_lattice(7, 4), std::invalid_argument);
  // 1024^6 would overflow the site cap long before int64
  EXPECT_THROW(build_lattice(6, 1024), std::invalid_argument);
}

TEST(Lattice, AxisMomentumOrder) {
  EXPECT_EQ(axis_momentum_indices(5), (std::vector<int>{0, 1, -1, 2, -2}));
  EXPECT_EQ(axis_momentum_indices(4), (std::vector<int>{0, 1, -1, 2}));
  EXPECT_EQ(axis_momentum_indices(2), (std::vector<int>{0, 1}));
}

TEST(Lattice, MomentumGridProductForm) {
  const auto cfg = build_lattice(2, 3);
  const auto grid = momentum_grid(cfg);
  ASSERT_EQ(grid.size(), 9u);
  for (const auto& mv : grid) {
    for (int mj : mv.m) EXPECT_LE(std::abs(mj), 1);
  }
  EXPECT_EQ(grid[0].m, (std::vector<int>{0, 0}));
}

TEST(Lattice, MomentumGridCompleteness) {
  for (int d = 1; d <= 3; ++d) {
    for (int side = 2; side <= 8; ++side) {
      const auto cfg = build_lattice(d, side);
      const auto grid = momentum_grid(cfg);
      ASSERT_EQ(static_cast<std::int64_t>(grid.size()), cfg.n_sites);
      std::set<std::vector<int>> seen;
      for (const auto& mv : grid) seen.insert(mv.m);
      EXPECT_EQ(static_cast<std::int64_t>(seen.size()), cfg.n_sites)
          << "duplicates at d=" << d << " side=" << side;
      for (int m : grid[0].m) EXPECT_EQ(m, 0);
    }
  }
}

TEST(Lattice, NeighborsWrap) {
  const auto cfg1 = build_lattice(1, 4);
  const auto nb = neighbors(cfg1, 0);
  ASSERT_EQ(nb.size(), 1u);
  EXPECT_EQ(nb[0].plus, 1);
  EXPECT_EQ(nb[0].minus, 3);

  const auto cfg2 = build_lattice(1, 2);
  const auto nb2 = neighbors(cfg2, 0);
  EXPECT_EQ(nb2[0].plus, 1);
  EXPECT_EQ(nb2[0].minus, 1);

  const auto cfg3 = build_lattice(2, 3);
  const auto nb3 = neighbors(cfg3, 4);  // center site of a 3x3 grid
  std::set<std::int64_t> distinct;
  for (const auto& a : nb3) {
    distinct.insert(a.plus);
    distinct.insert(a.minus);
  }
  EXPECT_EQ(distinct.size(), 4u);

  EXPECT_THROW(neighbors(cfg3, 9), std::out_of_range);
  EXPECT_THROW(neighbors(cfg3, -1), std::out_of_range);
}

TEST(Lattice, NeighborSymmetry) {
  for (const auto& cfg : {build_lattice(2, 4), build_lattice(3, 3)}) {
    for (std::int64_t x = 0; x < cfg.n_sites; ++x) {
      for (const auto& a : neighbors(cfg, x)) {
        EXPECT_EQ(neighbors(cfg, a.plus)[static_cast<std::size_t>(a.axis)].minus, x);
        EXPECT_EQ(neighbors(cfg, a.minus)[static_cast<std::size_t>(a.axis)].plus, x);
      }
    }
  }
}

TEST(Lattice, SiteIndexRoundTrip) {
  const auto cfg = build_lattice(3, 5);
  for (std::int64_t x = 0; x < cfg.n_sites; ++x)
    EXPECT_EQ(site_index(cfg, site_coords(cfg, x)), x);
  // row-major: last axis fastest
  EXPECT_EQ(site_index(cfg, {0, 0, 1, 0, 0, 0}), 1);
  EXPECT_EQ(site_index(cfg, {0, 1, 0, 0, 0, 0}), 5);
  EXPECT_EQ(site_index(cfg, {1, 0, 0, 0, 0, 0}), 25);
}

TEST(Lattice, PlaneWaveOrthonormality) {
  // the plane waves (1/sqrt(N)) e^{i k.x} over the grid form an orthonormal
  // family; check the Gram matrix against the identity
  for (const auto& cfg : {build_lattice(2, 4), build_lattice(1, 16), build_lattice(2, 16)}) {
    const auto grid = momentum_grid(cfg);
    const auto n = static_cast<Eigen::Index>(cfg.n_sites);
    Eigen::MatrixXcd waves(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (std::int64_t x = 0; x < cfg.n_sites; ++x) {
        const auto cxy = site_coords(cfg, x);
        double phase = 0.0;
        for (int j = 0; j < cfg.d; ++j)
          phase += grid[static_cast<std::size_t>(a)].k[static_cast<std::size_t>(j)] *
                   cxy[static_cast<std::size_t>(j)];
        waves(static_cast<Eigen::Index>(x), a) =
            std::exp(std::complex<double>(0.0, phase)) / std::sqrt(static_cast<double>(n));
      }
    }
    const Eigen::MatrixXcd gram = waves.adjoint() * waves;
    EXPECT_LT((gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Lattice, NeighborTableMatchesNeighbors) {
  const auto cfg = build_lattice(2, 4);
  const auto table = build_neighbor_table(cfg);
  for (std::int64_t x = 0; x < cfg.n_sites; ++x) {
    const auto nb = neighbors(cfg, x);
    for (int j = 0; j < cfg.d; ++j) {
      EXPECT_EQ(table[static_cast<std::size_t>(x * 2 * cfg.d + 2 * j)],
                nb[static_cast<std::size_t>(j)].plus);
      EXPECT_EQ(table[static_cast<std::size_t>(x * 2 * cfg.d + 2 * j + 1)],
                nb[static_cast<std::size_t>(j)].minus);
    }
  }
}
