#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace diracwalk {

inline constexpr int kMinDim = 1;
inline constexpr int kMaxDim = 6;

/// Hard cap on the number of sites a lattice may hold. Keeps side^d from
/// exhausting memory when sweeping dimensions.
inline constexpr std::int64_t kMaxSites = std::int64_t{1} << 28;

/// Periodic cubic lattice: d axes, `side` sites per axis, side^d sites total.
/// Sites are indexed row-major over axis coordinates (last axis fastest).
struct LatticeConfig {
  int d = 0;
  int side = 0;
  std::int64_t n_sites = 0;
};

/// One point of the discrete momentum grid: integer indices m and the
/// momentum components k_j = 2*pi*m_j / side.
struct MomentumVector {
  std::vector<int> m;
  std::vector<double> k;
};

inline LatticeConfig build_lattice(int d, int side) {
  if (d < kMinDim || d > kMaxDim)
    throw std::invalid_argument("build_lattice: dimension must be in [1, 6], got " +
                                std::to_string(d));
  if (side < 2)
    throw std::invalid_argument("build_lattice: side must be >= 2, got " + std::to_string(side));
  std::int64_t n = 1;
  for (int j = 0; j < d; ++j) {
    if (n > kMaxSites / side)
      throw std::invalid_argument("build_lattice: side^d exceeds the site cap");
    n *= side;
  }
  return LatticeConfig{d, side, n};
}

/// Axis coordinates of a site index (row-major, last axis fastest).
inline std::array<int, kMaxDim> site_coords(const LatticeConfig& cfg, std::int64_t x) {
  if (x < 0 || x >= cfg.n_sites) throw std::out_of_range("site_coords: site index out of range");
  std::array<int, kMaxDim> c{};
  for (int j = cfg.d - 1; j >= 0; --j) {
    c[static_cast<std::size_t>(j)] = static_cast<int>(x % cfg.side);
    x /= cfg.side;
  }
  return c;
}

/// Inverse of site_coords. Coordinates are taken modulo side.
inline std::int64_t site_index(const LatticeConfig& cfg, const std::array<int, kMaxDim>& c) {
  std::int64_t x = 0;
  for (int j = 0; j < cfg.d; ++j) {
    int cj = c[static_cast<std::size_t>(j)] % cfg.side;
    if (cj < 0) cj += cfg.side;
    x = x * cfg.side + cj;
  }
  return x;
}

struct AxisNeighbors {
  int axis;
  std::int64_t plus;   // index of x + e_axis (periodic wrap)
  std::int64_t minus;  // index of x - e_axis
};

inline std::vector<AxisNeighbors> neighbors(const LatticeConfig& cfg, std::int64_t x) {
  if (x < 0 || x >= cfg.n_sites) throw std::out_of_range("neighbors: site index out of range");
  std::vector<AxisNeighbors> out;
  out.reserve(static_cast<std::size_t>(cfg.d));
  auto c = site_coords(cfg, x);
  // stride of axis j is side^(d-1-j)
  std::int64_t stride = 1;
  std::array<std::int64_t, kMaxDim> strides{};
  for (int j = cfg.d - 1; j >= 0; --j) {
    strides[static_cast<std::size_t>(j)] = stride;
    stride *= cfg.side;
  }
  for (int j = 0; j < cfg.d; ++j) {
    const int cj = c[static_cast<std::size_t>(j)];
    const std::int64_t s = strides[static_cast<std::size_t>(j)];
    const std::int64_t plus = (cj + 1 == cfg.side) ? x - s * (cfg.side - 1) : x + s;
    const std::int64_t minus = (cj == 0) ? x + s * (cfg.side - 1) : x - s;
    out.push_back({j, plus, minus});
  }
  return out;
}

/// Flat neighbor table: entry [x*2d + 2j] is the plus neighbor of x along
/// axis j, [x*2d + 2j + 1] the minus neighbor. Built once per lattice for
/// stencil-heavy loops.
inline std::vector<std::int64_t> build_neighbor_table(const LatticeConfig& cfg) {
  std::vector<std::int64_t> table(static_cast<std::size_t>(cfg.n_sites) * 2 *
                                  static_cast<std::size_t>(cfg.d));
  for (std::int64_t x = 0; x < cfg.n_sites; ++x) {
    const auto nb = neighbors(cfg, x);
    for (int j = 0; j < cfg.d; ++j) {
      table[static_cast<std::size_t>(x) * 2 * cfg.d + 2 * static_cast<std::size_t>(j)] =
          nb[static_cast<std::size_t>(j)].plus;
      table[static_cast<std::size_t>(x) * 2 * cfg.d + 2 * static_cast<std::size_t>(j) + 1] =
          nb[static_cast<std::size_t>(j)].minus;
    }
  }
  return table;
}

/// Grid indices for one axis, zero first. For odd side these are
/// 0, +1, -1, ..., +(side-1)/2, -(side-1)/2; for even side the unpaired
/// +side/2 mode is appended.
inline std::vector<int> axis_momentum_indices(int side) {
  std::vector<int> ms;
  ms.reserve(static_cast<std::size_t>(side));
  ms.push_back(0);
  for (int m = 1; m <= (side - 1) / 2; ++m) {
    ms.push_back(m);
    ms.push_back(-m);
  }
  if (side % 2 == 0) ms.push_back(side / 2);
  return ms;
}

/// The full discrete momentum grid, exactly n_sites vectors, k = 0 first.
inline std::vector<MomentumVector> momentum_grid(const LatticeConfig& cfg) {
  const auto axis = axis_momentum_indices(cfg.side);
  std::vector<MomentumVector> grid;
  grid.reserve(static_cast<std::size_t>(cfg.n_sites));
  std::vector<std::size_t> digit(static_cast<std::size_t>(cfg.d), 0);
  const double step = 2.0 * std::numbers::pi / cfg.side;
  for (std::int64_t i = 0; i < cfg.n_sites; ++i) {
    MomentumVector mv;
    mv.m.resize(static_cast<std::size_t>(cfg.d));
    mv.k.resize(static_cast<std::size_t>(cfg.d));
    for (int j = 0; j < cfg.d; ++j) {
      mv.m[static_cast<std::size_t>(j)] = axis[digit[static_cast<std::size_t>(j)]];
      mv.k[static_cast<std::size_t>(j)] = step * mv.m[static_cast<std::size_t>(j)];
    }
    grid.push_back(std::move(mv));
    // odometer, last axis fastest (matches site indexing order)
    for (int j = cfg.d - 1; j >= 0; --j) {
      auto& dj = digit[static_cast<std::size_t>(j)];
      if (++dj < axis.size()) break;
      dj = 0;
    }
  }
  return grid;
}

}  // namespace diracwalk
