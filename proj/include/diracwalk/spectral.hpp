#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "diracwalk/lattice.hpp"

namespace diracwalk {

/// Couplings of the free Hamiltonian: omega multiplies the hopping term,
/// gamma the Laplacian term.
struct DispersionParams {
  double omega = 0.0;
  double gamma = 0.0;
};

inline void validate_params(const DispersionParams& p) {
  if (!(p.omega >= 0.0) || !(p.gamma >= 0.0))
    throw std::invalid_argument("DispersionParams: omega and gamma must be >= 0");
  if (p.omega == 0.0 && p.gamma == 0.0)
    throw std::invalid_argument("DispersionParams: omega and gamma cannot both vanish");
}

/// s^2(k) = sum_j sin^2 k_j
inline double s2(std::span<const double> k) {
  double v = 0.0;
  for (double kj : k) v += std::sin(kj) * std::sin(kj);
  return v;
}

/// c(k) = 2 sum_j (1 - cos k_j)
inline double c(std::span<const double> k) {
  double v = 0.0;
  for (double kj : k) v += 1.0 - std::cos(kj);
  return 2.0 * v;
}

/// Nonnegative dispersion branch E(k) = sqrt(omega^2 s^2(k) + gamma^2 c(k)^2).
inline double dispersion(std::span<const double> k, const DispersionParams& p) {
  validate_params(p);
  const double ss = s2(k), cc = c(k);
  return std::sqrt(p.omega * p.omega * ss + p.gamma * p.gamma * cc * cc);
}

/// The spectral sums at probe energy E (k = 0 excluded):
///   U(E)  = (1/N) sum gamma c(k) / (E(k)^2 - E^2)
///   V(E)  = (1/N) sum          1 / (E(k)^2 - E^2)
///   U'(E) = (1/N) sum 2 E gamma c(k) / (E(k)^2 - E^2)^2
///   V'(E) = (1/N) sum 2 E            / (E(k)^2 - E^2)^2
/// together with the spectral gap min_{k != 0} E(k).
struct SpectralSums {
  double E = 0.0;
  double U = 0.0;
  double V = 0.0;
  double dU = 0.0;
  double dV = 0.0;
  double gap = 0.0;
};

namespace detail {

/// Neumaier compensated accumulator; the sums mix term magnitudes across
/// several orders near the resolvent pole.
struct KahanSum {
  double s = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      comp += (s - t) + x;
    else
      comp += (x - t) + s;
    s = t;
  }
  double value() const { return s + comp; }
};

/// Calls f(s2, c) for every momentum of the grid except k = 0. Iterates the
/// equivalent representative set k_j = 2 pi m_j / side, m_j = 0..side-1;
/// all summands are 2pi-periodic so the parity bookkeeping of the canonical
/// grid is not needed here.
template <typename F>
void for_each_momentum_term(const LatticeConfig& cfg, F&& f) {
  const int side = cfg.side;
  const int d = cfg.d;
  std::vector<double> sin2(static_cast<std::size_t>(side));
  std::vector<double> omc(static_cast<std::size_t>(side));
  for (int m = 0; m < side; ++m) {
    const double kj = 2.0 * std::numbers::pi * m / side;
    sin2[static_cast<std::size_t>(m)] = std::sin(kj) * std::sin(kj);
    omc[static_cast<std::size_t>(m)] = 1.0 - std::cos(kj);
  }
  std::vector<int> digit(static_cast<std::size_t>(d), 0);
  for (std::int64_t i = 0; i < cfg.n_sites; ++i) {
    if (i != 0) {
      double ss = 0.0, oc = 0.0;
      for (int j = 0; j < d; ++j) {
        ss += sin2[static_cast<std::size_t>(digit[static_cast<std::size_t>(j)])];
        oc += omc[static_cast<std::size_t>(digit[static_cast<std::size_t>(j)])];
      }
      f(ss, 2.0 * oc);
    }
    for (int j = d - 1; j >= 0; --j) {
      auto& dj = digit[static_cast<std::size_t>(j)];
      if (++dj < side) break;
      dj = 0;
    }
  }
}

}  // namespace detail

/// min over k != 0 of E(k).
inline double spectral_gap(const LatticeConfig& cfg, const DispersionParams& p) {
  validate_params(p);
  const double w2 = p.omega * p.omega, g2 = p.gamma * p.gamma;
  double min_e2 = std::numeric_limits<double>::infinity();
  detail::for_each_momentum_term(cfg, [&](double ss, double cc) {
    const double e2 = w2 * ss + g2 * cc * cc;
    if (e2 < min_e2) min_e2 = e2;
  });
  return std::sqrt(min_e2);
}

/// Streaming evaluator for U, V and their derivatives at several probe
/// energies over one fixed (lattice, params) pair. The gap is computed once
/// at construction; evaluate() enforces |E| < gap with a relative margin of
/// 1e-9 so denominators stay away from the resolvent pole.
class SumEvaluator {
 public:
  SumEvaluator(const LatticeConfig& cfg, const DispersionParams& p) : cfg_(cfg), p_(p) {
    validate_params(p);
    gap_ = spectral_gap(cfg, p);
  }

  double gap() const { return gap_; }
  const LatticeConfig& cfg() const { return cfg_; }
  const DispersionParams& params() const { return p_; }

  SpectralSums evaluate(double E) const {
    if (std::abs(E) >= gap_ * (1.0 - 1e-9))
      throw std::invalid_argument("spectral_sums: probe energy at or beyond the spectral gap");
    const double w2 = p_.omega * p_.omega, g2 = p_.gamma * p_.gamma;
    const double e2 = E * E;
    detail::KahanSum u, v, du, dv;
    detail::for_each_momentum_term(cfg_, [&](double ss, double cc) {
      const double den = (w2 * ss + g2 * cc * cc) - e2;
      const double inv = 1.0 / den;
      u.add(p_.gamma * cc * inv);
      v.add(inv);
      du.add(2.0 * E * p_.gamma * cc * inv * inv);
      dv.add(2.0 * E * inv * inv);
    });
    const double n = static_cast<double>(cfg_.n_sites);
    SpectralSums out;
    out.E = E;
    out.U = u.value() / n;
    out.V = v.value() / n;
    out.dU = du.value() / n;
    out.dV = dv.value() / n;
    out.gap = gap_;
    return out;
  }

 private:
  LatticeConfig cfg_;
  DispersionParams p_;
  double gap_ = 0.0;
};

/// One-shot form of SumEvaluator::evaluate.
inline SpectralSums spectral_sums(const LatticeConfig& cfg, const DispersionParams& p, double E) {
  return SumEvaluator(cfg, p).evaluate(E);
}

// ---------------------------------------------------------------------------
// Continuum (Brillouin-zone) integrals
// ---------------------------------------------------------------------------

/// Knobs for the Brillouin-zone integrals. d <= 3 uses a tensor-product
/// Gauss rule on [0, pi]^d with panels geometrically graded toward k = 0
/// (the integrands are smooth away from the origin and have at worst an
/// integrable 1/k^2 peak there). d >= 4 uses a randomized-shift Halton
/// sequence; a fixed radial cutoff around k = 0 is integrated analytically
/// from the leading small-k form. Results are deterministic given the seed.
struct QuadratureConfig {
  int levels = 24;
  int gauss_order = 12;
  std::int64_t qmc_points = std::int64_t{1} << 20;
  std::uint64_t qmc_seed = 987654321;
  double radial_cutoff = 0.05;
};

namespace detail {

inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
}

/// Per-axis nodes/weights of the graded composite rule on [0, pi].
inline void graded_axis_rule(const QuadratureConfig& q, std::vector<double>& nodes,
                             std::vector<double>& weights) {
  std::vector<double> gx, gw;
  gauss_legendre(q.gauss_order, gx, gw);
  nodes.clear();
  weights.clear();
  double lo = 0.0;
  for (int level = q.levels; level >= 1; --level) {
    const double hi = std::numbers::pi * std::ldexp(1.0, -(level - 1));
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < q.gauss_order; ++i) {
      nodes.push_back(mid + half * gx[static_cast<std::size_t>(i)]);
      weights.push_back(half * gw[static_cast<std::size_t>(i)]);
    }
    lo = hi;
  }
}

/// (1/(2 pi)^d) * integral over the Brillouin zone of f(s2(k), c(k)),
/// for integrands even in every k_j.  d <= 3 only.
template <typename TermF>
double tensor_bz_integral(int d, const QuadratureConfig& q, TermF&& f) {
  std::vector<double> nodes, weights;
  graded_axis_rule(q, nodes, weights);
  const std::size_t n = nodes.size();
  std::vector<double> sin2(n), omc(n);
  for (std::size_t i = 0; i < n; ++i) {
    sin2[i] = std::sin(nodes[i]) * std::sin(nodes[i]);
    omc[i] = 1.0 - std::cos(nodes[i]);
  }
  std::vector<std::size_t> digit(static_cast<std::size_t>(d), 0);
  KahanSum acc;
  const std::size_t total_f = [&] {
    std::size_t t = 1;
    for (int j = 0; j < d; ++j) t *= n;
    return t;
  }();
  for (std::size_t i = 0; i < total_f; ++i) {
    double ss = 0.0, oc = 0.0, wt = 1.0;
    for (int j = 0; j < d; ++j) {
      const std::size_t idx = digit[static_cast<std::size_t>(j)];
      ss += sin2[idx];
      oc += omc[idx];
      wt *= weights[idx];
    }
    acc.add(wt * f(ss, 2.0 * oc));
    for (int j = d - 1; j >= 0; --j) {
      auto& dj = digit[static_cast<std::size_t>(j)];
      if (++dj < n) break;
      dj = 0;
    }
  }
  // [-pi,pi]^d folds onto 2^d copies of [0,pi]^d; the prefactor is then
  // 2^d / (2 pi)^d = 1 / pi^d.
  return acc.value() / std::pow(std::numbers::pi, d);
}

inline double radical_inverse(std::uint32_t base, std::uint64_t i) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

/// Halton estimate of (1/(2 pi)^d) * integral over [-pi, pi]^d of
/// f(s2(k), c(k)), skipping the ball |k| < cutoff (pass 0 to disable).
template <typename TermF>
double qmc_bz_integral(int d, const QuadratureConfig& q, double cutoff, TermF&& f) {
  static constexpr std::uint32_t bases[6] = {2, 3, 5, 7, 11, 13};
  std::vector<double> shift(static_cast<std::size_t>(d));
  std::uint64_t state = q.qmc_seed;
  for (int j = 0; j < d; ++j) {
    // splitmix64 for the Cranley-Patterson shifts
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    shift[static_cast<std::size_t>(j)] = static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  KahanSum acc;
  std::vector<double> k(static_cast<std::size_t>(d));
  const double cut2 = cutoff * cutoff;
  for (std::int64_t i = 0; i < q.qmc_points; ++i) {
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) {
      double x = radical_inverse(bases[j], static_cast<std::uint64_t>(i) + 1) +
                 shift[static_cast<std::size_t>(j)];
      x -= std::floor(x);
      const double kj = (2.0 * x - 1.0) * std::numbers::pi;
      k[static_cast<std::size_t>(j)] = kj;
      r2 += kj * kj;
    }
    if (cutoff > 0.0 && r2 < cut2) continue;
    acc.add(f(s2(k), c(k)));
  }
  return acc.value() / static_cast<double>(q.qmc_points);
}

/// Surface area of the unit sphere in R^d.
inline double unit_sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace detail

/// Continuum limit of U(0): (1/(2 pi)^d) * integral of gamma c(k) / E(k)^2.
/// Convergent for any d when omega > 0 (the integrand is bounded); for
/// omega = 0 it needs d >= 3.
inline double continuum_U0(int d, const DispersionParams& p, const QuadratureConfig& q = {}) {
  validate_params(p);
  if (d < kMinDim || d > kMaxDim) throw std::invalid_argument("continuum_U0: d out of range");
  if (p.omega == 0.0 && d <= 2)
    throw std::invalid_argument("continuum_U0: infrared divergent for omega = 0 and d <= 2");
  const double w2 = p.omega * p.omega, g2 = p.gamma * p.gamma, ga = p.gamma;
  auto f = [&](double ss, double cc) { return ga * cc / (w2 * ss + g2 * cc * cc); };
  if (d <= 3) return detail::tensor_bz_integral(d, q, f);
  double ball = 0.0;
  double cutoff = 0.0;
  if (p.omega == 0.0) {
    // integrand ~ 1/(gamma k^2) near the origin
    cutoff = q.radial_cutoff;
    ball = detail::unit_sphere_area(d) * std::pow(cutoff, d - 2) /
           ((d - 2) * p.gamma * std::pow(2.0 * std::numbers::pi, d));
  }
  return detail::qmc_bz_integral(d, q, cutoff, f) + ball;
}

/// Continuum limit of V(0): (1/(2 pi)^d) * integral of 1 / E(k)^2.
/// Infrared divergent in d = 2 (use the finite-N sum there) and, for
/// omega = 0, in every d <= 4.
inline double continuum_V0(int d, const DispersionParams& p, const QuadratureConfig& q = {}) {
  validate_params(p);
  if (d < kMinDim || d > kMaxDim) throw std::invalid_argument("continuum_V0: d out of range");
  if (d <= 2)
    throw std::invalid_argument(
        "continuum_V0: logarithmically infrared divergent for d <= 2; use the finite-N sum");
  if (p.omega == 0.0 && d <= 4)
    throw std::invalid_argument("continuum_V0: infrared divergent for omega = 0 and d <= 4");
  const double w2 = p.omega * p.omega, g2 = p.gamma * p.gamma;
  auto f = [&](double ss, double cc) { return 1.0 / (w2 * ss + g2 * cc * cc); };
  if (d <= 3) return detail::tensor_bz_integral(d, q, f);
  const double cutoff = q.radial_cutoff;
  double ball;
  if (p.omega > 0.0) {
    // integrand ~ 1/(omega^2 k^2)
    ball = detail::unit_sphere_area(d) * std::pow(cutoff, d - 2) /
           ((d - 2) * w2 * std::pow(2.0 * std::numbers::pi, d));
  } else {
    // omega = 0, d = 5: integrand ~ 1/(gamma^2 k^4)
    ball = detail::unit_sphere_area(d) * std::pow(cutoff, d - 4) /
           ((d - 4) * g2 * std::pow(2.0 * std::numbers::pi, d));
  }
  return detail::qmc_bz_integral(d, q, cutoff, f) + ball;
}

}  // namespace diracwalk
