#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "diracwalk/lattice.hpp"
#include "diracwalk/spectral.hpp"

namespace diracwalk {

/// Where the criticality condition U(0) = 1 is evaluated: on the finite
/// lattice the experiment actually runs on, or in the continuum limit
/// (Brillouin-zone integrals, used for drawing critical curves).
struct CurveSource {
  enum class Kind { Lattice, Continuum };
  Kind kind = Kind::Lattice;
  int side = 0;                 // Lattice only
  QuadratureConfig quadrature;  // Continuum only

  static CurveSource lattice(int side) {
    CurveSource s;
    s.kind = Kind::Lattice;
    s.side = side;
    return s;
  }
  static CurveSource continuum(const QuadratureConfig& q = {}) {
    CurveSource s;
    s.kind = Kind::Continuum;
    s.quadrature = q;
    return s;
  }
};

/// u(r) = gamma U(0) as a function of r = omega/gamma alone. U(0) is
/// homogeneous of degree -1 in (omega, gamma), so every point of the
/// critical curve is (omega, gamma) = (r u(r), u(r)).
inline double u_of_ratio(int d, double r, const CurveSource& source) {
  if (!(r >= 0.0)) throw std::invalid_argument("u_of_ratio: ratio must be >= 0");
  if (source.kind == CurveSource::Kind::Continuum)
    return continuum_U0(d, DispersionParams{r, 1.0}, source.quadrature);
  const LatticeConfig cfg = build_lattice(d, source.side);
  const double r2 = r * r;
  detail::KahanSum acc;
  detail::for_each_momentum_term(cfg, [&](double ss, double cc) {
    acc.add(cc / (r2 * ss + cc * cc));
  });
  return acc.value() / static_cast<double>(cfg.n_sites);
}

/// One solution of U(0) = 1.
struct CriticalPoint {
  double ratio = 0.0;
  double omega = 0.0;
  double gamma = 0.0;
  int d = 0;
  CurveSource::Kind source = CurveSource::Kind::Lattice;
};

inline std::vector<CriticalPoint> critical_curve(int d, const std::vector<double>& r_values,
                                                 const CurveSource& source) {
  std::vector<CriticalPoint> out;
  out.reserve(r_values.size());
  for (double r : r_values) {
    if (!(r > 0.0)) throw std::invalid_argument("critical_curve: ratios must be > 0");
    const double u = u_of_ratio(d, r, source);
    out.push_back({r, r * u, u, d, source.kind});
  }
  return out;
}

/// Search window for the fold of r -> r u(r). On even finite lattices the
/// corner momenta (all k_j in {0, pi}) have s(k) = 0, so r u(r) eventually
/// grows again like r times a 1/N-sized constant; restricting to a bounded
/// window keeps the interior fold the unique maximum.
struct FoldSearch {
  double r_lo = 1e-2;
  double r_hi = 1e2;
  int scan_points = 601;
};

struct FoldPoint {
  double r_star = 0.0;
  double omega_star = 0.0;
};

/// Locates the interior maximum of f(r) = r u(r) by a log-spaced scan
/// followed by golden-section refinement.
inline FoldPoint find_fold(int d, const CurveSource& source, const FoldSearch& fs = {}) {
  auto f = [&](double r) { return r * u_of_ratio(d, r, source); };
  const int n = fs.scan_points;
  std::vector<double> rs(static_cast<std::size_t>(n)), fv(static_cast<std::size_t>(n));
  const double lo = std::log(fs.r_lo), hi = std::log(fs.r_hi);
  for (int i = 0; i < n; ++i) {
    rs[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (n - 1));
    fv[static_cast<std::size_t>(i)] = f(rs[static_cast<std::size_t>(i)]);
  }
  int best = -1;
  for (int i = 1; i + 1 < n; ++i) {
    if (fv[static_cast<std::size_t>(i)] >= fv[static_cast<std::size_t>(i - 1)] &&
        fv[static_cast<std::size_t>(i)] >= fv[static_cast<std::size_t>(i + 1)]) {
      if (best < 0 || fv[static_cast<std::size_t>(i)] > fv[static_cast<std::size_t>(best)])
        best = i;
    }
  }
  if (best < 0)
    throw std::runtime_error("find_fold: no interior maximum of r*u(r) in the search window");
  double a = rs[static_cast<std::size_t>(best - 1)];
  double b = rs[static_cast<std::size_t>(best + 1)];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - gr * (b - a), d1 = a + gr * (b - a);
  double fc = f(c1), fd = f(d1);
  while (b - a > 1e-8 * b) {
    if (fc > fd) {
      b = d1;
      d1 = c1;
      fd = fc;
      c1 = b - gr * (b - a);
      fc = f(c1);
    } else {
      a = c1;
      c1 = d1;
      fc = fd;
      d1 = a + gr * (b - a);
      fd = f(d1);
    }
  }
  const double r_star = 0.5 * (a + b);
  return {r_star, f(r_star)};
}

/// Threshold omega*: for 0 < omega < omega* the condition U(0) = 1 has two
/// gamma solutions, above it none.
inline double omega_star(int d, const CurveSource& source, const FoldSearch& fs = {}) {
  return find_fold(d, source, fs).omega_star;
}

enum class Branch { Upper, Lower };

/// Solves U(0) = 1 for gamma at fixed omega given an already-located fold.
/// Upper branch is the larger gamma (smaller r). Fails when omega >= omega*.
inline double solve_gamma(int d, double omega, Branch branch, const CurveSource& source,
                          const FoldPoint& fold, const FoldSearch& fs = {}) {
  if (!(omega > 0.0)) throw std::invalid_argument("solve_gamma: omega must be > 0");
  if (omega >= fold.omega_star)
    throw std::domain_error("solve_gamma: no solution, omega >= omega* = " +
                            std::to_string(fold.omega_star));
  auto f = [&](double r) { return r * u_of_ratio(d, r, source); };
  double lo, hi;
  if (branch == Branch::Upper) {
    lo = fs.r_lo;
    hi = fold.r_star;
    while (f(lo) > omega) {
      lo *= 0.1;
      if (lo < 1e-15) throw std::runtime_error("solve_gamma: failed to bracket upper branch");
    }
  } else {
    lo = fold.r_star;
    hi = fs.r_hi;
    double fh = f(hi);
    while (fh > omega) {
      const double next = hi * 10.0;
      if (next > 1e6) throw std::runtime_error("solve_gamma: failed to bracket lower branch");
      const double fn = f(next);
      if (fn >= fh)
        throw std::runtime_error(
            "solve_gamma: lower branch leaves the fold window (finite-size corner modes)");
      hi = next;
      fh = fn;
    }
  }
  // log-space bisection; f is monotone on each side of the fold
  for (int it = 0; it < 120; ++it) {
    const double mid = std::sqrt(lo * hi);
    const bool high = f(mid) > omega;
    if ((branch == Branch::Upper) == high)
      hi = mid;
    else
      lo = mid;
  }
  const double r = std::sqrt(lo * hi);
  const double gamma = u_of_ratio(d, r, source);
  // residual check against the requested omega
  const double u_check = u_of_ratio(d, omega / gamma, source);
  if (std::abs(u_check / gamma - 1.0) > 1e-10)
    throw std::runtime_error("solve_gamma: solution failed the U(0) = 1 residual check");
  return gamma;
}

inline double solve_gamma(int d, double omega, Branch branch, const CurveSource& source,
                          const FoldSearch& fs = {}) {
  return solve_gamma(d, omega, branch, source, find_fold(d, source, fs), fs);
}

/// The two eigenvalues of H nearest zero in one beta sector b, as roots of
///   G_b(E) = -b/(N E) + U(E) + b E V(E) - 1.
struct EigenSolution {
  double E_plus = 0.0;
  double E_minus = 0.0;
  int beta_sector = +1;
  double residual = 0.0;
};

namespace detail {

inline double bisect_scalar_condition(const SumEvaluator& ev, double b, double lo, double hi,
                                      double glo, double* residual) {
  const double n = static_cast<double>(ev.cfg().n_sites);
  auto g = [&](double E) {
    const SpectralSums s = ev.evaluate(E);
    return -b / (n * E) + s.U + b * E * s.V - 1.0;
  };
  double best = 0.5 * (lo + hi), best_g = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) < std::abs(best_g)) {
      best = mid;
      best_g = gm;
    }
    if (std::abs(gm) <= 1e-13 || hi - lo <= std::abs(mid) * 1e-15) break;
    if ((gm < 0.0) == (glo < 0.0))
      lo = mid;
    else
      hi = mid;
  }
  *residual = std::abs(best_g);
  return best;
}

}  // namespace detail

/// Root-finds G_b on both sides of the pole at E = 0. Requires criticality
/// (|U(0) - 1| <= 1e-8); the pole at zero and the resolvent blow-up at the
/// gap guarantee sign changes, which are checked before bisecting.
inline EigenSolution eigencondition_roots(const LatticeConfig& cfg, const DispersionParams& p,
                                          int beta_sector) {
  if (beta_sector != 1 && beta_sector != -1)
    throw std::invalid_argument("eigencondition_roots: beta sector must be +1 or -1");
  const SumEvaluator ev(cfg, p);
  const SpectralSums at0 = ev.evaluate(0.0);
  if (std::abs(at0.U - 1.0) > 1e-8)
    throw std::invalid_argument("eigencondition_roots: U(0) = 1 does not hold (|U(0)-1| = " +
                                std::to_string(std::abs(at0.U - 1.0)) + ")");
  const double b = static_cast<double>(beta_sector);
  const double n = static_cast<double>(cfg.n_sites);
  const double gap = ev.gap();
  auto g = [&](double E) {
    const SpectralSums s = ev.evaluate(E);
    return -b / (n * E) + s.U + b * E * s.V - 1.0;
  };
  const double e_lo = gap * 1e-12;
  const double e_hi = gap * (1.0 - 2e-9);

  EigenSolution sol;
  sol.beta_sector = beta_sector;
  double res_p = 0.0, res_m = 0.0;

  // positive side: G -> -b*inf at 0+, +inf at gap- when b = +1 (reversed
  // for b = -1); either way the endpoint signs must differ.
  {
    const double glo = g(e_lo), ghi = g(e_hi);
    if (!(glo * ghi < 0.0))
      throw std::runtime_error("eigencondition_roots: no sign change in (0, gap)");
    sol.E_plus = detail::bisect_scalar_condition(ev, b, e_lo, e_hi, glo, &res_p);
  }
  // negative side
  {
    const double glo = g(-e_hi), ghi = g(-e_lo);
    if (!(glo * ghi < 0.0))
      throw std::runtime_error("eigencondition_roots: no sign change in (-gap, 0)");
    sol.E_minus = detail::bisect_scalar_condition(ev, b, -e_hi, -e_lo, glo, &res_m);
  }
  sol.residual = std::max(res_p, res_m);
  if (sol.residual > 1e-12)
    throw std::runtime_error("eigencondition_roots: residual above tolerance");
  return sol;
}

}  // namespace diracwalk
