#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "diracwalk/critical.hpp"
#include "diracwalk/lattice.hpp"
#include "diracwalk/spectral.hpp"

namespace diracwalk {

/// Closed-form predictions at criticality. R is the squared magnitude of
/// the marked-site spin-resolved overlap of the eigenvector at E_plus,
/// obtained from the exact derivative of the scalar condition,
///   1/R = 1/(N E^2) + U'(E) + V(E) + E V'(E)   (beta sector +1),
/// which is ~ 2 V(0) at leading order. The evolution time is
/// T = pi/(2 E_plus); the final overlap on |eta, w> is sqrt(2R). The
/// amplitude-amplified cost T/sqrt(2R) is reported, not simulated.
struct Prediction {
  double E_plus = 0.0;
  double E_minus = 0.0;
  double R = 0.0;
  double T = 0.0;
  double amplitude = 0.0;
  double boosted_time = 0.0;
  double V0 = 0.0;
  double U0 = 0.0;
  double gap = 0.0;
};

namespace detail {

/// 1/R at probe energy E in beta sector +1.
inline double inverse_overlap_sq(const SumEvaluator& ev, double E) {
  const SpectralSums s = ev.evaluate(E);
  const double n = static_cast<double>(ev.cfg().n_sites);
  return 1.0 / (n * E * E) + s.dU + s.V + E * s.dV;
}

}  // namespace detail

inline Prediction predict(const LatticeConfig& cfg, const DispersionParams& p,
                          const EigenSolution& roots) {
  if (!(roots.E_plus > 0.0) || !(roots.E_minus < 0.0))
    throw std::invalid_argument("predict: roots must straddle zero");
  const SumEvaluator ev(cfg, p);
  const double r_inv = detail::inverse_overlap_sq(ev, roots.E_plus);
  if (!(r_inv > 0.0))
    throw std::runtime_error("predict: nonpositive condition derivative, roots are inconsistent");
  Prediction out;
  out.E_plus = roots.E_plus;
  out.E_minus = roots.E_minus;
  out.R = 1.0 / r_inv;
  out.T = std::numbers::pi / (2.0 * std::abs(roots.E_plus));
  out.amplitude = std::sqrt(2.0 * out.R);
  out.boosted_time = out.T / out.amplitude;
  const SpectralSums at0 = ev.evaluate(0.0);
  out.V0 = at0.V;
  out.U0 = at0.U;
  out.gap = at0.gap;
  return out;
}

/// Exact overlaps <eta, s | psi_+-> = -sqrt(R_+-) / (E_+- sqrt(N)), close to
/// (-1/sqrt(2), +1/sqrt(2)): the two search eigenstates nearly exhaust the
/// initial state.
inline std::pair<double, double> initial_state_overlap(const LatticeConfig& cfg,
                                                       const DispersionParams& p,
                                                       const EigenSolution& roots) {
  if (!(roots.E_plus > 0.0) || !(roots.E_minus < 0.0))
    throw std::invalid_argument("initial_state_overlap: roots must straddle zero");
  const SumEvaluator ev(cfg, p);
  const double sqrt_n = std::sqrt(static_cast<double>(cfg.n_sites));
  auto overlap = [&](double e) {
    const double r_inv = detail::inverse_overlap_sq(ev, e);
    if (!(r_inv > 0.0))
      throw std::runtime_error("initial_state_overlap: nonpositive condition derivative");
    return -std::sqrt(1.0 / r_inv) / (e * sqrt_n);
  };
  return {overlap(roots.E_plus), overlap(roots.E_minus)};
}

}  // namespace diracwalk
