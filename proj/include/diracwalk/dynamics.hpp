#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "diracwalk/critical.hpp"
#include "diracwalk/hamiltonian.hpp"
#include "diracwalk/predict.hpp"

namespace diracwalk {

namespace detail {

/// J_0(x) .. J_nmax(x) for x >= 0 by Miller's downward recurrence,
/// normalized with J_0 + 2 sum J_2k = 1.
inline std::vector<double> bessel_j_batch(int nmax, double x) {
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x < 1e-300) {
    out[0] = 1.0;
    return out;
  }
  const int start = nmax + 64 + static_cast<int>(std::sqrt(60.0 * nmax) + 1.5 * x / (nmax + 1));
  double jp = 0.0, j = 1e-300, norm = 0.0;
  for (int n = start; n >= 1; --n) {
    const double jm = (2.0 * n / x) * j - jp;
    jp = j;
    j = jm;
    if (n - 1 <= nmax) out[static_cast<std::size_t>(n - 1)] = j;
    if (((n - 1) & 1) == 0) norm += (n == 1) ? j : 2.0 * j;
    if (std::abs(j) > 1e250) {
      const double s = 1e-250;
      j *= s;
      jp *= s;
      norm *= s;
      for (auto& v : out) v *= s;
    }
  }
  for (auto& v : out) v /= norm;
  return out;
}

inline int worker_count() {
  if (const char* env = std::getenv("DIRACWALK_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace detail

enum class EvolveMethod { Auto, Dense, Chebyshev };

struct EvolveOptions {
  double tol = 1e-9;
  EvolveMethod method = EvolveMethod::Auto;
  std::int64_t dense_cap = kDenseCap;
};

/// Propagates states under e^{-iHt}. Dense path: one Hermitian
/// eigendecomposition, then exact phases. Iterative path: Chebyshev
/// expansion of the exponential with the spectrum rescaled by the a-priori
/// norm bound; the series is truncated so the tail is two orders below the
/// requested tolerance, which also keeps the norm drift at tol/100.
class Propagator {
 public:
  Propagator(const SearchParams& sp, const EvolveOptions& opts = {})
      : op_(sp), opts_(opts), scale_(op_.norm_bound()) {
    if (opts_.tol < 1e-12 || opts_.tol > 1e-6)
      throw std::invalid_argument("Propagator: tol must lie in [1e-12, 1e-6]");
    method_ = opts_.method;
    if (method_ == EvolveMethod::Auto)
      method_ = (op_.dim() <= opts_.dense_cap) ? EvolveMethod::Dense : EvolveMethod::Chebyshev;
    if (method_ == EvolveMethod::Dense) {
      if (op_.dim() > opts_.dense_cap)
        throw std::invalid_argument("Propagator: dense method requested above the dense cap");
      const Matrix h = assemble_dense(sp, opts_.dense_cap);
      Eigen::SelfAdjointEigenSolver<Matrix> es(h);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("Propagator: dense eigendecomposition failed");
      evals_ = es.eigenvalues();
      evecs_ = es.eigenvectors();
    }
  }

  EvolveMethod method() const { return method_; }
  const SearchOperator& op() const { return op_; }

  /// psi <- e^{-iH dt} psi, with 2-norm error at most tol_step.
  void advance(Vector& psi, double dt, double tol_step) const {
    if (method_ == EvolveMethod::Dense) {
      Vector coeffs = evecs_.adjoint() * psi;
      for (Eigen::Index i = 0; i < coeffs.size(); ++i)
        coeffs(i) *= std::exp(Complex(0.0, -evals_(i) * dt));
      psi = evecs_ * coeffs;
      return;
    }
    // split so each substep has |z| <= 256; errors add across substeps
    const double z_total = std::abs(scale_ * dt);
    const int substeps = std::max(1, static_cast<int>(std::ceil(z_total / 256.0)));
    const double sub_dt = dt / substeps;
    const double sub_tol = tol_step / substeps;
    for (int s = 0; s < substeps; ++s) chebyshev_step(psi, sub_dt, sub_tol);
  }

  void advance(Vector& psi, double dt) const { advance(psi, dt, opts_.tol); }

 private:
  void chebyshev_step(Vector& psi, double dt, double tol_step) const {
    const double z = scale_ * dt;
    const double az = std::abs(z);
    const int cap = static_cast<int>(az) + 80 + static_cast<int>(std::sqrt(40.0 * az));
    const std::vector<double> jn = detail::bessel_j_batch(cap, az);
    // truncate where the remaining coefficient mass is far below tol
    const double target = 0.01 * tol_step;
    double tail = 0.0;
    int order = cap;
    for (int n = cap; n >= 1; --n) {
      tail += 2.0 * std::abs(jn[static_cast<std::size_t>(n)]);
      if (tail > target) {
        order = std::min(cap, n + 1);
        break;
      }
      order = n;
    }
    const Complex phase = (z >= 0.0) ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
    Vector y0 = psi;
    Vector y1(psi.size()), tmp(psi.size());
    op_.apply(y0, y1);
    y1 /= scale_;
    Vector out = jn[0] * y0;
    Complex c = 2.0 * phase;
    if (order >= 1) out += c * jn[1] * y1;
    for (int n = 2; n <= order; ++n) {
      op_.apply(y1, tmp);
      tmp = (2.0 / scale_) * tmp - y0;
      y0.swap(y1);
      y1.swap(tmp);
      c *= phase;
      out += 2.0 * c * jn[static_cast<std::size_t>(n)] * y1;
    }
    psi = std::move(out);
  }

  SearchOperator op_;
  EvolveOptions opts_;
  EvolveMethod method_ = EvolveMethod::Auto;
  double scale_ = 1.0;
  Eigen::VectorXd evals_;
  Matrix evecs_;
};

/// One-shot evolution to time t within 2-norm tolerance tol.
inline Vector evolve(const SearchParams& sp, const Vector& state0, double t, double tol = 1e-9,
                     EvolveMethod method = EvolveMethod::Auto) {
  EvolveOptions opts;
  opts.tol = tol;
  opts.method = method;
  const Propagator prop(sp, opts);
  Vector psi = state0;
  if (t != 0.0) prop.advance(psi, t, tol);
  return psi;
}

/// Time series of the marked-site success probability.
struct EvolutionResult {
  std::vector<double> times;
  std::vector<double> p_marked;      // sum over spin of |amplitude at w|^2
  std::vector<double> p_eta_marked;  // |<eta, w | psi(t)>|^2
  double t_star = 0.0;
  double p_star = 0.0;
  double norm_drift = 0.0;
};

inline std::vector<double> default_time_grid(double t_max, int points = 64) {
  if (points < 1 || !(t_max >= 0.0)) throw std::invalid_argument("default_time_grid: bad spec");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = (points == 1) ? 0.0 : t_max * i / (points - 1);
  return g;
}

/// Evolves |eta, s> through the time grid and records the marked-site
/// probabilities. t_star is the grid argmax refined by a three-point
/// parabolic fit; p_star is the fitted maximum.
inline EvolutionResult run_search(const SearchParams& sp, const std::vector<double>& t_grid,
                                  const EvolveOptions& opts = {}) {
  if (t_grid.empty() || t_grid.front() != 0.0)
    throw std::invalid_argument("run_search: time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("run_search: time grid must be strictly increasing");
  const Propagator prop(sp, opts);
  const int dim = sp.rep.dim;
  const std::int64_t base = sp.w * dim;
  const int steps = static_cast<int>(t_grid.size()) - 1;
  const double step_tol = steps > 0 ? opts.tol / steps : opts.tol;

  Vector psi = make_uniform_state(sp);
  EvolutionResult res;
  res.times = t_grid;
  res.p_marked.reserve(t_grid.size());
  res.p_eta_marked.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (i > 0) prop.advance(psi, t_grid[i] - t_grid[i - 1], step_tol);
    double pm = 0.0;
    Complex eta_amp(0.0, 0.0);
    for (int s = 0; s < dim; ++s) {
      pm += std::norm(psi(base + s));
      eta_amp += std::conj(sp.rep.eta(s)) * psi(base + s);
    }
    res.p_marked.push_back(pm);
    res.p_eta_marked.push_back(std::norm(eta_amp));
    res.norm_drift = std::max(res.norm_drift, std::abs(psi.norm() - 1.0));
  }

  std::size_t imax = 0;
  for (std::size_t i = 1; i < res.p_marked.size(); ++i)
    if (res.p_marked[i] > res.p_marked[imax]) imax = i;
  res.t_star = res.times[imax];
  res.p_star = res.p_marked[imax];
  if (imax > 0 && imax + 1 < res.p_marked.size()) {
    const double h = res.times[imax + 1] - res.times[imax];
    const double ym = res.p_marked[imax - 1], y0 = res.p_marked[imax], yp = res.p_marked[imax + 1];
    const double denom = yp - 2.0 * y0 + ym;
    if (denom < 0.0) {
      const double delta = 0.5 * (ym - yp) / denom;
      res.t_star = res.times[imax] + delta * h;
      res.p_star = y0 - 0.25 * (ym - yp) * delta;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Experiment pipeline: per-N criticality solve -> roots -> prediction
// ---------------------------------------------------------------------------

/// How an experiment picks its couplings. If omega is NaN it defaults to
/// omega_fraction * omega*(d, N); gamma is then solved on the requested
/// branch at the experiment's own lattice size.
struct OperatingPoint {
  double omega = std::numeric_limits<double>::quiet_NaN();
  double omega_fraction = 0.5;
  Branch branch = Branch::Upper;
};

struct ExperimentSetup {
  SearchParams params;
  double omega_star = 0.0;
  EigenSolution roots;
  Prediction pred;
};

inline ExperimentSetup setup_search_experiment(int d, int side, RepKind rep_kind,
                                               const OperatingPoint& point = {},
                                               std::int64_t w = 0) {
  ExperimentSetup setup;
  setup.params.cfg = build_lattice(d, side);
  setup.params.rep = (rep_kind == RepKind::Full) ? build_full_rep(d) : build_reduced_rep(d);
  setup.params.w = w;
  const CurveSource source = CurveSource::lattice(side);
  setup.omega_star = omega_star(d, source);
  setup.params.omega = std::isnan(point.omega) ? point.omega_fraction * setup.omega_star
                                               : point.omega;
  setup.params.gamma = solve_gamma(d, setup.params.omega, point.branch, source);
  const DispersionParams p{setup.params.omega, setup.params.gamma};
  setup.roots = eigencondition_roots(setup.params.cfg, p, +1);
  setup.pred = predict(setup.params.cfg, p, setup.roots);
  return setup;
}

// ---------------------------------------------------------------------------
// Scaling studies
// ---------------------------------------------------------------------------

enum class Observable { TStar, PStar, PredictedTime, PredictedAmplitude, PredictedBoostedTime };

struct ScalingRow {
  int side = 0;
  std::int64_t n = 0;
  double omega = 0.0, gamma = 0.0;
  double E_plus = 0.0, V0 = 0.0, R = 0.0;
  double T_pred = 0.0, amplitude = 0.0, boosted_time = 0.0;
  double t_star = 0.0, p_star = 0.0;
  double norm_drift = 0.0;
};

struct PowerLawFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<ScalingRow> table;
};

struct ScalingOptions {
  OperatingPoint point;
  EvolveOptions evolve;
  int time_points = 64;
  double t_max_factor = 2.0;
  bool run_dynamics = true;  // predicted observables need no evolution
};

namespace detail {

inline double pick_observable(const ScalingRow& row, Observable obs) {
  switch (obs) {
    case Observable::TStar:
      return row.t_star;
    case Observable::PStar:
      return row.p_star;
    case Observable::PredictedTime:
      return row.T_pred;
    case Observable::PredictedAmplitude:
      return row.amplitude;
    case Observable::PredictedBoostedTime:
      return row.boosted_time;
  }
  throw std::logic_error("pick_observable: unknown observable");
}

}  // namespace detail

/// Re-solves criticality, prediction, and (optionally) dynamics at every
/// lattice size, then fits log(observable) against log(N). Runs fan out
/// over worker threads; DIRACWALK_WORKERS overrides the worker count.
inline PowerLawFit scaling_study(int d, const std::vector<int>& sides, RepKind rep_kind,
                                 Observable observable, const ScalingOptions& opts = {}) {
  if (sides.size() < 3) throw std::invalid_argument("scaling_study: need at least 3 sides");
  std::vector<ScalingRow> rows(sides.size());
  std::vector<std::exception_ptr> errors(sides.size());
  std::atomic<std::size_t> next{0};
  const bool need_dynamics = opts.run_dynamics && (observable == Observable::TStar ||
                                                   observable == Observable::PStar);
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= sides.size()) return;
      try {
        const ExperimentSetup setup =
            setup_search_experiment(d, sides[i], rep_kind, opts.point);
        ScalingRow row;
        row.side = sides[i];
        row.n = setup.params.cfg.n_sites;
        row.omega = setup.params.omega;
        row.gamma = setup.params.gamma;
        row.E_plus = setup.roots.E_plus;
        row.V0 = setup.pred.V0;
        row.R = setup.pred.R;
        row.T_pred = setup.pred.T;
        row.amplitude = setup.pred.amplitude;
        row.boosted_time = setup.pred.boosted_time;
        if (need_dynamics) {
          const auto grid =
              default_time_grid(opts.t_max_factor * setup.pred.T, opts.time_points);
          const EvolutionResult evo = run_search(setup.params, grid, opts.evolve);
          row.t_star = evo.t_star;
          row.p_star = evo.p_star;
          row.norm_drift = evo.norm_drift;
        }
        rows[i] = row;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(detail::worker_count(), static_cast<int>(sides.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  PowerLawFit fit;
  fit.table = rows;
  const std::size_t m = rows.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& row : rows) {
    const double y_raw = detail::pick_observable(row, observable);
    if (!(y_raw > 0.0)) throw std::runtime_error("scaling_study: nonpositive observable");
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(y_raw);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double denom = m * sxx - sx * sx;
  fit.exponent = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.exponent * sx) / m;
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& row : rows) {
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(detail::pick_observable(row, observable));
    const double yhat = fit.exponent * x + fit.intercept;
    ss_res += (y - yhat) * (y - yhat);
    ss_tot += (y - sy / m) * (y - sy / m);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace diracwalk
