#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "diracwalk/clifford.hpp"
#include "diracwalk/lattice.hpp"
#include "diracwalk/spectral.hpp"

namespace diracwalk {

inline constexpr std::int64_t kDenseCap = 5000;

/// Everything that defines the search Hamiltonian
///   H = H0 - beta |w><w|,   H0 = omega sum_j alpha_j P_j - gamma beta L.
/// The sign of the beta L term is fixed so that the momentum-space spin
/// block is  omega sum_j sin(k_j) alpha_j + gamma c(k) beta  (L has plane
/// wave eigenvalue -c(k)); with that orientation the criticality condition
/// U(0) = 1 is attainable, which the dense-diagonalization oracle tests pin
/// down.
struct SearchParams {
  LatticeConfig cfg;
  SpinRep rep;
  double omega = 0.0;
  double gamma = 0.0;
  std::int64_t w = 0;
};

inline void validate_search_params(const SearchParams& sp) {
  if (sp.rep.d != sp.cfg.d)
    throw std::invalid_argument("SearchParams: representation and lattice dimension mismatch");
  if (sp.w < 0 || sp.w >= sp.cfg.n_sites)
    throw std::invalid_argument("SearchParams: marked site out of range");
  validate_params(DispersionParams{sp.omega, sp.gamma});
}

inline std::int64_t state_dim(const SearchParams& sp) {
  return sp.cfg.n_sites * sp.rep.dim;
}

/// |eta, s>: the reference spin state on the uniform spatial superposition.
inline Vector make_uniform_state(const SearchParams& sp) {
  validate_search_params(sp);
  const double a = 1.0 / std::sqrt(static_cast<double>(sp.cfg.n_sites));
  Vector psi(state_dim(sp));
  for (std::int64_t x = 0; x < sp.cfg.n_sites; ++x)
    for (int s = 0; s < sp.rep.dim; ++s) psi(x * sp.rep.dim + s) = a * sp.rep.eta(s);
  return psi;
}

/// Normalized plane wave with integer momentum indices m and spin state chi.
inline Vector plane_wave_state(const LatticeConfig& cfg, const std::vector<int>& m,
                               const Vector& chi) {
  if (static_cast<int>(m.size()) != cfg.d)
    throw std::invalid_argument("plane_wave_state: momentum dimension mismatch");
  const int dim = static_cast<int>(chi.size());
  const double a = 1.0 / std::sqrt(static_cast<double>(cfg.n_sites));
  Vector psi(cfg.n_sites * dim);
  for (std::int64_t x = 0; x < cfg.n_sites; ++x) {
    const auto cxy = site_coords(cfg, x);
    double phase = 0.0;
    for (int j = 0; j < cfg.d; ++j)
      phase += 2.0 * std::numbers::pi * m[static_cast<std::size_t>(j)] *
               cxy[static_cast<std::size_t>(j)] / cfg.side;
    const Complex f = a * std::exp(Complex(0.0, phase));
    for (int s = 0; s < dim; ++s) psi(x * dim + s) = f * chi(s);
  }
  return psi;
}

/// Lattice momentum P_j: (P_j psi)(x) = (i/2)(psi(x - e_j) - psi(x + e_j)),
/// acting blockwise on states with spin_dim components per site.
inline Vector apply_P(const LatticeConfig& cfg, int axis, int spin_dim, const Vector& in) {
  if (axis < 0 || axis >= cfg.d) throw std::invalid_argument("apply_P: axis out of range");
  if (in.size() != cfg.n_sites * spin_dim)
    throw std::invalid_argument("apply_P: state dimension mismatch");
  Vector out(in.size());
  const Complex half_i(0.0, 0.5);
  for (std::int64_t x = 0; x < cfg.n_sites; ++x) {
    const auto nb = neighbors(cfg, x);
    const auto& a = nb[static_cast<std::size_t>(axis)];
    for (int s = 0; s < spin_dim; ++s)
      out(x * spin_dim + s) = half_i * (in(a.minus * spin_dim + s) - in(a.plus * spin_dim + s));
  }
  return out;
}

/// Lattice Laplacian: neighbor sum minus 2d on the diagonal. Plane-wave
/// eigenvalue -c(k); negative semidefinite.
inline Vector apply_L(const LatticeConfig& cfg, int spin_dim, const Vector& in) {
  if (in.size() != cfg.n_sites * spin_dim)
    throw std::invalid_argument("apply_L: state dimension mismatch");
  Vector out(in.size());
  for (std::int64_t x = 0; x < cfg.n_sites; ++x) {
    const auto nb = neighbors(cfg, x);
    for (int s = 0; s < spin_dim; ++s) {
      Complex acc = -2.0 * cfg.d * in(x * spin_dim + s);
      for (const auto& a : nb) acc += in(a.plus * spin_dim + s) + in(a.minus * spin_dim + s);
      out(x * spin_dim + s) = acc;
    }
  }
  return out;
}

/// Matrix-free application of H0 and H with precomputed neighbor tables and
/// the spin generators unpacked into their nonzero entries. A single apply
/// is O(d * n_sites * dim).
class SearchOperator {
 public:
  explicit SearchOperator(SearchParams sp) : sp_(std::move(sp)) {
    validate_search_params(sp_);
    nbr_ = build_neighbor_table(sp_.cfg);
    auto unpack = [](const Matrix& m, std::vector<SpinEntry>& out) {
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index col = 0; col < m.cols(); ++col)
          if (m(r, col) != Complex(0.0, 0.0))
            out.push_back({static_cast<int>(r), static_cast<int>(col), m(r, col)});
    };
    alpha_entries_.resize(static_cast<std::size_t>(sp_.cfg.d));
    for (int j = 0; j < sp_.cfg.d; ++j)
      unpack(sp_.rep.alphas[static_cast<std::size_t>(j)],
             alpha_entries_[static_cast<std::size_t>(j)]);
    unpack(sp_.rep.beta, beta_entries_);
  }

  const SearchParams& params() const { return sp_; }
  std::int64_t dim() const { return state_dim(sp_); }

  void apply_free(const Vector& in, Vector& out) const { apply_impl(in, out, false); }
  void apply(const Vector& in, Vector& out) const { apply_impl(in, out, true); }

  /// Upper bound on the spectral radius: omega d + 4 gamma d + 1
  /// (|sin| <= 1 per axis, L eigenvalues in [-4d, 0], oracle norm 1).
  double norm_bound() const {
    return sp_.omega * sp_.cfg.d + 4.0 * sp_.gamma * sp_.cfg.d + 1.0;
  }

 private:
  struct SpinEntry {
    int row, col;
    Complex val;
  };

  void apply_impl(const Vector& in, Vector& out, bool with_oracle) const {
    if (in.size() != dim()) throw std::invalid_argument("SearchOperator: dimension mismatch");
    out.resize(dim());
    const int dm = sp_.rep.dim;
    const int d = sp_.cfg.d;
    const Complex half_i(0.0, 0.5);
    Complex lap[8], pj[8];
    for (std::int64_t x = 0; x < sp_.cfg.n_sites; ++x) {
      const std::int64_t base = x * dm;
      const std::int64_t* nb = &nbr_[static_cast<std::size_t>(x) * 2 * d];
      for (int s = 0; s < dm; ++s) {
        out(base + s) = Complex(0.0, 0.0);
        lap[s] = -2.0 * d * in(base + s);
      }
      for (int j = 0; j < d; ++j) {
        const std::int64_t bp = nb[2 * j] * dm;
        const std::int64_t bm = nb[2 * j + 1] * dm;
        for (int s = 0; s < dm; ++s) {
          const Complex up = in(bp + s), um = in(bm + s);
          lap[s] += up + um;
          pj[s] = half_i * (um - up);
        }
        for (const auto& e : alpha_entries_[static_cast<std::size_t>(j)])
          out(base + e.row) += sp_.omega * e.val * pj[e.col];
      }
      for (const auto& e : beta_entries_) out(base + e.row) -= sp_.gamma * e.val * lap[e.col];
    }
    if (with_oracle) {
      const std::int64_t base = sp_.w * dm;
      for (const auto& e : beta_entries_) out(base + e.row) -= e.val * in(base + e.col);
    }
  }

  SearchParams sp_;
  std::vector<std::int64_t> nbr_;
  std::vector<std::vector<SpinEntry>> alpha_entries_;
  std::vector<SpinEntry> beta_entries_;
};

inline Vector apply_H0(const SearchParams& sp, const Vector& in) {
  Vector out;
  SearchOperator(sp).apply_free(in, out);
  return out;
}

inline Vector apply_H(const SearchParams& sp, const Vector& in) {
  Vector out;
  SearchOperator(sp).apply(in, out);
  return out;
}

namespace detail {

template <typename ApplyF>
Matrix dense_from_apply(std::int64_t n, ApplyF&& apply) {
  Matrix h(n, n);
  Vector e = Vector::Zero(n), col(n);
  for (std::int64_t j = 0; j < n; ++j) {
    e(j) = 1.0;
    apply(e, col);
    h.col(j) = col;
    e(j) = 0.0;
  }
  return h;
}

}  // namespace detail

/// Dense assembly of H, the oracle for every matrix-free test.
inline Matrix assemble_dense(const SearchParams& sp, std::int64_t cap = kDenseCap) {
  const std::int64_t n = state_dim(sp);
  if (n > cap) throw std::invalid_argument("assemble_dense: state dimension exceeds dense cap");
  SearchOperator op(sp);
  return detail::dense_from_apply(n, [&](const Vector& in, Vector& out) { op.apply(in, out); });
}

/// Dense assembly of the free part H0 alone.
inline Matrix assemble_dense_free(const SearchParams& sp, std::int64_t cap = kDenseCap) {
  const std::int64_t n = state_dim(sp);
  if (n > cap)
    throw std::invalid_argument("assemble_dense_free: state dimension exceeds dense cap");
  SearchOperator op(sp);
  return detail::dense_from_apply(n,
                                  [&](const Vector& in, Vector& out) { op.apply_free(in, out); });
}

/// The spinless comparison walk H = -gamma L - |w><w| on bare site
/// amplitudes.
struct SpinlessBaseline {
  LatticeConfig cfg;
  double gamma = 0.0;
  std::int64_t w = 0;
};

inline Vector apply_spinless(const SpinlessBaseline& b, const Vector& in,
                             bool with_oracle = true) {
  Vector out = -b.gamma * apply_L(b.cfg, 1, in);
  if (with_oracle) out(b.w) -= in(b.w);
  return out;
}

inline Matrix assemble_dense_spinless(const SpinlessBaseline& b, bool with_oracle = true,
                                      std::int64_t cap = kDenseCap) {
  if (b.cfg.n_sites > cap)
    throw std::invalid_argument("assemble_dense_spinless: dimension exceeds dense cap");
  return detail::dense_from_apply(b.cfg.n_sites, [&](const Vector& in, Vector& out) {
    out = apply_spinless(b, in, with_oracle);
  });
}

/// Critical coupling of the spinless walk: gamma_c = (1/N) sum_{k != 0} 1/c(k).
inline double spinless_critical_gamma(const LatticeConfig& cfg) {
  detail::KahanSum acc;
  detail::for_each_momentum_term(cfg, [&](double, double cc) { acc.add(1.0 / cc); });
  return acc.value() / static_cast<double>(cfg.n_sites);
}

}  // namespace diracwalk
