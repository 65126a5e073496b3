#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "diracwalk/lattice.hpp"

namespace diracwalk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class RepKind { Full, Reduced };

/// A concrete set of spin operators alpha_1..alpha_d, beta together with a
/// reference spin state eta.
///
/// Full reps satisfy the anticommutation relations
///   {alpha_j, alpha_k} = 2 delta_jk,  {alpha_j, beta} = 0,  beta^2 = 1
/// as exact matrix identities on a 2^ceil(d/2)-dimensional spin space.
/// Reduced reps act on d+1 spin components and satisfy the relations only
/// when applied to eta (with beta eta = eta), which is all the search
/// algorithm needs. All generator entries lie in {0, +-1, +-i}, so the
/// algebra holds exactly in floating point.
struct SpinRep {
  RepKind kind = RepKind::Full;
  int d = 0;
  int dim = 0;
  std::vector<Matrix> alphas;
  Matrix beta;
  Vector eta;
};

namespace detail {

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline void check_dim_range(int d, const char* where) {
  if (d < kMinDim || d > kMaxDim)
    throw std::invalid_argument(std::string(where) + ": dimension must be in [1, 6], got " +
                                std::to_string(d));
}

}  // namespace detail

/// Minimal full representation, dim = 2^ceil(d/2). Built by the standard
/// recursion: start from the Pauli matrices and step d -> d+2 by tensoring,
/// which keeps every entry in {0, +-1, +-i}.
inline SpinRep build_full_rep(int d) {
  detail::check_dim_range(d, "build_full_rep");
  std::vector<Matrix> alphas;
  Matrix beta;
  if (d % 2 == 1) {
    alphas = {detail::pauli_x()};
    beta = detail::pauli_z();
  } else {
    alphas = {detail::pauli_x(), detail::pauli_y()};
    beta = detail::pauli_z();
  }
  const Matrix sx = detail::pauli_x();
  const Matrix sy = detail::pauli_y();
  const Matrix sz = detail::pauli_z();
  while (static_cast<int>(alphas.size()) < d) {
    // d -> d+2: the old alphas and beta all acquire a sigma_x factor and two
    // fresh generators come from sigma_y, sigma_z acting on the new qubit.
    const Matrix id = Matrix::Identity(beta.rows(), beta.cols());
    std::vector<Matrix> next;
    next.reserve(alphas.size() + 2);
    for (const auto& a : alphas) next.push_back(detail::kron(sx, a));
    next.push_back(detail::kron(sx, beta));
    next.push_back(detail::kron(sy, id));
    alphas = std::move(next);
    beta = detail::kron(sz, id);
  }
  SpinRep rep;
  rep.kind = RepKind::Full;
  rep.d = d;
  rep.dim = static_cast<int>(beta.rows());
  rep.alphas = std::move(alphas);
  rep.beta = std::move(beta);
  rep.eta = Vector::Zero(rep.dim);
  rep.eta(0) = 1.0;
  return rep;
}

/// Reduced (d+1)-dimensional representation on basis |0>,...,|d>:
///   alpha_j = |0><j| + |j><0|,  beta = 2|0><0| - I,  eta = |0>.
inline SpinRep build_reduced_rep(int d) {
  detail::check_dim_range(d, "build_reduced_rep");
  SpinRep rep;
  rep.kind = RepKind::Reduced;
  rep.d = d;
  rep.dim = d + 1;
  rep.alphas.reserve(static_cast<std::size_t>(d));
  for (int j = 1; j <= d; ++j) {
    Matrix a = Matrix::Zero(rep.dim, rep.dim);
    a(0, j) = 1.0;
    a(j, 0) = 1.0;
    rep.alphas.push_back(std::move(a));
  }
  rep.beta = -Matrix::Identity(rep.dim, rep.dim);
  rep.beta(0, 0) = 1.0;
  rep.eta = Vector::Zero(rep.dim);
  rep.eta(0) = 1.0;
  return rep;
}

struct AlgebraReport {
  double max_violation = 0.0;
  bool pass = false;
};

/// Largest entry-wise deviation from the anticommutation relations taken as
/// full matrix identities (the strong form only full reps satisfy).
inline double matrix_identity_violation(const SpinRep& rep) {
  const Matrix id = Matrix::Identity(rep.dim, rep.dim);
  double v = 0.0;
  const auto n = rep.alphas.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j; k < n; ++k) {
      const Matrix anti = rep.alphas[j] * rep.alphas[k] + rep.alphas[k] * rep.alphas[j];
      const Matrix want = (j == k) ? Matrix(2.0 * id) : Matrix(Matrix::Zero(rep.dim, rep.dim));
      v = std::max(v, (anti - want).cwiseAbs().maxCoeff());
    }
    const Matrix ab = rep.alphas[j] * rep.beta + rep.beta * rep.alphas[j];
    v = std::max(v, ab.cwiseAbs().maxCoeff());
  }
  v = std::max(v, (rep.beta * rep.beta - id).cwiseAbs().maxCoeff());
  for (const auto& a : rep.alphas) v = std::max(v, (a - a.adjoint()).cwiseAbs().maxCoeff());
  v = std::max(v, (rep.beta - rep.beta.adjoint()).cwiseAbs().maxCoeff());
  return v;
}

/// Largest component-wise deviation of the relations applied to eta:
/// {alpha_j, alpha_k} eta = 2 delta_jk eta, {alpha_j, beta} eta = 0,
/// beta eta = eta. This weaker form is what reduced reps guarantee.
inline double eta_relation_violation(const SpinRep& rep) {
  double v = 0.0;
  const auto n = rep.alphas.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j; k < n; ++k) {
      Vector r = rep.alphas[j] * (rep.alphas[k] * rep.eta) +
                 rep.alphas[k] * (rep.alphas[j] * rep.eta);
      if (j == k) r -= 2.0 * rep.eta;
      v = std::max(v, r.cwiseAbs().maxCoeff());
    }
    const Vector ab =
        rep.alphas[j] * (rep.beta * rep.eta) + rep.beta * (rep.alphas[j] * rep.eta);
    v = std::max(v, ab.cwiseAbs().maxCoeff());
  }
  v = std::max(v, (rep.beta * rep.eta - rep.eta).cwiseAbs().maxCoeff());
  for (const auto& a : rep.alphas) v = std::max(v, (a - a.adjoint()).cwiseAbs().maxCoeff());
  v = std::max(v, (rep.beta - rep.beta.adjoint()).cwiseAbs().maxCoeff());
  return v;
}

/// Checks the algebra a rep claims: matrix identities for Full, relations on
/// eta for Reduced. Construction makes both exact, so pass means <= 1e-14.
inline AlgebraReport verify_algebra(const SpinRep& rep) {
  AlgebraReport report;
  report.max_violation = (rep.kind == RepKind::Full) ? matrix_identity_violation(rep)
                                                     : eta_relation_violation(rep);
  report.pass = report.max_violation <= 1e-14;
  return report;
}

/// Momentum-space spin block B(k) = omega * sum_j sin(k_j) alpha_j
///                                 + gamma * c(k) * beta
/// with c(k) = 2 sum_j (1 - cos k_j).
inline Matrix momentum_block(const SpinRep& rep, const std::vector<double>& k, double omega,
                             double gamma) {
  if (static_cast<int>(k.size()) != rep.d)
    throw std::invalid_argument("momentum_block: momentum dimension mismatch");
  double c = 0.0;
  Matrix b = Matrix::Zero(rep.dim, rep.dim);
  for (int j = 0; j < rep.d; ++j) {
    b += omega * std::sin(k[static_cast<std::size_t>(j)]) * rep.alphas[static_cast<std::size_t>(j)];
    c += 2.0 * (1.0 - std::cos(k[static_cast<std::size_t>(j)]));
  }
  b += gamma * c * rep.beta;
  return b;
}

}  // namespace diracwalk
