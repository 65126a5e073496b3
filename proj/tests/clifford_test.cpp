#include "diracwalk/clifford.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace diracwalk;

namespace {

bool entry_in_exact_set(const Complex& z) {
  auto is = [&](double re, double im) { return z.real() == re && z.imag() == im; };
  return is(0, 0) || is(1, 0) || is(-1, 0) || is(0, 1) || is(0, -1);
}

}  // namespace

TEST(Clifford, FullRepDimensions) {
  const int want[] = {0, 2, 2, 4, 4, 8, 8};  // 2^ceil(d/2)
  for (int d = 1; d <= 6; ++d) {
    const auto rep = build_full_rep(d);
    EXPECT_EQ(rep.dim, want[d]) << "d=" << d;
    EXPECT_EQ(static_cast<int>(rep.alphas.size()), d);
    EXPECT_EQ(rep.eta(0), Complex(1.0, 0.0));
  }
  EXPECT_THROW(build_full_rep(0), std::invalid_argument);
  EXPECT_THROW(build_full_rep(7), std::invalid_argument);
}

TEST(Clifford, FullRepExactAlgebra) {
  for (int d = 1; d <= 6; ++d) {
    const auto rep = build_full_rep(d);
    const auto report = verify_algebra(rep);
    EXPECT_TRUE(report.pass);
    // entries are in {0, +-1, +-i}, so the identities hold with no rounding
    EXPECT_EQ(report.max_violation, 0.0) << "d=" << d;
  }
}

TEST(Clifford, GeneratorEntriesExact) {
  for (int d = 1; d <= 6; ++d) {
    for (const auto& rep : {build_full_rep(d), build_reduced_rep(d)}) {
      for (const auto& a : rep.alphas)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
          for (Eigen::Index j = 0; j < a.cols(); ++j) EXPECT_TRUE(entry_in_exact_set(a(i, j)));
      for (Eigen::Index i = 0; i < rep.beta.rows(); ++i)
        for (Eigen::Index j = 0; j < rep.beta.cols(); ++j)
          EXPECT_TRUE(entry_in_exact_set(rep.beta(i, j)));
    }
  }
}

TEST(Clifford, ReducedRepStructure) {
  const auto rep = build_reduced_rep(3);
  EXPECT_EQ(rep.dim, 4);
  // beta fixes |0> and flips |j>
  Vector e = Vector::Zero(4);
  e(0) = 1.0;
  EXPECT_EQ((rep.beta * e - e).cwiseAbs().maxCoeff(), 0.0);
  for (int j = 1; j <= 3; ++j) {
    e.setZero();
    e(j) = 1.0;
    EXPECT_EQ((rep.beta * e + e).cwiseAbs().maxCoeff(), 0.0);
  }
  EXPECT_EQ(verify_algebra(rep).max_violation, 0.0);
}

TEST(Clifford, ReducedRepEtaRelations) {
  for (int d = 1; d <= 6; ++d) {
    const auto rep = build_reduced_rep(d);
    EXPECT_EQ(rep.dim, d + 1);
    EXPECT_TRUE(verify_algebra(rep).pass);
    EXPECT_EQ(eta_relation_violation(rep), 0.0);
  }
}

TEST(Clifford, ReducedRepFailsOffEta) {
  // {alpha_1, alpha_2}|1> = |2> by direct evaluation, so the relations do
  // not hold as matrix identities for d >= 2
  const auto rep = build_reduced_rep(3);
  Vector e1 = Vector::Zero(4);
  e1(1) = 1.0;
  const Vector anti =
      rep.alphas[0] * (rep.alphas[1] * e1) + rep.alphas[1] * (rep.alphas[0] * e1);
  Vector e2 = Vector::Zero(4);
  e2(2) = 1.0;
  EXPECT_EQ((anti - e2).cwiseAbs().maxCoeff(), 0.0);
  // the worst identity violation is {alpha_j, alpha_j} = 2(|0><0| + |j><j|),
  // which misses 2I by 2 on the remaining diagonal
  EXPECT_EQ(matrix_identity_violation(rep), 2.0);
  for (int d = 2; d <= 6; ++d)
    EXPECT_GT(matrix_identity_violation(build_reduced_rep(d)), 0.5) << "d=" << d;
}

TEST(Clifford, ReducedD1CoincidesWithFull) {
  // for d = 1 the reduced construction is a genuine 2x2 Clifford pair
  const auto rep = build_reduced_rep(1);
  EXPECT_EQ(rep.dim, 2);
  EXPECT_EQ(matrix_identity_violation(rep), 0.0);
}

TEST(Clifford, ReducedD2OnEta) {
  const auto rep = build_reduced_rep(2);
  const Vector z1 = rep.alphas[0] * (rep.alphas[1] * rep.eta) +
                    rep.alphas[1] * (rep.alphas[0] * rep.eta);
  EXPECT_EQ(z1.cwiseAbs().maxCoeff(), 0.0);
  const Vector z2 = 2.0 * (rep.alphas[0] * (rep.alphas[0] * rep.eta)) - 2.0 * rep.eta;
  EXPECT_EQ(z2.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Clifford, MomentumBlockSquaresToDispersion) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uk(-3.1, 3.1);
  for (int d = 1; d <= 5; ++d) {
    const auto rep = build_full_rep(d);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> k(static_cast<std::size_t>(d));
      for (auto& kj : k) kj = uk(rng);
      const double omega = 0.7, gamma = 0.4;
      double ss = 0.0, cc = 0.0;
      for (double kj : k) {
        ss += std::sin(kj) * std::sin(kj);
        cc += 2.0 * (1.0 - std::cos(kj));
      }
      const double e2 = omega * omega * ss + gamma * gamma * cc * cc;
      const Matrix b = momentum_block(rep, k, omega, gamma);
      EXPECT_LT((b - b.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
      EXPECT_LT(std::abs(b.trace()), 1e-13);
      const Matrix b2 = b * b;
      EXPECT_LT((b2 - e2 * Matrix::Identity(rep.dim, rep.dim)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Clifford, MomentumBlockEigenvaluesPaired) {
  const auto rep = build_full_rep(3);
  const std::vector<double> k = {0.9, -1.3, 2.2};
  const Matrix b = momentum_block(rep, k, 1.1, 0.3);
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  double ss = 0.0, cc = 0.0;
  for (double kj : k) {
    ss += std::sin(kj) * std::sin(kj);
    cc += 2.0 * (1.0 - std::cos(kj));
  }
  const double e = std::sqrt(1.1 * 1.1 * ss + 0.3 * 0.3 * cc * cc);
  ASSERT_EQ(es.eigenvalues().size(), 4);
  EXPECT_NEAR(es.eigenvalues()(0), -e, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(1), -e, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(2), e, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(3), e, 1e-12);
}

TEST(Clifford, ReducedBlockSquaresOnlyOnEta) {
  const auto rep = build_reduced_rep(2);
  const std::vector<double> k = {1.1, 0.4};
  const double omega = 0.8, gamma = 0.5;
  double ss = 0.0, cc = 0.0;
  for (double kj : k) {
    ss += std::sin(kj) * std::sin(kj);
    cc += 2.0 * (1.0 - std::cos(kj));
  }
  const double e2 = omega * omega * ss + gamma * gamma * cc * cc;
  const Matrix b = momentum_block(rep, k, omega, gamma);
  const Matrix b2 = b * b;
  EXPECT_LT((b2 * rep.eta - e2 * rep.eta).cwiseAbs().maxCoeff(), 1e-14);
  Vector off = Vector::Zero(rep.dim);
  off(1) = 1.0;
  EXPECT_GT((b2 * off - e2 * off).cwiseAbs().maxCoeff(), 1e-3);
}
