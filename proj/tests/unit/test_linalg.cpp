#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "finsler/random.hpp"
#include "finsler/variational.hpp"
#include "support.hpp"

using namespace finsler;
using finsler::testing::diag;
using finsler::testing::mat2;
using linalg::PositiveMatrix;

namespace {

// tau((x* x)^(p/2)) by repeated multiplication, for even p.
double p_norm_oracle(const Matrix& x, int p) {
  Matrix h = x.adjoint() * x;
  Matrix acc = Matrix::Identity(x.rows(), x.cols());
  for (int k = 0; k < p / 2; ++k) acc = acc * h;
  return std::pow(acc.trace().real() / static_cast<double>(x.rows()), 1.0 / p);
}

}  // namespace

TEST(NormalizedTrace, IdentityHasTraceOne) {
  EXPECT_DOUBLE_EQ(linalg::normalized_trace(linalg::identity(5)), 1.0);
  EXPECT_DOUBLE_EQ(linalg::normalized_trace(diag({1.0, 2.0, 3.0, Complex(6.0, 4.0)})), 3.0);
}

TEST(PNorm, MatchesTracePowerOracle) {
  random::MatrixSampler s(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = s.gaussian(1 + trial % 6);
    for (int p : {2, 4, 6, 8}) {
      EXPECT_NEAR(linalg::p_norm(x, p), p_norm_oracle(x, p), 1e-12) << "p = " << p;
    }
  }
}

TEST(PNorm, UnitaryInvarianceAndNormalisation) {
  random::MatrixSampler s(2);
  const Matrix x = s.gaussian(4);
  const Matrix u = s.unitary(4);
  const Matrix w = s.unitary(4);
  EXPECT_NEAR(linalg::p_norm(u * x * w, 4), linalg::p_norm(x, 4), 1e-12);
  EXPECT_NEAR(linalg::p_norm(linalg::identity(7), 6), 1.0, 1e-15);
  EXPECT_EQ(linalg::p_norm(Matrix::Zero(3, 3), 4), 0.0);
  EXPECT_THROW(linalg::p_norm(x, 0.5), Error);
}

TEST(PNorm, IncreasesWithPUnderNormalisedTrace) {
  random::MatrixSampler s(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = s.gaussian(4);
    EXPECT_LE(linalg::p_norm(x, 2), linalg::p_norm(x, 4) + 1e-14);
    EXPECT_LE(linalg::p_norm(x, 4), linalg::p_norm(x, 6) + 1e-14);
    EXPECT_LE(linalg::p_norm(x, 6), linalg::operator_norm(x) + 1e-14);
  }
}

TEST(TraceInner, MatchesDefinitionAndRejectsShapes) {
  random::MatrixSampler s(4);
  const Matrix x = s.gaussian(3);
  const Matrix y = s.gaussian(3);
  EXPECT_NEAR(linalg::trace_inner(x, y), (y.adjoint() * x).trace().real() / 3.0, 1e-15);
  EXPECT_NEAR(linalg::trace_inner(x, x), std::pow(linalg::p_norm(x, 2), 2), 1e-14);
  EXPECT_THROW(linalg::trace_inner(x, s.gaussian(2)), Error);
}

TEST(SingularSystem, RankFollowsKernelConvention) {
  random::MatrixSampler s(5);
  EXPECT_EQ(linalg::singular_system(s.rank_deficient(5, 2)).rank, 2);
  EXPECT_EQ(linalg::singular_system(s.gaussian(5)).rank, 5);
  EXPECT_EQ(linalg::singular_system(Matrix::Zero(3, 3)).rank, 0);
  const Matrix tiny = diag({1.0, 1e-12});
  EXPECT_EQ(linalg::singular_system(tiny).rank, 1);
  EXPECT_FALSE(linalg::is_invertible(tiny));
  EXPECT_TRUE(linalg::is_invertible(diag({1.0, 1e-9})));
}

TEST(PositiveMatrix, EigenvaluesDecreaseAndReconstruct) {
  random::MatrixSampler s(6);
  const PositiveMatrix a(s.positive(5, 100.0));
  const auto& lam = a.eigenvalues();
  for (Eigen::Index i = 1; i < lam.size(); ++i) EXPECT_GE(lam(i - 1), lam(i));
  const Matrix& v = a.eigenvectors();
  EXPECT_MATRIX_NEAR(v * lam.cast<Complex>().asDiagonal() * v.adjoint(), a.matrix(), 1e-13);
}

TEST(PositiveMatrix, RejectsNonHermitianAndNegative) {
  EXPECT_THROW(PositiveMatrix(mat2(1.0, 1.0, 0.0, 1.0)), Error);
  try {
    PositiveMatrix(diag({1.0, -0.5}));
    FAIL() << "expected not_positive";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_positive);
  }
  const PositiveMatrix clamped(diag({1.0, -1e-14}));
  EXPECT_EQ(clamped.eigenvalues()(1), 0.0);
}

TEST(Polar, FactorsReproduceInputWithKernelConvention) {
  random::MatrixSampler s(7);
  for (Eigen::Index rank : {1, 2, 4}) {
    const Matrix x = s.rank_deficient(4, rank);
    const auto f = linalg::polar_decompose(x);
    EXPECT_MATRIX_NEAR(f.omega * f.modulus.matrix(), x, 1e-12);
    const Matrix initial = f.omega.adjoint() * f.omega;
    EXPECT_MATRIX_NEAR(initial * initial, initial, 1e-12);
    EXPECT_NEAR(initial.trace().real(), static_cast<double>(rank), 1e-10);
    // omega vanishes on ker |x|
    EXPECT_MATRIX_NEAR(f.omega * (linalg::identity(4) - initial), Matrix::Zero(4, 4), 1e-12);
    EXPECT_MATRIX_NEAR(f.modulus.matrix() * f.modulus.matrix(), x.adjoint() * x, 1e-12);
  }
}

TEST(Polar, InvertibleInputGivesUnitaryFactor) {
  random::MatrixSampler s(8);
  const auto f = linalg::polar_decompose(s.invertible(5));
  EXPECT_MATRIX_NEAR(f.omega.adjoint() * f.omega, linalg::identity(5), 1e-12);
}

TEST(PositivePower, SquareRootAndIdentityExponent) {
  random::MatrixSampler s(9);
  const PositiveMatrix a(s.positive(4, 50.0));
  const Matrix r = linalg::positive_power(a, 0.5).matrix();
  EXPECT_MATRIX_NEAR(r * r, a.matrix(), 1e-13);
  EXPECT_MATRIX_NEAR(linalg::positive_power(a, 1.0).matrix(), a.matrix(), 1e-13);
  const PositiveMatrix singular(diag({4.0, 0.0}));
  EXPECT_MATRIX_NEAR(linalg::positive_power(singular, 0.25).matrix(), diag({std::sqrt(2.0), 0.0}),
                     1e-14);
  EXPECT_THROW(linalg::positive_power(a, 0.0), Error);
}

TEST(Expm, AgreesWithEigenMatrixFunctions) {
  random::MatrixSampler s(10);
  for (double scale : {0.01, 0.5, 3.0, 12.0}) {
    const Matrix x = scale * s.gaussian(5);
    const Matrix oracle = x.exp();
    EXPECT_LE(finsler::testing::max_abs(linalg::expm(x) - oracle), 1e-12 * (1.0 + finsler::testing::max_abs(oracle)))
        << "scale " << scale;
  }
}

TEST(Expm, ClosedFormCases) {
  EXPECT_MATRIX_NEAR(linalg::expm(mat2(0.0, 1.0, 0.0, 0.0)), mat2(1.0, 1.0, 0.0, 1.0), 1e-15);
  EXPECT_MATRIX_NEAR(linalg::expm(diag({1.0, Complex(0.0, 2.0)})),
                     diag({std::exp(1.0), std::exp(Complex(0.0, 2.0))}), 1e-14);
  random::MatrixSampler s(11);
  const Matrix a = s.gaussian(4);
  EXPECT_MATRIX_NEAR(linalg::expm(a) * linalg::expm(-a), linalg::identity(4), 1e-13);
}

TEST(Logm, InvertsExpmAndDetectsBranchCut) {
  random::MatrixSampler s(12);
  const Matrix h = random::with_operator_norm(s.gaussian(4), 0.9);
  EXPECT_MATRIX_NEAR(linalg::logm_principal(linalg::expm(h)), h, 1e-12);
  const Matrix g = s.invertible(4);
  EXPECT_MATRIX_NEAR(linalg::expm(linalg::logm_principal(g)), g, 1e-12);
  try {
    linalg::logm_principal(diag({-1.0, 1.0}));
    FAIL() << "expected branch_cut";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::branch_cut);
  }
}

TEST(SpectrumOf, ClustersWithMultiplicities) {
  const PositiveMatrix a(diag({3.0, 1.0, 3.0 * (1 + 1e-9), 0.0, 0.0}));
  const auto spec = linalg::spectrum_of(a, 1e-6);
  ASSERT_EQ(spec.clusters.size(), 3u);
  EXPECT_NEAR(spec.clusters[0].value, 3.0, 1e-8);
  EXPECT_EQ(spec.multiplicities(), (std::vector<int>{2, 1, 2}));
  EXPECT_EQ(spec.clusters[2].value, 0.0);
  EXPECT_EQ(linalg::spectrum_of(a, 1e-12).multiplicities(), (std::vector<int>{1, 1, 1, 2}));
}

TEST(MatrixPower, MatchesRepeatedProduct) {
  random::MatrixSampler s(13);
  const Matrix h = s.gaussian(3);
  EXPECT_MATRIX_NEAR(variational::matrix_power(h, 0), linalg::identity(3), 0.0);
  EXPECT_MATRIX_NEAR(variational::matrix_power(h, 5), h * h * h * h * h, 1e-13);
}
