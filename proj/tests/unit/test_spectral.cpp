#include <cmath>

#include "finsler/finite_difference.hpp"
#include "finsler/random.hpp"
#include "finsler/spectral.hpp"
#include "support.hpp"

using namespace finsler;
using finsler::testing::diag;
using linalg::PositiveMatrix;
namespace sp = finsler::spectral;

namespace {

// Positive matrix with well separated eigenvalues 4, 2, 1, 0.5 (scaled).
PositiveMatrix distinct_positive(random::MatrixSampler& s, Eigen::Index n) {
  const Matrix u = s.unitary(n);
  RealVector lam(n);
  for (Eigen::Index i = 0; i < n; ++i) lam(i) = std::pow(2.0, 2 - static_cast<double>(i));
  return PositiveMatrix(u * lam.cast<Complex>().asDiagonal() * u.adjoint());
}

struct Flow {
  std::vector<double> times;
  std::vector<sp::ProjectionFrame> frames;
};

Flow sample_flow(const PositiveMatrix& b0, const Matrix& K, double alpha) {
  Flow f;
  for (const auto& smp : sp::integrate_b(b0, K, alpha, 1.0, {})) {
    f.times.push_back(smp.t);
    f.frames.push_back(sp::projection_frame(smp.b));
  }
  return f;
}

}  // namespace

TEST(Gamma, KnownValuesAndDomain) {
  EXPECT_NEAR(sp::gamma_coefficient(8.0, 1.0, 2.0 / 3.0), 1.0 / 7.0, 1e-15);
  EXPECT_EQ(sp::gamma_coefficient(5.0, 0.3, 1.0), 0.0);
  EXPECT_THROW(sp::gamma_coefficient(2.0, 2.0, 0.75), Error);
  EXPECT_THROW(sp::gamma_coefficient(0.0, 2.0, 0.75), Error);
}

TEST(Gamma, MatchesQuotientFormula) {
  for (double li : {0.1, 2.0, 9.0}) {
    for (double ll : {0.05, 1.0, 30.0}) {
      const double a = 0.8;
      const double quotient =
          (std::pow(li, 1 - a) - std::pow(ll, 1 - a)) / (li - ll) * std::pow(ll, a);
      EXPECT_NEAR(sp::gamma_coefficient(li, ll, a), quotient, 1e-13);
    }
  }
}

TEST(Gamma, BoundedByOne) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> logu(-10.0, 10.0);
  std::uniform_real_distribution<double> au(0.5, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const double li = std::exp(logu(rng));
    const double ll = std::exp(logu(rng));
    double a = au(rng);
    if (a == 0.5) a = 1.0;
    if (li == ll) continue;
    EXPECT_LE(sp::gamma_coefficient(li, ll, a), 1.0 + 1e-12);
  }
}

TEST(ProjectionFrame, ResolutionOfIdentity) {
  random::MatrixSampler s(1);
  const Matrix u = s.unitary(5);
  const PositiveMatrix b(u * diag({3.0, 3.0, 1.0, 0.0, 0.0}) * u.adjoint());
  const auto f = sp::projection_frame(b);
  ASSERT_EQ(f.projections.size(), 2u);
  EXPECT_NEAR(f.lambdas(0), 3.0, 1e-12);
  Matrix sum = f.kernel_projection;
  for (std::size_t i = 0; i < f.projections.size(); ++i) {
    sum += f.projections[i];
    for (std::size_t j = 0; j < f.projections.size(); ++j) {
      const Matrix expected = i == j ? f.projections[i] : Matrix::Zero(5, 5);
      EXPECT_MATRIX_NEAR(f.projections[i] * f.projections[j], expected, 1e-12);
    }
  }
  EXPECT_MATRIX_NEAR(sum, linalg::identity(5), 1e-12);
  EXPECT_NEAR(f.kernel_projection.trace().real(), 2.0, 1e-12);
  EXPECT_EQ(f.complete().size(), 3u);
}

TEST(Resolvent, MatchesDirectInverse) {
  random::MatrixSampler s(2);
  const Matrix u = s.unitary(4);
  const PositiveMatrix b(u * diag({2.0, 1.0, 1.0, 0.0}) * u.adjoint());
  const auto f = sp::projection_frame(b);
  for (Complex z : {Complex(3.0, 0.5), Complex(-1.0, 0.0), Complex(0.5, -2.0)}) {
    const Matrix direct = (z * linalg::identity(4) - b.matrix()).inverse();
    EXPECT_MATRIX_NEAR(sp::resolvent_from_frame(f, z), direct, 1e-10);
  }
}

TEST(IntegrateB, ZeroGeneratorIsStationary) {
  random::MatrixSampler s(3);
  const PositiveMatrix b0(s.positive(4, 10.0));
  const auto out = sp::integrate_b(b0, Matrix::Zero(4, 4), 0.75, 1.0, {});
  EXPECT_MATRIX_NEAR(out.back().b.matrix(), b0.matrix(), 1e-15);
}

TEST(IntegrateB, AlphaOneIsUnitaryConjugation) {
  random::MatrixSampler s(4);
  const PositiveMatrix b0(s.positive(4, 10.0));
  const Matrix k = s.skew_hermitian(4);
  const Matrix K = 2.0 * k;
  const auto out = sp::integrate_b(b0, K, 1.0, 1.0, {});
  const Matrix exact = linalg::expm(-K) * b0.matrix() * linalg::expm(K);
  EXPECT_MATRIX_NEAR(out.back().b.matrix(), exact, 1e-6);
}

TEST(IntegrateB, SpectrumAndMultiplicitiesConserved) {
  random::MatrixSampler s(5);
  const Matrix u = s.unitary(4);
  const PositiveMatrix b0(u * diag({2.0, 2.0, 0.5, 0.1}) * u.adjoint());
  const Matrix K = s.skew_hermitian(4);
  const auto sig0 = linalg::spectrum_of(b0, 1e-6).multiplicities();
  for (const auto& smp : sp::integrate_b(b0, K, 2.0 / 3.0, 1.0, {})) {
    EXPECT_LE((smp.b.eigenvalues() - b0.eigenvalues()).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_EQ(linalg::spectrum_of(smp.b, 1e-6).multiplicities(), sig0);
  }
}

TEST(IntegrateB, Preconditions) {
  random::MatrixSampler s(6);
  const PositiveMatrix b0(s.positive(3, 10.0));
  EXPECT_THROW(sp::integrate_b(b0, s.hermitian(3), 0.75, 1.0, {}), Error);
  EXPECT_THROW(sp::integrate_b(b0, s.skew_hermitian(3), 0.5, 1.0, {}), Error);
  EXPECT_THROW(sp::integrate_b(b0, s.skew_hermitian(3), 1.2, 1.0, {}), Error);
}

TEST(ProjectionRhs, AlphaOneAndZeroGenerator) {
  random::MatrixSampler s(7);
  const auto f = sp::projection_frame(distinct_positive(s, 4));
  const Matrix K = s.skew_hermitian(4);
  for (std::size_t i = 0; i < f.projections.size(); ++i) {
    const Matrix& p = f.projections[i];
    // Along b' = [b, K] the projections move by p' = [p, K].
    EXPECT_MATRIX_NEAR(sp::projection_rhs(f, K, 1.0, i), p * K - K * p, 1e-13);
    EXPECT_MATRIX_NEAR(sp::projection_rhs(f, Matrix::Zero(4, 4), 0.75, i), Matrix::Zero(4, 4),
                       0.0);
    const Matrix d = sp::projection_rhs(f, K, 0.75, i);
    EXPECT_MATRIX_NEAR(d, d.adjoint(), 1e-13);
  }
  EXPECT_THROW(sp::projection_rhs(f, K, 0.75, 4), Error);
}

TEST(ProjectionRhs, MatchesFiniteDifferenceAlongFlow) {
  random::MatrixSampler s(8);
  const double alpha = 2.0 / 3.0;
  const PositiveMatrix b0 = distinct_positive(s, 4);
  const Matrix K = s.skew_hermitian(4);
  const Flow f = sample_flow(b0, K, alpha);
  std::vector<Matrix> series(f.frames.size());
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < f.frames.size(); ++k) series[k] = f.frames[k].projections[i];
    for (std::size_t k = 0; k < f.frames.size(); k += 50) {
      const Matrix fdp = fd::derivative_at<Matrix>(f.times, series, k);
      EXPECT_MATRIX_NEAR(sp::projection_rhs(f.frames[k], K, alpha, i), fdp, 1e-5);
    }
  }
}

TEST(TransportFrame, ConstantProjectionsGiveIdentity) {
  const std::vector<double> t{0.0, 0.1, 0.2, 0.3};
  const std::vector<Matrix> fam{diag({1.0, 0.0}), diag({0.0, 1.0})};
  const auto tf = sp::transport_frame(t, {fam, fam, fam, fam});
  for (const auto& u : tf.u) EXPECT_MATRIX_NEAR(u, linalg::identity(2), 1e-15);
  for (const auto& l : tf.lambda_op) EXPECT_MATRIX_NEAR(l, Matrix::Zero(2, 2), 1e-15);
}

TEST(TransportFrame, UndoesSyntheticRotation) {
  random::MatrixSampler s(9);
  const Matrix A = s.skew_hermitian(4);
  const auto f0 = sp::projection_frame(distinct_positive(s, 4));
  std::vector<double> t;
  std::vector<std::vector<Matrix>> families;
  for (int k = 0; k <= 1000; ++k) {
    t.push_back(1e-3 * k);
    const Matrix e = linalg::expm(t.back() * A);
    std::vector<Matrix> fam;
    for (const auto& p : f0.projections) fam.push_back(e * p * e.adjoint());
    families.push_back(std::move(fam));
  }
  const auto tf = sp::transport_frame(t, families);
  EXPECT_LE(sp::transport_deviation(tf, families), 1e-7);
  for (const auto& l : tf.lambda_op) EXPECT_LE(linalg::operator_norm(l + l.adjoint()), 1e-10);
  for (const auto& u : tf.u) EXPECT_MATRIX_NEAR(u.adjoint() * u, linalg::identity(4), 1e-12);
}

TEST(TransportFrame, AlongAuxiliaryFlow) {
  random::MatrixSampler s(10);
  const Flow f = sample_flow(distinct_positive(s, 4), s.skew_hermitian(4), 2.0 / 3.0);
  std::vector<std::vector<Matrix>> families;
  for (const auto& fr : f.frames) families.push_back(fr.complete());
  const auto tf = sp::transport_frame(f.times, families);
  EXPECT_LE(sp::transport_deviation(tf, families), 1e-6);
}

TEST(TransportFrame, RankChangeBreaksFrame) {
  const std::vector<double> t{0.0, 0.1, 0.2};
  const std::vector<Matrix> a{diag({1.0, 0.0, 0.0}), diag({0.0, 1.0, 1.0})};
  const std::vector<Matrix> b{diag({1.0, 1.0, 0.0}), diag({0.0, 0.0, 1.0})};
  try {
    sp::transport_frame(t, {a, a, b});
    FAIL() << "expected frame_break";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::frame_break);
  }
  EXPECT_THROW(sp::transport_frame(t, {a, a, {a[0]}}), Error);
}

TEST(HandOff, MomentumModulusFollowsAuxiliaryFlow) {
  // b = w* w obeys b' = [b^alpha, w - w*] when w follows the Hamilton flow.
  random::MatrixSampler s(11);
  const variational::PMetric m(4);
  const variational::Momentum w0{random::with_operator_norm(s.invertible(3), 1.0)};
  const auto ws = flow::integrate_hamilton(w0, m, 1.0, {});
  const auto bs = sp::integrate_b(PositiveMatrix::gram(w0.value), w0.value - w0.value.adjoint(),
                                  m.alpha(), 1.0, {});
  const Matrix& wT = ws.back().w.value;
  EXPECT_MATRIX_NEAR(bs.back().b.matrix(), wT.adjoint() * wT, 1e-8);
}

TEST(Equivariance, NormalVelocityIsTrivial) {
  random::MatrixSampler s(12);
  const auto traj = flow::geodesic_ivp(GroupElement(s.invertible(3)),
                                       random::with_operator_norm(s.normal(3), 1.0),
                                       variational::PMetric(4), 1.0, {});
  const auto rep = sp::equivariance_check(traj);
  EXPECT_TRUE(rep.frame_ok);
  EXPECT_LE(rep.spectrum_drift, 1e-10);
  EXPECT_LE(rep.transport_deviation, 1e-8);
  EXPECT_LE(rep.modulus_deviation, 1e-8);
}

TEST(Equivariance, GenericP4Velocity) {
  random::MatrixSampler s(13);
  const auto traj = flow::geodesic_ivp(GroupElement(s.invertible(3)),
                                       random::with_operator_norm(s.gaussian(3), 1.0),
                                       variational::PMetric(4), 1.0, {});
  const auto rep = sp::equivariance_check(traj);
  EXPECT_TRUE(rep.frame_ok);
  EXPECT_TRUE(rep.multiplicity_stable);
  EXPECT_TRUE(rep.isometry_ranks_stable);
  EXPECT_LE(rep.spectrum_drift, 1e-8);
  EXPECT_LE(rep.modulus_deviation, 1e-6);
  EXPECT_LE(rep.transport_deviation, 1e-6);
  EXPECT_LE(rep.gamma_max, 1.0);
}
