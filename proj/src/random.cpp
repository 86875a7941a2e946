#include "finsler/random.hpp"

#include <cmath>

namespace finsler::random {

double MatrixSampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Complex MatrixSampler::complex_gaussian() {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  const double re = nd(rng_);
  const double im = nd(rng_);
  return {re, im};
}

Matrix MatrixSampler::gaussian(Eigen::Index n) {
  Matrix x(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = scale * complex_gaussian();
  }
  return x;
}

Matrix MatrixSampler::hermitian(Eigen::Index n) {
  const Matrix x = gaussian(n);
  return 0.5 * (x + x.adjoint());
}

Matrix MatrixSampler::skew_hermitian(Eigen::Index n) {
  const Matrix x = gaussian(n);
  return 0.5 * (x - x.adjoint());
}

Matrix MatrixSampler::unitary(Eigen::Index n) {
  const Eigen::HouseholderQR<Matrix> qr(gaussian(n));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(i) *= d / mag;
  }
  return q;
}

Matrix MatrixSampler::normal(Eigen::Index n) {
  const Matrix u = unitary(n);
  Eigen::VectorXcd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = complex_gaussian();
  return u * z.asDiagonal() * u.adjoint();
}

Matrix MatrixSampler::partial_isometry(Eigen::Index n, Eigen::Index rank) {
  const Matrix u = unitary(n);
  const Matrix w = unitary(n);
  return u.leftCols(rank) * w.leftCols(rank).adjoint();
}

Matrix MatrixSampler::rank_deficient(Eigen::Index n, Eigen::Index rank) {
  Matrix a(n, rank);
  Matrix b(rank, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = scale * complex_gaussian();
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = complex_gaussian();
  return a * b;
}

Matrix MatrixSampler::positive(Eigen::Index n, double cond) {
  const Matrix u = unitary(n);
  RealVector lam(n);
  const double span = std::log(cond);
  for (Eigen::Index i = 0; i < n; ++i) lam(i) = std::exp(-uniform(0.0, span));
  return u * lam.cast<Complex>().asDiagonal() * u.adjoint();
}

Matrix MatrixSampler::invertible(Eigen::Index n, double lo, double hi) {
  const Matrix u = unitary(n);
  const Matrix w = unitary(n);
  RealVector s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = uniform(lo, hi);
  return u * s.cast<Complex>().asDiagonal() * w.adjoint();
}

Matrix with_operator_norm(const Matrix& x, double target) {
  const double nrm = linalg::operator_norm(x);
  if (nrm == 0.0) return x;
  return x * (target / nrm);
}

}  // namespace finsler::random
