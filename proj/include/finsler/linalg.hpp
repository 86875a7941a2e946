#pragma once

// Dense complex linear algebra on M_N(C): normalized trace, Schatten p-norms,
// polar decomposition with an explicit kernel convention, functional calculus
// for positive matrices, and the matrix exponential / principal logarithm.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "finsler/error.hpp"

namespace finsler {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

}  // namespace finsler

namespace finsler::linalg {

/// Singular values below kRankTol * sigma_max are treated as exact zeros.
inline constexpr double kRankTol = 1e-10;
/// Relative tolerance on ||a - a*|| for matrices claimed self-adjoint.
inline constexpr double kHermTol = 1e-10;
/// Relative floor below which eigenvalues of a positive matrix are zero.
inline constexpr double kPsdTol = 1e-10;

Matrix identity(Eigen::Index n);

/// Largest singular value.
double operator_norm(const Matrix& x);

/// Re(trace(x)) / N, so that the identity has trace one.
double normalized_trace(const Matrix& x);

/// (tau |x|^p)^(1/p), computed from singular values. Requires p >= 1.
double p_norm(const Matrix& x, double p);

/// Re trace(y* x) / N.
double trace_inner(const Matrix& x, const Matrix& y);

Matrix commutator(const Matrix& a, const Matrix& b);

/// Thin view of an SVD x = U diag(sigma) V*, sigma decreasing, with `rank`
/// counting the singular values kept under the kernel convention.
struct SingularSystem {
  Matrix u;
  RealVector sigma;
  Matrix v;
  Eigen::Index rank = 0;
};

SingularSystem singular_system(const Matrix& x, double rank_tol = kRankTol);

/// Decreasing singular values.
RealVector singular_values(const Matrix& x);

/// True when sigma_min > tol * sigma_max.
bool is_invertible(const Matrix& g, double tol = kRankTol);

/// Self-adjoint matrix with non-negative spectrum. Construction symmetrizes
/// the input, caches its eigensystem and zeroes eigenvalues within
/// kPsdTol * ||a|| of zero; anything more negative is rejected.
class PositiveMatrix {
 public:
  explicit PositiveMatrix(const Matrix& a);

  /// x* x
  static PositiveMatrix gram(const Matrix& x);

  const Matrix& matrix() const { return a_; }
  Eigen::Index dim() const { return a_.rows(); }

  /// Eigenvalues in decreasing order, clamped as described above.
  const RealVector& eigenvalues() const { return eigenvalues_; }
  /// Columns are eigenvectors matching eigenvalues().
  const Matrix& eigenvectors() const { return eigenvectors_; }

 private:
  Matrix a_;
  RealVector eigenvalues_;
  Matrix eigenvectors_;
};

struct PolarFactors {
  Matrix omega;
  PositiveMatrix modulus;
};

/// x = omega * modulus with omega the partial isometry from range(|x|) onto
/// range(x), vanishing on ker(|x|).
PolarFactors polar_decompose(const Matrix& x);

/// a^r with 0^r = 0. Requires r > 0.
PositiveMatrix positive_power(const PositiveMatrix& a, double r);

/// Scaling and squaring with a truncated Taylor series.
Matrix expm(const Matrix& x);

/// Principal logarithm. Throws ErrorKind::branch_cut when an eigenvalue lies
/// on (-inf, 0] within tolerance.
Matrix logm_principal(const Matrix& g);

struct SpectralCluster {
  double value = 0.0;
  int multiplicity = 0;
};

/// Eigenvalue clusters in decreasing order.
struct Spectrum {
  std::vector<SpectralCluster> clusters;

  std::vector<int> multiplicities() const;
};

/// Consecutive eigenvalues are merged while their gap relative to the larger
/// one stays within cluster_tol. Cluster values are member means.
Spectrum spectrum_of(const PositiveMatrix& a, double cluster_tol);

/// Groups the indices of a decreasing sequence by the same clustering rule.
std::vector<std::vector<Eigen::Index>> cluster_indices(const RealVector& decreasing,
                                                       double cluster_tol);

}  // namespace finsler::linalg
