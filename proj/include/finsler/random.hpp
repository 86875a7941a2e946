#pragma once

// Seeded random matrix models used by the verification suite, the shooting
// restarts and the tests. Base model: independent standard complex Gaussian
// entries scaled by 1/sqrt(N).

#include <cstdint>
#include <random>

#include "finsler/linalg.hpp"

namespace finsler::random {

class MatrixSampler {
 public:
  explicit MatrixSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  Complex complex_gaussian();

  Matrix gaussian(Eigen::Index n);
  Matrix hermitian(Eigen::Index n);
  Matrix skew_hermitian(Eigen::Index n);
  /// Haar unitary (QR with phase correction).
  Matrix unitary(Eigen::Index n);
  /// U diag(z) U* with complex Gaussian z.
  Matrix normal(Eigen::Index n);
  /// U P W* with P a rank-`rank` coordinate projection and U, W Haar.
  Matrix partial_isometry(Eigen::Index n, Eigen::Index rank);
  /// Product of Gaussian n x rank and rank x n factors.
  Matrix rank_deficient(Eigen::Index n, Eigen::Index rank);
  /// U diag(lambda) U* with log-uniform eigenvalues in [1/cond, 1].
  Matrix positive(Eigen::Index n, double cond);
  /// U diag(s) W* with singular values uniform in [lo, hi].
  Matrix invertible(Eigen::Index n, double lo = 0.5, double hi = 2.0);

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// x rescaled so its operator norm equals `target` (zero stays zero).
Matrix with_operator_norm(const Matrix& x, double target);

}  // namespace finsler::random
