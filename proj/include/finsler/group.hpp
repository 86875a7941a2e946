#pragma once

#include "finsler/linalg.hpp"

namespace finsler {

/// A point of GL(N): a square matrix whose smallest singular value exceeds
/// kRankTol times its largest.
class GroupElement {
 public:
  explicit GroupElement(Matrix g) : g_(std::move(g)) {
    if (g_.rows() != g_.cols()) {
      throw Error(ErrorKind::dimension_mismatch, "GroupElement: matrix is not square");
    }
    if (!linalg::is_invertible(g_)) {
      throw Error(ErrorKind::singular_point, "GroupElement: matrix is not invertible");
    }
  }

  static GroupElement identity(Eigen::Index n) { return GroupElement(linalg::identity(n)); }

  const Matrix& matrix() const { return g_; }
  Eigen::Index dim() const { return g_.rows(); }
  Matrix inverse() const { return g_.partialPivLu().inverse(); }

  /// Left translation k * g.
  GroupElement left_translate(const GroupElement& k) const {
    return GroupElement(k.matrix() * g_);
  }

 private:
  Matrix g_;
};

}  // namespace finsler
