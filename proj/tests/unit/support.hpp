#pragma once

#include <gtest/gtest.h>

#include "finsler/linalg.hpp"

namespace finsler::testing {

inline double max_abs(const Matrix& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

inline ::testing::AssertionResult matrix_near(const char* a_expr, const char* b_expr,
                                              const char*, const Matrix& a, const Matrix& b,
                                              double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return ::testing::AssertionFailure() << a_expr << " and " << b_expr << " differ in shape";
  }
  const double err = max_abs(a - b);
  if (err <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure()
         << a_expr << " vs " << b_expr << ": max entry difference " << err << " > " << tol;
}

inline Matrix diag(std::initializer_list<Complex> entries) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (const auto& e : entries) d(i++) = e;
  return d.asDiagonal();
}

inline Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace finsler::testing

#define EXPECT_MATRIX_NEAR(a, b, tol) \
  EXPECT_PRED_FORMAT3(::finsler::testing::matrix_near, a, b, tol)
