#pragma once

// Variational core of the left-invariant p-norm metric on GL(N): the Legendre
// transform v -> v (v*v)^(n-1) and its inverse, the Hamilton vector field,
// the Euler-Lagrange residual, discrete length/energy and the second
// variation of the Lagrangian x -> ||x||_p^p.

#include <span>
#include <vector>

#include "finsler/linalg.hpp"

namespace finsler::variational {

/// Metric exponent p = 2n (even, >= 2) with its conjugate q = p/(p-1) and
/// alpha = q/2.
class PMetric {
 public:
  explicit PMetric(int p);

  int p() const { return p_; }
  int n() const { return p_ / 2; }
  double q() const { return static_cast<double>(p_) / (p_ - 1); }
  double alpha() const { return q() / 2.0; }

  friend bool operator==(const PMetric&, const PMetric&) = default;

 private:
  int p_;
};

/// Left-translated momentum w = v (v*v)^(n-1).
struct Momentum {
  Matrix value;

  /// (w - w*)/2, conserved along the Hamilton flow.
  Matrix skew_part() const { return 0.5 * (value - value.adjoint()); }
};

/// Integer matrix power by repeated multiplication (h^0 = identity).
Matrix matrix_power(const Matrix& h, int k);

Momentum legendre(const Matrix& v, const PMetric& m);

/// v = Omega |w|^(1/(p-1)) where w = Omega |w| is the polar decomposition.
/// If `pinned_rank` is non-negative only that many leading singular values
/// of w are kept; otherwise the kRankTol kernel convention decides.
Matrix legendre_inverse(const Momentum& w, const PMetric& m, int pinned_rank = -1);

/// |w|^q - |w*|^q, returned exactly self-adjoint.
Matrix hamilton_rhs(const Momentum& w, const PMetric& m, int pinned_rank = -1);

/// Hamilton field and the Legendre inverse sharing a single SVD of w.
struct HamiltonEval {
  Matrix wdot;
  Matrix v;
  Eigen::Index rank = 0;
};
HamiltonEval hamilton_eval(const Momentum& w, const PMetric& m, int pinned_rank = -1);

/// d/dt[v (v*v)^(n-1)] - (v*v)^n + (vv*)^n for an analytic pair (v, vdot).
Matrix el_residual(const Matrix& v, const Matrix& vdot, const PMetric& m);

/// Node-wise Euler-Lagrange residual along sampled velocities; d/dt of the
/// momentum is taken by a five-point finite-difference stencil on the grid.
std::vector<Matrix> el_residual_path(std::span<const double> times, std::span<const Matrix> v,
                                     const PMetric& m);

/// ||x||_p^p = tau((x*x)^n).
double lagrangian(const Matrix& x, const PMetric& m);

/// Sampled curve in GL(N) on a strictly increasing time grid.
class DiscretePath {
 public:
  DiscretePath(std::vector<double> times, std::vector<Matrix> points);

  const std::vector<double>& times() const { return times_; }
  const std::vector<Matrix>& points() const { return points_; }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<Matrix> points_;
};

/// g_j^-1 * dg/dt at every node: centred differences inside, second-order
/// one-sided differences at the ends.
std::vector<Matrix> left_velocities(const DiscretePath& path);

/// Trapezoid quadrature of ||g^-1 g'||_p^p.
double p_energy(const DiscretePath& path, const PMetric& m);

/// Trapezoid quadrature of ||g^-1 g'||_p.
double p_length(const DiscretePath& path, const PMetric& m);

/// Q_v(z) = d^2/ds^2 ||v + s z||_p^p at s = 0, from a fourth-order central
/// stencil with one Richardson extrapolation.
double second_variation(const Matrix& v, const Matrix& z, const PMetric& m);

/// True iff ||z v*|| <= tol and ||v* z|| <= tol in operator norm.
bool is_degenerate_direction(const Matrix& v, const Matrix& z, double tol);

}  // namespace finsler::variational
