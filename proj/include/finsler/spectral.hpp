#pragma once

// Spectral dynamics of the momentum modulus at finite dimension: the
// isospectral auxiliary flow b' = [b^alpha, K], derivatives of its eigen-
// projections, and the unitary transport frame that carries the moving
// projections back to their initial position.

#include <span>
#include <vector>

#include "finsler/flow.hpp"

namespace finsler::spectral {

/// Default relative gap below which eigenvalues are treated as one cluster.
inline constexpr double kClusterTol = 1e-6;

/// b = sum_i lambda_i p_i with lambda_i > 0 decreasing; kernel_projection is
/// the projection onto ker b (possibly zero).
struct ProjectionFrame {
  RealVector lambdas;
  std::vector<Matrix> projections;
  Matrix kernel_projection;

  /// projections followed by the kernel projection when it is non-zero.
  std::vector<Matrix> complete() const;
};

ProjectionFrame projection_frame(const linalg::PositiveMatrix& b,
                                 double cluster_tol = kClusterTol);

struct BSample {
  double t;
  linalg::PositiveMatrix b;
};

/// b' = [b^alpha, K] on [0, T]. Requires K skew-adjoint and alpha in (1/2, 1].
std::vector<BSample> integrate_b(const linalg::PositiveMatrix& b0, const Matrix& K,
                                 double alpha, double T, const ode::IntegratorConfig& cfg);

/// lambda_l^alpha (lambda_i^(1-alpha) - lambda_l^(1-alpha)) / (lambda_i - lambda_l).
/// Throws ErrorKind::domain for equal or non-positive eigenvalues.
double gamma_coefficient(double lambda_i, double lambda_l, double alpha);

/// Derivative of p_i along b' = [b^alpha, K]:
///   lambda_i^(alpha-1) ([p_i, K] + sum_{l != i} gamma_il (p_l K p_i - p_i K p_l)).
/// Throws ErrorKind::domain when i is out of range.
Matrix projection_rhs(const ProjectionFrame& frame, const Matrix& K, double alpha,
                      std::size_t i);

struct TransportFrame {
  std::vector<double> times;
  /// Lambda_t = -sum_j p_j p_j', skew-adjoint.
  std::vector<Matrix> lambda_op;
  /// Solution of u' = Lambda_t u, u(0) = 1.
  std::vector<Matrix> u;
};

/// projections[k] lists the complete family (kernel included) at node k in a
/// fixed order. Throws ErrorKind::frame_break when the count or a rank
/// changes along the grid.
TransportFrame transport_frame(std::span<const double> times,
                               const std::vector<std::vector<Matrix>>& projections);

/// max_{k,i} ||u_k* p_i(t_k) u_k - p_i(0)||
double transport_deviation(const TransportFrame& frame,
                           const std::vector<std::vector<Matrix>>& projections);

struct EquivarianceReport {
  /// Largest gamma over the distinct eigenvalue pairs of w0* w0.
  double gamma_max = 0.0;
  /// Singular-value drift of v.
  double spectrum_drift = 0.0;
  bool multiplicity_stable = true;
  /// max ||u* p_i(t) u - p_i(0)||
  double transport_deviation = 0.0;
  /// max || |v(t)| - u |v(0)| u* ||
  double modulus_deviation = 0.0;
  /// Ranks of the polar partial isometry's initial and final projections.
  bool isometry_ranks_stable = true;
  /// False when the transport frame could not be built.
  bool frame_ok = true;
};

/// Report only; never throws on numerical disagreement.
EquivarianceReport equivariance_check(const flow::Trajectory& traj,
                                      double cluster_tol = kClusterTol);

/// z^-1 + sum_i lambda_i / (z (z - lambda_i)) p_i, i.e. (z - b)^-1.
Matrix resolvent_from_frame(const ProjectionFrame& frame, Complex z);

}  // namespace finsler::spectral
