#pragma once

// Boundary-value problems: find the initial velocity v0 whose geodesic from
// g0 reaches g1 at t = 1. Damped Gauss-Newton (Levenberg) on the flattened
// endpoint mismatch with a forward-difference Jacobian.

#include <cstdint>

#include "finsler/closed_form.hpp"
#include "finsler/flow.hpp"

namespace finsler::shooting {

struct ShootingConfig {
  int max_iters = 50;
  /// Relative endpoint tolerance ||g(1) - g1||_2 / ||g1||_2.
  double residual_tol = 1e-10;
  /// Jacobian step is jacobian_step * (1 + ||v0||).
  double jacobian_step = 1e-6;
  /// Initial Levenberg factor, relative to the mean diagonal of J^T J.
  double damping = 1e-3;
  /// Random restarts tried when the principal-log start fails.
  int restarts = 4;
  /// Run every restart and keep the converged solution of least p-norm.
  bool explore_all_restarts = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct BvpResult {
  Matrix v0;
  double endpoint_residual = 0.0;
  /// ||v0||_p; geodesics have constant speed so this is the curve length.
  double distance = 0.0;
  flow::Trajectory trajectory;
  bool converged = false;
  int iterations = 0;
};

/// Riemannian logarithm: v with riemannian_exp(g0, v) = g1.
BvpResult riemannian_log(const GroupElement& g0, const GroupElement& g1,
                         const ShootingConfig& cfg = {});

/// Geodesic shooting for the p-metric. Delegates to riemannian_log for p = 2.
BvpResult geodesic_bvp(const GroupElement& g0, const GroupElement& g1, const flow::PMetric& m,
                       const ShootingConfig& cfg, const flow::IntegratorConfig& integ);

/// Length of the connecting geodesic. Throws ErrorKind::convergence when the
/// shooting does not converge.
double distance(const GroupElement& g0, const GroupElement& g1, const flow::PMetric& m,
                const ShootingConfig& cfg, const flow::IntegratorConfig& integ);

}  // namespace finsler::shooting
