#pragma once

// Initial-value geodesic solver. The momentum w obeys the Hamilton equation
// w' = |w|^q - |w*|^q; the velocity v is recovered from w by Legendre
// inversion and the group curve follows g' = g v. Both are advanced together
// on one grid and the conserved quantities are monitored.

#include <vector>

#include "finsler/group.hpp"
#include "finsler/ode.hpp"
#include "finsler/variational.hpp"

namespace finsler::flow {

using ode::IntegratorConfig;
using ode::Method;
using variational::Momentum;
using variational::PMetric;

/// Cluster tolerance used for multiplicity signatures along trajectories.
inline constexpr double kTrajectoryClusterTol = 1e-6;

struct ConservationReport {
  /// max_j max_i |lambda_i(w_j* w_j) - lambda_i(w_0* w_0)|, sorted eigenvalues
  double spectrum_drift = 0.0;
  /// max_j ||k_j - k_0|| with k = (w - w*)/2, operator norm
  double skew_drift = 0.0;
  /// max_j | ||v_j||_p - ||v_0||_p |
  double speed_drift = 0.0;
  /// max_j | ||w_j||_q - ||w_0||_q |
  double momentum_norm_drift = 0.0;
  /// Identical multiplicity signature of w* w at every node.
  bool multiplicity_stable = true;
  /// Identical numerical rank of w at every node.
  bool rank_stable = true;
};

struct Trajectory {
  PMetric metric;
  std::vector<double> times;
  std::vector<Matrix> g;
  std::vector<Matrix> v;
  std::vector<Momentum> w;
  ConservationReport diagnostics;

  std::size_t size() const { return times.size(); }
};

struct MomentumSample {
  double t;
  Momentum w;
};

/// How stage values of w near the kernel are treated.
enum class KernelPolicy {
  /// Singular values below kRankTol * sigma_max are zero.
  threshold,
  /// Only the rank(w0) leading singular values are kept (the rank is
  /// constant along exact solutions).
  pinned_initial_rank,
};

/// Numerical solution of the Hamilton equation on [0, T].
std::vector<MomentumSample> integrate_hamilton(
    const Momentum& w0, const PMetric& m, double T, const IntegratorConfig& cfg,
    KernelPolicy policy = KernelPolicy::pinned_initial_rank);

/// Geodesic with g(0) = g0 and g(0)^-1 g'(0) = v0.
/// Throws ErrorKind::singular_drift if g loses invertibility.
Trajectory geodesic_ivp(const GroupElement& g0, const Matrix& v0, const PMetric& m, double T,
                        const IntegratorConfig& cfg,
                        KernelPolicy policy = KernelPolicy::pinned_initial_rank);

/// g(T) of the same geodesic without storing samples or diagnostics.
Matrix geodesic_endpoint(const GroupElement& g0, const Matrix& v0, const PMetric& m, double T,
                         const IntegratorConfig& cfg,
                         KernelPolicy policy = KernelPolicy::pinned_initial_rank);

/// Recomputes every drift from the stored node data.
ConservationReport conservation_report(const Trajectory& traj,
                                       double cluster_tol = kTrajectoryClusterTol);

}  // namespace finsler::flow
