#include "finsler/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace finsler::flow {

namespace {

int pinned_rank_for(const Momentum& w0, KernelPolicy policy) {
  if (policy == KernelPolicy::threshold) return -1;
  return static_cast<int>(linalg::singular_system(w0.value).rank);
}

}  // namespace

std::vector<MomentumSample> integrate_hamilton(const Momentum& w0, const PMetric& m, double T,
                                               const IntegratorConfig& cfg,
                                               KernelPolicy policy) {
  const int rank = pinned_rank_for(w0, policy);
  std::vector<MomentumSample> out;
  auto rhs = [&](double, const ode::State& y) {
    return ode::State{variational::hamilton_rhs(Momentum{y[0]}, m, rank)};
  };
  ode::integrate(rhs, ode::State{w0.value}, T, cfg,
                 [&](double t, const ode::State& y) { out.push_back({t, Momentum{y[0]}}); });
  return out;
}

Trajectory geodesic_ivp(const GroupElement& g0, const Matrix& v0, const PMetric& m, double T,
                        const IntegratorConfig& cfg, KernelPolicy policy) {
  if (v0.rows() != g0.dim() || v0.cols() != g0.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "geodesic_ivp: g0 and v0 sizes differ");
  }
  const Momentum w0 = variational::legendre(v0, m);
  const int rank = pinned_rank_for(w0, policy);

  Trajectory traj{m, {}, {}, {}, {}, {}};
  // State layout: y[0] = w, y[1] = g.
  auto rhs = [&](double, const ode::State& y) {
    const auto eval = variational::hamilton_eval(Momentum{y[0]}, m, rank);
    return ode::State{eval.wdot, y[1] * eval.v};
  };
  auto observe = [&](double t, const ode::State& y) {
    if (!linalg::is_invertible(y[1])) {
      std::ostringstream os;
      os << "geodesic_ivp: g lost invertibility at t = " << t;
      throw Error(ErrorKind::singular_drift, os.str());
    }
    traj.times.push_back(t);
    traj.g.push_back(y[1]);
    traj.w.push_back(Momentum{y[0]});
    // The initial velocity is stored as given; later nodes are reconstructed.
    traj.v.push_back(traj.times.size() == 1
                         ? v0
                         : variational::legendre_inverse(Momentum{y[0]}, m, rank));
  };
  ode::integrate(rhs, ode::State{w0.value, g0.matrix()}, T, cfg, observe);
  traj.diagnostics = conservation_report(traj);
  return traj;
}

Matrix geodesic_endpoint(const GroupElement& g0, const Matrix& v0, const PMetric& m, double T,
                         const IntegratorConfig& cfg, KernelPolicy policy) {
  if (v0.rows() != g0.dim() || v0.cols() != g0.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "geodesic_endpoint: g0 and v0 sizes differ");
  }
  const Momentum w0 = variational::legendre(v0, m);
  const int rank = pinned_rank_for(w0, policy);
  auto rhs = [&](double, const ode::State& y) {
    const auto eval = variational::hamilton_eval(Momentum{y[0]}, m, rank);
    return ode::State{eval.wdot, y[1] * eval.v};
  };
  Matrix end;
  ode::integrate(rhs, ode::State{w0.value, g0.matrix()}, T, cfg,
                 [&](double, const ode::State& y) { end = y[1]; });
  if (!linalg::is_invertible(end)) {
    throw Error(ErrorKind::singular_drift, "geodesic_endpoint: g(T) is not invertible");
  }
  return end;
}

ConservationReport conservation_report(const Trajectory& traj, double cluster_tol) {
  ConservationReport rep;
  if (traj.size() == 0) return rep;
  const PMetric& m = traj.metric;

  const auto sv0 = linalg::singular_system(traj.w.front().value);
  const RealVector eig0 = sv0.sigma.array().square().matrix();
  const Matrix k0 = traj.w.front().skew_part();
  const double speed0 = linalg::p_norm(traj.v.front(), m.p());
  const double qnorm0 = linalg::p_norm(traj.w.front().value, m.q());
  const auto signature0 =
      linalg::spectrum_of(linalg::PositiveMatrix::gram(traj.w.front().value), cluster_tol)
          .multiplicities();

  for (std::size_t j = 0; j < traj.size(); ++j) {
    const Matrix& w = traj.w[j].value;
    const auto sv = linalg::singular_system(w);
    const RealVector eig = sv.sigma.array().square().matrix();
    rep.spectrum_drift = std::max(rep.spectrum_drift, (eig - eig0).cwiseAbs().maxCoeff());
    rep.skew_drift = std::max(rep.skew_drift, linalg::operator_norm(traj.w[j].skew_part() - k0));
    rep.speed_drift =
        std::max(rep.speed_drift, std::abs(linalg::p_norm(traj.v[j], m.p()) - speed0));
    rep.momentum_norm_drift =
        std::max(rep.momentum_norm_drift, std::abs(linalg::p_norm(w, m.q()) - qnorm0));
    if (sv.rank != sv0.rank) rep.rank_stable = false;
    const auto signature =
        linalg::spectrum_of(linalg::PositiveMatrix::gram(w), cluster_tol).multiplicities();
    if (signature != signature0) rep.multiplicity_stable = false;
  }
  return rep;
}

}  // namespace finsler::flow
