#include "finsler/shooting.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "finsler/random.hpp"

namespace finsler::shooting {

void ShootingConfig::validate() const {
  if (max_iters < 1) throw Error(ErrorKind::domain, "ShootingConfig: max_iters must be >= 1");
  if (!(residual_tol > 0.0)) {
    throw Error(ErrorKind::domain, "ShootingConfig: residual_tol must be > 0");
  }
  if (!(jacobian_step > 0.0) || !(damping > 0.0)) {
    throw Error(ErrorKind::domain, "ShootingConfig: jacobian_step and damping must be > 0");
  }
  if (restarts < 0) throw Error(ErrorKind::domain, "ShootingConfig: restarts must be >= 0");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RealVector flatten(const Matrix& x) {
  const Eigen::Index n = x.size();
  RealVector out(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i) = x(i).real();
    out(n + i) = x(i).imag();
  }
  return out;
}

Matrix unflatten(const RealVector& x, Eigen::Index dim) {
  const Eigen::Index n = dim * dim;
  Matrix out(dim, dim);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = Complex(x(i), x(n + i));
  return out;
}

/// Relative endpoint mismatch as a flat real vector, or nullopt when the
/// forward map fails (for instance the geodesic leaves GL(N)).
using ForwardMap = std::function<std::optional<Matrix>(const Matrix& v)>;

struct Outcome {
  Matrix v;
  double residual = kInf;
  bool converged = false;
  int iterations = 0;
};

Outcome levenberg(const ForwardMap& forward, const Matrix& target, const Matrix& start,
                  const ShootingConfig& cfg) {
  const Eigen::Index dim = target.rows();
  const double target_norm = target.norm();
  auto residual_of = [&](const RealVector& x) -> std::optional<RealVector> {
    const auto g = forward(unflatten(x, dim));
    if (!g || !g->allFinite()) return std::nullopt;
    return flatten((*g - target) / target_norm);
  };

  Outcome out{start, kInf, false, 0};
  RealVector x = flatten(start);
  auto r0 = residual_of(x);
  if (!r0) return out;
  RealVector r = *r0;
  double res = r.norm();
  out.residual = res;
  double mu = cfg.damping;
  const Eigen::Index params = x.size();

  for (int it = 0; it < cfg.max_iters; ++it) {
    if (res <= cfg.residual_tol) break;
    out.iterations = it + 1;

    const double step = cfg.jacobian_step * (1.0 + linalg::operator_norm(unflatten(x, dim)));
    Eigen::MatrixXd jac(r.size(), params);
    bool jac_ok = true;
    for (Eigen::Index k = 0; k < params && jac_ok; ++k) {
      RealVector xk = x;
      xk(k) += step;
      const auto rk = residual_of(xk);
      if (!rk) {
        jac_ok = false;
        break;
      }
      jac.col(k) = (*rk - r) / step;
    }
    if (!jac_ok) break;

    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const RealVector grad = jac.transpose() * r;
    const double scale = std::max(normal.diagonal().mean(), 1e-300);
    bool accepted = false;
    for (int attempt = 0; attempt < 16; ++attempt) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal().array() += mu * scale;
      const RealVector delta = damped.ldlt().solve(-grad);
      const RealVector xn = x + delta;
      const auto rn = residual_of(xn);
      if (rn && rn->norm() < res) {
        x = xn;
        r = *rn;
        res = rn->norm();
        mu = std::max(mu / 10.0, 1e-15);
        accepted = true;
        break;
      }
      mu *= 10.0;
    }
    if (!accepted) break;
  }
  out.v = unflatten(x, dim);
  out.residual = res;
  out.converged = res <= cfg.residual_tol;
  return out;
}

std::optional<Matrix> principal_log_start(const GroupElement& g0, const GroupElement& g1) {
  try {
    return linalg::logm_principal(g0.inverse() * g1.matrix());
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Principal-log start first; random starts scaled by the chord length when
/// that fails (or always, with explore_all_restarts). Among converged
/// candidates the one with least ||v||_p wins.
Outcome multi_start(const ForwardMap& forward, const GroupElement& g0, const GroupElement& g1,
                    int p, const ShootingConfig& cfg) {
  const Eigen::Index n = g0.dim();
  std::optional<Outcome> best;
  Outcome fallback;
  auto consider = [&](Outcome cand) {
    if (cand.converged) {
      if (!best || linalg::p_norm(cand.v, p) < linalg::p_norm(best->v, p)) best = std::move(cand);
    } else if (cand.residual < fallback.residual) {
      fallback = std::move(cand);
    }
  };

  if (const auto start = principal_log_start(g0, g1)) {
    consider(levenberg(forward, g1.matrix(), *start, cfg));
  }
  if (!best || cfg.explore_all_restarts) {
    random::MatrixSampler sampler(cfg.seed);
    const Matrix rel = g0.inverse() * g1.matrix();
    const double chord = linalg::p_norm(rel - linalg::identity(n), p);
    for (int k = 0; k < cfg.restarts; ++k) {
      const Matrix raw = sampler.gaussian(n);
      const Matrix start = raw * (chord / std::max(linalg::p_norm(raw, p), 1e-300));
      consider(levenberg(forward, g1.matrix(), start, cfg));
      if (best && !cfg.explore_all_restarts) break;
    }
  }
  if (best) return *best;
  if (fallback.v.size() == 0) fallback.v = Matrix::Zero(n, n);
  return fallback;
}

std::vector<double> uniform_grid(double step) {
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(1.0 / step - 1e-9)));
  std::vector<double> t(static_cast<std::size_t>(steps + 1));
  for (long j = 0; j <= steps; ++j) t[static_cast<std::size_t>(j)] = static_cast<double>(j) / steps;
  t.back() = 1.0;
  return t;
}

void require_same_dim(const GroupElement& g0, const GroupElement& g1) {
  if (g0.dim() != g1.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "shooting: endpoints have different sizes");
  }
}

BvpResult riemannian_log_on_grid(const GroupElement& g0, const GroupElement& g1,
                                 const ShootingConfig& cfg, double grid_step) {
  cfg.validate();
  require_same_dim(g0, g1);
  ForwardMap forward = [&](const Matrix& v) -> std::optional<Matrix> {
    return g0.matrix() * linalg::expm(v.adjoint()) * linalg::expm(v - v.adjoint());
  };
  Outcome sol = multi_start(forward, g0, g1, 2, cfg);
  BvpResult out{sol.v, sol.residual, linalg::p_norm(sol.v, 2),
                flow::Trajectory{flow::PMetric(2), {}, {}, {}, {}, {}}, sol.converged,
                sol.iterations};
  const auto grid = uniform_grid(grid_step);
  out.trajectory = closed_form::riemannian_trajectory(g0, sol.v, grid);
  return out;
}

}  // namespace

BvpResult riemannian_log(const GroupElement& g0, const GroupElement& g1,
                         const ShootingConfig& cfg) {
  return riemannian_log_on_grid(g0, g1, cfg, 1e-3);
}

BvpResult geodesic_bvp(const GroupElement& g0, const GroupElement& g1, const flow::PMetric& m,
                       const ShootingConfig& cfg, const flow::IntegratorConfig& integ) {
  integ.validate();
  if (m.p() == 2) return riemannian_log_on_grid(g0, g1, cfg, integ.step);
  cfg.validate();
  require_same_dim(g0, g1);

  ForwardMap forward = [&](const Matrix& v) -> std::optional<Matrix> {
    try {
      return flow::geodesic_endpoint(g0, v, m, 1.0, integ);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  Outcome sol = multi_start(forward, g0, g1, m.p(), cfg);
  BvpResult out{sol.v, sol.residual, linalg::p_norm(sol.v, m.p()),
                flow::Trajectory{m, {}, {}, {}, {}, {}}, sol.converged, sol.iterations};
  try {
    out.trajectory = flow::geodesic_ivp(g0, sol.v, m, 1.0, integ);
  } catch (const Error&) {
    out.converged = false;
  }
  return out;
}

double distance(const GroupElement& g0, const GroupElement& g1, const flow::PMetric& m,
                const ShootingConfig& cfg, const flow::IntegratorConfig& integ) {
  const BvpResult r = geodesic_bvp(g0, g1, m, cfg, integ);
  if (!r.converged) {
    std::ostringstream os;
    os << "distance: shooting did not converge (relative endpoint residual "
       << r.endpoint_residual << ")";
    throw Error(ErrorKind::convergence, os.str());
  }
  return r.distance;
}

}  // namespace finsler::shooting
