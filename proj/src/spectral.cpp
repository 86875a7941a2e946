#include "finsler/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/finite_difference.hpp"

namespace finsler::spectral {

using linalg::operator_norm;
using linalg::PositiveMatrix;

std::vector<Matrix> ProjectionFrame::complete() const {
  std::vector<Matrix> out = projections;
  if (kernel_projection.size() > 0 && operator_norm(kernel_projection) > 0.5) {
    out.push_back(kernel_projection);
  }
  return out;
}

namespace {

// Integrated states near a singular b can dip below zero by discretisation
// error; clamp those eigenvalues.
PositiveMatrix nearest_positive(const Matrix& y) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (y + y.adjoint()));
  const RealVector lam = es.eigenvalues().cwiseMax(0.0);
  return PositiveMatrix(es.eigenvectors() * lam.cast<Complex>().asDiagonal() *
                        es.eigenvectors().adjoint());
}

Matrix group_projection(const Matrix& vecs, const std::vector<Eigen::Index>& group) {
  Matrix basis(vecs.rows(), static_cast<Eigen::Index>(group.size()));
  for (std::size_t k = 0; k < group.size(); ++k) {
    basis.col(static_cast<Eigen::Index>(k)) = vecs.col(group[k]);
  }
  return basis * basis.adjoint();
}

void require_skew(const Matrix& K, const char* where) {
  if (K.rows() != K.cols()) {
    throw Error(ErrorKind::dimension_mismatch, std::string(where) + ": K is not square");
  }
  if (operator_norm(K + K.adjoint()) > linalg::kHermTol * (1.0 + operator_norm(K))) {
    throw Error(ErrorKind::precondition, std::string(where) + ": K is not skew-adjoint");
  }
}

void require_alpha(double alpha, const char* where) {
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    throw Error(ErrorKind::domain, std::string(where) + ": alpha must lie in (1/2, 1]");
  }
}

/// Lagrange interpolation of nodal matrices at t from the four nodes nearest
/// to the interval [t_k, t_k+1].
Matrix interpolate(std::span<const double> times, std::span<const Matrix> values, std::size_t k,
                   double t) {
  const std::size_t count = times.size();
  const std::size_t width = std::min<std::size_t>(4, count);
  std::size_t lo = k >= 1 ? k - 1 : 0;
  if (lo + width > count) lo = count - width;
  const auto w = fd::fornberg_weights(t, times.subspan(lo, width), 0);
  Matrix acc = w[0] * values[lo];
  for (std::size_t j = 1; j < width; ++j) acc += w[j] * values[lo + j];
  return acc;
}

Matrix unitary_part(const Matrix& u) { return linalg::polar_decompose(u).omega; }

}  // namespace

ProjectionFrame projection_frame(const PositiveMatrix& b, double cluster_tol) {
  const RealVector& vals = b.eigenvalues();
  const Matrix& vecs = b.eigenvectors();
  ProjectionFrame frame;
  frame.kernel_projection = Matrix::Zero(b.dim(), b.dim());
  std::vector<double> lambdas;
  for (const auto& group : linalg::cluster_indices(vals, cluster_tol)) {
    const Matrix proj = group_projection(vecs, group);
    if (vals(group.front()) <= 0.0) {
      frame.kernel_projection = proj;
      continue;
    }
    double sum = 0.0;
    for (Eigen::Index i : group) sum += vals(i);
    lambdas.push_back(sum / static_cast<double>(group.size()));
    frame.projections.push_back(proj);
  }
  frame.lambdas = Eigen::Map<const RealVector>(lambdas.data(), static_cast<Eigen::Index>(lambdas.size()));
  return frame;
}

std::vector<BSample> integrate_b(const PositiveMatrix& b0, const Matrix& K, double alpha,
                                 double T, const ode::IntegratorConfig& cfg) {
  require_skew(K, "integrate_b");
  require_alpha(alpha, "integrate_b");
  if (K.rows() != b0.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "integrate_b: b0 and K sizes differ");
  }
  auto rhs = [&](double, const ode::State& y) {
    const Matrix ba = linalg::positive_power(nearest_positive(y[0]), alpha).matrix();
    const Matrix d = ba * K - K * ba;
    return ode::State{0.5 * (d + d.adjoint())};
  };
  std::vector<BSample> out;
  ode::integrate(rhs, ode::State{b0.matrix()}, T, cfg,
                 [&](double t, const ode::State& y) { out.push_back({t, nearest_positive(y[0])}); });
  return out;
}

double gamma_coefficient(double lambda_i, double lambda_l, double alpha) {
  if (!(lambda_i > 0.0) || !(lambda_l > 0.0)) {
    throw Error(ErrorKind::domain, "gamma_coefficient: eigenvalues must be positive");
  }
  if (lambda_i == lambda_l) {
    throw Error(ErrorKind::domain, "gamma_coefficient: eigenvalues must be distinct");
  }
  // lambda_i = lambda_l e^r; the common factor lambda_l cancels.
  const double r = std::log(lambda_i / lambda_l);
  return std::expm1((1.0 - alpha) * r) / std::expm1(r);
}

Matrix projection_rhs(const ProjectionFrame& frame, const Matrix& K, double alpha,
                      std::size_t i) {
  if (i >= frame.projections.size()) {
    throw Error(ErrorKind::domain, "projection_rhs: projection index out of range");
  }
  const Matrix& pi = frame.projections[i];
  const double li = frame.lambdas(static_cast<Eigen::Index>(i));
  Matrix acc = pi * K - K * pi;
  for (std::size_t l = 0; l < frame.projections.size(); ++l) {
    if (l == i) continue;
    const Matrix& pl = frame.projections[l];
    const double g = gamma_coefficient(li, frame.lambdas(static_cast<Eigen::Index>(l)), alpha);
    acc += g * (pl * K * pi - pi * K * pl);
  }
  return std::pow(li, alpha - 1.0) * acc;
}

TransportFrame transport_frame(std::span<const double> times,
                               const std::vector<std::vector<Matrix>>& projections) {
  const std::size_t count = times.size();
  if (count < 2 || projections.size() != count) {
    throw Error(ErrorKind::dimension_mismatch,
                "transport_frame: need one projection family per node and at least two nodes");
  }
  const std::size_t families = projections.front().size();
  if (families == 0) throw Error(ErrorKind::frame_break, "transport_frame: empty family");
  const Eigen::Index n = projections.front().front().rows();
  std::vector<double> ranks;
  for (const auto& p : projections.front()) ranks.push_back(std::round(p.trace().real()));
  for (std::size_t k = 0; k < count; ++k) {
    if (projections[k].size() != families) {
      throw Error(ErrorKind::frame_break, "transport_frame: projection count changes");
    }
    for (std::size_t j = 0; j < families; ++j) {
      if (std::round(projections[k][j].trace().real()) != ranks[j]) {
        throw Error(ErrorKind::frame_break, "transport_frame: projection rank changes");
      }
    }
  }

  TransportFrame out;
  out.times.assign(times.begin(), times.end());
  out.lambda_op.assign(count, Matrix::Zero(n, n));
  std::vector<Matrix> series(count);
  for (std::size_t j = 0; j < families; ++j) {
    for (std::size_t k = 0; k < count; ++k) series[k] = projections[k][j];
    for (std::size_t k = 0; k < count; ++k) {
      const Matrix dp = fd::derivative_at<Matrix>(times, series, k);
      out.lambda_op[k] -= projections[k][j] * dp;
    }
  }
  for (auto& lam : out.lambda_op) lam = 0.5 * (lam - lam.adjoint());

  out.u.reserve(count);
  out.u.push_back(linalg::identity(n));
  for (std::size_t k = 0; k + 1 < count; ++k) {
    const double h = times[k + 1] - times[k];
    const Matrix mid = interpolate(times, out.lambda_op, k, times[k] + 0.5 * h);
    const Matrix& u = out.u.back();
    const Matrix k1 = out.lambda_op[k] * u;
    const Matrix k2 = mid * (u + 0.5 * h * k1);
    const Matrix k3 = mid * (u + 0.5 * h * k2);
    const Matrix k4 = out.lambda_op[k + 1] * (u + h * k3);
    out.u.push_back(unitary_part(u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)));
  }
  return out;
}

double transport_deviation(const TransportFrame& frame,
                           const std::vector<std::vector<Matrix>>& projections) {
  double dev = 0.0;
  for (std::size_t k = 0; k < frame.u.size(); ++k) {
    const Matrix& u = frame.u[k];
    for (std::size_t j = 0; j < projections[k].size(); ++j) {
      dev = std::max(dev, operator_norm(u.adjoint() * projections[k][j] * u -
                                        projections.front()[j]));
    }
  }
  return dev;
}

EquivarianceReport equivariance_check(const flow::Trajectory& traj, double cluster_tol) {
  EquivarianceReport rep;
  if (traj.size() == 0) return rep;
  const double alpha = traj.metric.alpha();

  const auto frame0 = projection_frame(PositiveMatrix::gram(traj.w.front().value), cluster_tol);
  for (Eigen::Index i = 0; i < frame0.lambdas.size(); ++i) {
    for (Eigen::Index l = 0; l < frame0.lambdas.size(); ++l) {
      if (i == l) continue;
      rep.gamma_max =
          std::max(rep.gamma_max, gamma_coefficient(frame0.lambdas(i), frame0.lambdas(l), alpha));
    }
  }

  const auto gram0 = PositiveMatrix::gram(traj.v.front());
  const auto groups = linalg::cluster_indices(gram0.eigenvalues(), cluster_tol);
  const auto signature0 = linalg::spectrum_of(gram0, cluster_tol).multiplicities();
  const RealVector sv0 = linalg::singular_values(traj.v.front());
  const auto rank0 = linalg::singular_system(traj.v.front()).rank;

  std::vector<std::vector<Matrix>> projections;
  std::vector<Matrix> moduli;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Matrix& v = traj.v[k];
    const auto gram = PositiveMatrix::gram(v);
    rep.spectrum_drift = std::max(
        rep.spectrum_drift, (linalg::singular_values(v) - sv0).cwiseAbs().maxCoeff());
    if (linalg::spectrum_of(gram, cluster_tol).multiplicities() != signature0) {
      rep.multiplicity_stable = false;
    }
    if (linalg::singular_system(v).rank != rank0) rep.isometry_ranks_stable = false;
    std::vector<Matrix> family;
    for (const auto& group : groups) family.push_back(group_projection(gram.eigenvectors(), group));
    projections.push_back(std::move(family));
    moduli.push_back(linalg::positive_power(gram, 0.5).matrix());
  }

  if (!rep.multiplicity_stable || traj.size() < 2) {
    rep.frame_ok = rep.multiplicity_stable;
    return rep;
  }
  try {
    const auto frame = transport_frame(traj.times, projections);
    rep.transport_deviation = transport_deviation(frame, projections);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const Matrix& u = frame.u[k];
      rep.modulus_deviation = std::max(
          rep.modulus_deviation, operator_norm(moduli[k] - u * moduli.front() * u.adjoint()));
    }
  } catch (const Error&) {
    rep.frame_ok = false;
  }
  return rep;
}

Matrix resolvent_from_frame(const ProjectionFrame& frame, Complex z) {
  const Eigen::Index n = frame.kernel_projection.rows();
  Matrix out = linalg::identity(n) / z;
  for (std::size_t i = 0; i < frame.projections.size(); ++i) {
    const double li = frame.lambdas(static_cast<Eigen::Index>(i));
    out += (li / (z * (z - li))) * frame.projections[i];
  }
  return out;
}

}  // namespace finsler::spectral
