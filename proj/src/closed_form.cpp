#include "finsler/closed_form.hpp"

#include <cmath>

namespace finsler::closed_form {

using linalg::commutator;
using linalg::expm;
using linalg::operator_norm;

bool is_normal(const Matrix& v, double tol) {
  const double nv = operator_norm(v);
  return operator_norm(v * v.adjoint() - v.adjoint() * v) <= tol * (1.0 + nv * nv);
}

bool is_partial_isometry(const Matrix& v, double tol) {
  const Matrix h = v.adjoint() * v;
  return operator_norm(h * h - h) <= tol;
}

GroupElement riemannian_geodesic(const GroupElement& g0, const Matrix& v0, double t) {
  const Matrix vs = v0.adjoint();
  return GroupElement(g0.matrix() * expm(t * vs) * expm(t * (v0 - vs)));
}

GroupElement riemannian_exp(const GroupElement& g, const Matrix& v) {
  return riemannian_geodesic(g, v, 1.0);
}

Matrix riemannian_velocity(const Matrix& v0, double t) {
  const Matrix a = v0 - v0.adjoint();
  return expm(-t * a) * v0 * expm(t * a);
}

flow::Trajectory riemannian_trajectory(const GroupElement& g0, const Matrix& v0,
                                       std::span<const double> times) {
  const variational::PMetric m(2);
  flow::Trajectory traj{m, {}, {}, {}, {}, {}};
  for (double t : times) {
    traj.times.push_back(t);
    traj.g.push_back(riemannian_geodesic(g0, v0, t).matrix());
    Matrix v = riemannian_velocity(v0, t);
    traj.w.push_back(variational::Momentum{v});
    traj.v.push_back(std::move(v));
  }
  traj.diagnostics = flow::conservation_report(traj);
  return traj;
}

GroupElement partial_isometry_geodesic(const GroupElement& g0, const Matrix& v0, double t,
                                       double tol) {
  if (!is_partial_isometry(v0, tol)) {
    throw Error(ErrorKind::precondition, "partial_isometry_geodesic: v0 is not a partial isometry");
  }
  return riemannian_geodesic(g0, v0, t);
}

GroupElement partial_isometry_geodesic_split(const GroupElement& g0, const Matrix& v0, double t,
                                             double tol) {
  if (!is_partial_isometry(v0, tol)) {
    throw Error(ErrorKind::precondition,
                "partial_isometry_geodesic_split: v0 is not a partial isometry");
  }
  const Complex i(0.0, 1.0);
  const Matrix x0 = 0.5 * (v0 + v0.adjoint());
  const Matrix y0 = (v0 - v0.adjoint()) / (2.0 * i);
  return GroupElement(g0.matrix() * expm(t * (x0 - i * y0)) * expm((2.0 * t * i) * y0));
}

GroupElement one_parameter_geodesic(const GroupElement& g0, const Matrix& v0, double t,
                                    double tol) {
  if (!is_normal(v0, tol)) {
    throw Error(ErrorKind::precondition, "one_parameter_geodesic: v0 is not normal");
  }
  return GroupElement(g0.matrix() * expm(t * v0));
}

Matrix angular_momentum(const GroupElement& g) {
  return (g.matrix() * g.matrix().adjoint()).partialPivLu().inverse();
}

double metric_at(const GroupElement& g, const Matrix& x, const Matrix& y) {
  return linalg::normalized_trace(angular_momentum(g) * x * y.adjoint());
}

Matrix levi_civita_invariant(const Matrix& v, const Matrix& w) {
  return 0.5 * (commutator(v, w) + commutator(v, w.adjoint()) + commutator(w, v.adjoint()));
}

}  // namespace finsler::closed_form
