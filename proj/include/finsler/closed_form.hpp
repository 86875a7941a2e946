#pragma once

// Explicit geodesics and the Riemannian (p = 2) structure of GL(N).

#include <span>

#include "finsler/flow.hpp"
#include "finsler/group.hpp"

namespace finsler::closed_form {

/// Default relative tolerance for the normality / partial-isometry tests.
inline constexpr double kPredicateTol = 1e-10;

/// ||v v* - v* v|| <= tol (1 + ||v||^2), operator norm.
bool is_normal(const Matrix& v, double tol = kPredicateTol);

/// ||(v*v)^2 - v*v|| <= tol, operator norm.
bool is_partial_isometry(const Matrix& v, double tol = kPredicateTol);

/// g0 e^{t v0*} e^{t (v0 - v0*)}: the Levi-Civita geodesic of the trace metric.
GroupElement riemannian_geodesic(const GroupElement& g0, const Matrix& v0, double t);

/// g e^{v*} e^{v - v*}.
GroupElement riemannian_exp(const GroupElement& g, const Matrix& v);

/// Left-translated velocity of the Riemannian geodesic at time t:
/// e^{-t(v0 - v0*)} v0 e^{t(v0 - v0*)}.
Matrix riemannian_velocity(const Matrix& v0, double t);

/// The Riemannian geodesic sampled on `times`, packaged as a p = 2 trajectory
/// with its conservation report.
flow::Trajectory riemannian_trajectory(const GroupElement& g0, const Matrix& v0,
                                       std::span<const double> times);

/// Geodesic for a partial-isometry initial velocity, valid for every even p.
/// Throws ErrorKind::precondition when v0 is not a partial isometry.
GroupElement partial_isometry_geodesic(const GroupElement& g0, const Matrix& v0, double t,
                                       double tol = kPredicateTol);

/// Same curve written as g0 e^{t(x0 - i y0)} e^{2t i y0} with v0 = x0 + i y0.
GroupElement partial_isometry_geodesic_split(const GroupElement& g0, const Matrix& v0, double t,
                                             double tol = kPredicateTol);

/// g0 e^{t v0}; extremal exactly when v0 is normal.
/// Throws ErrorKind::precondition for non-normal v0.
GroupElement one_parameter_geodesic(const GroupElement& g0, const Matrix& v0, double t,
                                    double tol = kPredicateTol);

/// (g g*)^-1
Matrix angular_momentum(const GroupElement& g);

/// <x, y>_g = tau((g g*)^-1 x y*).
double metric_at(const GroupElement& g, const Matrix& x, const Matrix& y);

/// (nabla_V W)(1) = 1/2 ([v,w] + [v,w*] + [w,v*]) for left-invariant fields.
Matrix levi_civita_invariant(const Matrix& v, const Matrix& w);

}  // namespace finsler::closed_form
