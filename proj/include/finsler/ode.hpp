#pragma once

// Explicit Runge-Kutta integration of matrix-valued ODE systems.

#include <functional>
#include <vector>

#include "finsler/linalg.hpp"

namespace finsler::ode {

enum class Method { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
  Method method = Method::rk4_fixed;
  /// Fixed step, or the initial trial step for the adaptive method.
  double step = 1e-3;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_steps = 1'000'000;

  void validate() const;
};

/// A system state: one or more square matrices advanced together.
using State = std::vector<Matrix>;
using Rhs = std::function<State(double t, const State& y)>;
/// Invoked at t = 0 and after every accepted step.
using Observer = std::function<void(double t, const State& y)>;

/// Integrates y' = f(t, y) on [0, T]. The fixed-step method uses
/// ceil(T/step) equal steps so the grid ends exactly at T; the adaptive one
/// is Dormand-Prince 5(4) with a mixed absolute/relative error norm.
/// Throws ErrorKind::integrator on non-finite states or when max_steps is
/// exhausted.
void integrate(const Rhs& f, State y0, double T, const IntegratorConfig& cfg,
               const Observer& observe);

}  // namespace finsler::ode
