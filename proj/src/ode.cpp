#include "finsler/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace finsler::ode {

void IntegratorConfig::validate() const {
  if (!(step > 0.0)) throw Error(ErrorKind::domain, "IntegratorConfig: step must be > 0");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw Error(ErrorKind::domain, "IntegratorConfig: tolerances must be > 0");
  }
  if (max_steps < 1) throw Error(ErrorKind::domain, "IntegratorConfig: max_steps must be >= 1");
}

namespace {

bool all_finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](const Matrix& m) { return m.allFinite(); });
}

void require_finite(const State& y, double t) {
  if (!all_finite(y)) {
    std::ostringstream os;
    os << "integrator produced a non-finite state at t = " << t;
    throw Error(ErrorKind::integrator, os.str());
  }
}

/// y + h * sum_i c_i k_i over the stages listed in `coeffs`.
template <std::size_t S>
State combine(const State& y, double h, const std::array<double, S>& coeffs,
              const std::array<State, 7>& k) {
  State out = y;
  for (std::size_t i = 0; i < S; ++i) {
    if (coeffs[i] == 0.0) continue;
    for (std::size_t m = 0; m < out.size(); ++m) out[m] += (h * coeffs[i]) * k[i][m];
  }
  return out;
}

void rk4(const Rhs& f, State y, double T, const IntegratorConfig& cfg, const Observer& observe) {
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(T / cfg.step - 1e-9)));
  if (steps > cfg.max_steps) {
    throw Error(ErrorKind::integrator, "rk4: requested grid exceeds max_steps");
  }
  const double h = T / static_cast<double>(steps);
  observe(0.0, y);
  for (long s = 0; s < steps; ++s) {
    const double t = h * static_cast<double>(s);
    const State k1 = f(t, y);
    State tmp = y;
    for (std::size_t m = 0; m < y.size(); ++m) tmp[m] += (0.5 * h) * k1[m];
    const State k2 = f(t + 0.5 * h, tmp);
    tmp = y;
    for (std::size_t m = 0; m < y.size(); ++m) tmp[m] += (0.5 * h) * k2[m];
    const State k3 = f(t + 0.5 * h, tmp);
    tmp = y;
    for (std::size_t m = 0; m < y.size(); ++m) tmp[m] += h * k3[m];
    const State k4 = f(t + h, tmp);
    for (std::size_t m = 0; m < y.size(); ++m) {
      y[m] += (h / 6.0) * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
    }
    const double t_next = s + 1 == steps ? T : h * static_cast<double>(s + 1);
    require_finite(y, t_next);
    observe(t_next, y);
  }
}

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr std::array<double, 1> kA2{1.0 / 5};
constexpr std::array<double, 2> kA3{3.0 / 40, 9.0 / 40};
constexpr std::array<double, 3> kA4{44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr std::array<double, 4> kA5{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                    -212.0 / 729};
constexpr std::array<double, 5> kA6{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                    -5103.0 / 18656};
constexpr std::array<double, 6> kB5{35.0 / 384,     0.0,          500.0 / 1113,
                                    125.0 / 192,    -2187.0 / 6784, 11.0 / 84};
constexpr std::array<double, 7> kB4{5179.0 / 57600, 0.0,           7571.0 / 16695,
                                    393.0 / 640,    -92097.0 / 339200, 187.0 / 2100,
                                    1.0 / 40};
constexpr std::array<double, 7> kErr{kB5[0] - kB4[0], kB5[1] - kB4[1], kB5[2] - kB4[2],
                                     kB5[3] - kB4[3], kB5[4] - kB4[4], kB5[5] - kB4[5],
                                     -kB4[6]};

void rk45(const Rhs& f, State y, double T, const IntegratorConfig& cfg,
          const Observer& observe) {
  observe(0.0, y);
  double t = 0.0;
  double h = std::min(cfg.step, T);
  int attempts = 0;
  std::array<State, 7> k;
  k[0] = f(t, y);
  while (t < T) {
    if (++attempts > cfg.max_steps) {
      throw Error(ErrorKind::integrator, "rk45: max_steps exceeded");
    }
    const bool last = t + h >= T * (1.0 - 1e-14);
    if (last) h = T - t;
    k[1] = f(t + kC[1] * h, combine(y, h, kA2, k));
    k[2] = f(t + kC[2] * h, combine(y, h, kA3, k));
    k[3] = f(t + kC[3] * h, combine(y, h, kA4, k));
    k[4] = f(t + kC[4] * h, combine(y, h, kA5, k));
    k[5] = f(t + kC[5] * h, combine(y, h, kA6, k));
    State y5 = combine(y, h, kB5, k);
    k[6] = f(t + h, y5);

    double err = 0.0;
    bool finite = all_finite(y5);
    if (finite) {
      for (std::size_t m = 0; m < y.size(); ++m) {
        Matrix e = Matrix::Zero(y[m].rows(), y[m].cols());
        for (std::size_t i = 0; i < 7; ++i) e += (h * kErr[i]) * k[i][m];
        for (Eigen::Index idx = 0; idx < e.size(); ++idx) {
          const double scale =
              cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[m](idx)), std::abs(y5[m](idx)));
          err = std::max(err, std::abs(e(idx)) / scale);
        }
      }
    } else {
      err = 1e10;
    }

    if (err <= 1.0) {
      t = last ? T : t + h;
      y = std::move(y5);
      k[0] = k[6];
      observe(t, y);
    }
    const double factor =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
    if (h < 1e-14 * std::max(1.0, T)) {
      std::ostringstream os;
      os << "rk45: step size underflow at t = " << t;
      throw Error(ErrorKind::integrator, os.str());
    }
  }
}

}  // namespace

void integrate(const Rhs& f, State y0, double T, const IntegratorConfig& cfg,
               const Observer& observe) {
  cfg.validate();
  if (!(T > 0.0)) throw Error(ErrorKind::domain, "integrate: T must be > 0");
  require_finite(y0, 0.0);
  if (cfg.method == Method::rk4_fixed) {
    rk4(f, std::move(y0), T, cfg, observe);
  } else {
    rk45(f, std::move(y0), T, cfg, observe);
  }
}

}  // namespace finsler::ode
