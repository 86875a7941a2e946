#include "finsler/variational.hpp"

#include <cmath>
#include <sstream>

#include "finsler/finite_difference.hpp"

namespace finsler::variational {

using linalg::identity;

PMetric::PMetric(int p) : p_(p) {
  if (p < 2 || p % 2 != 0) {
    std::ostringstream os;
    os << "PMetric: p must be an even integer >= 2 (got " << p << ")";
    throw Error(ErrorKind::domain, os.str());
  }
}

Matrix matrix_power(const Matrix& h, int k) {
  Matrix out = identity(h.rows());
  Matrix base = h;
  while (k > 0) {
    if (k & 1) out = out * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return out;
}

Momentum legendre(const Matrix& v, const PMetric& m) {
  if (m.n() == 1) return Momentum{v};
  return Momentum{v * matrix_power(v.adjoint() * v, m.n() - 1)};
}

namespace {

Eigen::Index effective_rank(const linalg::SingularSystem& s, int pinned_rank) {
  if (pinned_rank < 0) return s.rank;
  return std::min<Eigen::Index>(pinned_rank, s.sigma.size());
}

Matrix weighted_outer(const Matrix& left, const RealVector& weights, const Matrix& right) {
  return left * weights.cast<Complex>().asDiagonal() * right.adjoint();
}

}  // namespace

HamiltonEval hamilton_eval(const Momentum& w, const PMetric& m, int pinned_rank) {
  const Eigen::Index n = w.value.rows();
  const linalg::SingularSystem s = linalg::singular_system(w.value);
  const Eigen::Index r = effective_rank(s, pinned_rank);
  HamiltonEval out{Matrix::Zero(n, n), Matrix::Zero(n, n), r};
  if (r == 0) return out;

  const RealVector sig = s.sigma.head(r);
  const Matrix ur = s.u.leftCols(r);
  const Matrix vr = s.v.leftCols(r);
  const RealVector sq = sig.array().pow(m.q()).matrix();
  const Matrix abs_w_q = weighted_outer(vr, sq, vr);       // |w|^q
  const Matrix abs_wstar_q = weighted_outer(ur, sq, ur);   // |w*|^q
  const Matrix rhs = abs_w_q - abs_wstar_q;
  out.wdot = 0.5 * (rhs + rhs.adjoint());

  if (m.n() == 1) {
    out.v = weighted_outer(ur, sig, vr);
  } else {
    const RealVector root = sig.array().pow(1.0 / (m.p() - 1)).matrix();
    out.v = weighted_outer(ur, root, vr);
  }
  return out;
}

Matrix legendre_inverse(const Momentum& w, const PMetric& m, int pinned_rank) {
  if (m.n() == 1 && pinned_rank < 0) return w.value;
  return hamilton_eval(w, m, pinned_rank).v;
}

Matrix hamilton_rhs(const Momentum& w, const PMetric& m, int pinned_rank) {
  return hamilton_eval(w, m, pinned_rank).wdot;
}

Matrix el_residual(const Matrix& v, const Matrix& vdot, const PMetric& m) {
  if (v.rows() != vdot.rows() || v.cols() != vdot.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "el_residual: dimension mismatch");
  }
  const int n = m.n();
  const Matrix h = v.adjoint() * v;
  const Matrix hdot = vdot.adjoint() * v + v.adjoint() * vdot;

  std::vector<Matrix> powers;
  powers.reserve(static_cast<std::size_t>(n + 1));
  powers.push_back(identity(v.rows()));
  for (int j = 1; j <= n; ++j) powers.push_back(powers.back() * h);

  Matrix wdot = vdot * powers[static_cast<std::size_t>(n - 1)];
  if (n >= 2) {
    Matrix inner = Matrix::Zero(v.rows(), v.cols());
    for (int j = 0; j <= n - 2; ++j) {
      inner += powers[static_cast<std::size_t>(j)] * hdot *
               powers[static_cast<std::size_t>(n - 2 - j)];
    }
    wdot += v * inner;
  }
  const Matrix right = matrix_power(v * v.adjoint(), n);
  return wdot - powers[static_cast<std::size_t>(n)] + right;
}

std::vector<Matrix> el_residual_path(std::span<const double> times, std::span<const Matrix> v,
                                     const PMetric& m) {
  if (times.size() != v.size() || times.size() < 2) {
    throw Error(ErrorKind::dimension_mismatch, "el_residual_path: need matching samples (>= 2)");
  }
  std::vector<Matrix> w;
  w.reserve(v.size());
  for (const auto& vj : v) w.push_back(legendre(vj, m).value);

  std::vector<Matrix> out;
  out.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const Matrix wdot = fd::derivative_at<Matrix>(times, w, j, 5);
    const Matrix left = matrix_power(v[j].adjoint() * v[j], m.n());
    const Matrix right = matrix_power(v[j] * v[j].adjoint(), m.n());
    out.push_back(wdot - left + right);
  }
  return out;
}

double lagrangian(const Matrix& x, const PMetric& m) {
  return linalg::normalized_trace(matrix_power(x.adjoint() * x, m.n()));
}

DiscretePath::DiscretePath(std::vector<double> times, std::vector<Matrix> points)
    : times_(std::move(times)), points_(std::move(points)) {
  if (times_.size() != points_.size()) {
    throw Error(ErrorKind::dimension_mismatch, "DiscretePath: times/points size mismatch");
  }
  if (times_.size() < 2) throw Error(ErrorKind::domain, "DiscretePath: need at least two nodes");
  for (std::size_t j = 1; j < times_.size(); ++j) {
    if (!(times_[j] > times_[j - 1])) {
      throw Error(ErrorKind::domain, "DiscretePath: time grid must be strictly increasing");
    }
  }
  const Eigen::Index n = points_.front().rows();
  for (const auto& g : points_) {
    if (g.rows() != n || g.cols() != n) {
      throw Error(ErrorKind::dimension_mismatch, "DiscretePath: inconsistent matrix sizes");
    }
  }
}

std::vector<Matrix> left_velocities(const DiscretePath& path) {
  const auto& t = path.times();
  const auto& g = path.points();
  const std::size_t count = t.size();

  std::vector<Matrix> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    if (!linalg::is_invertible(g[j])) {
      std::ostringstream os;
      os << "path point " << j << " is singular";
      throw Error(ErrorKind::singular_point, os.str());
    }
    Matrix gdot;
    if (j > 0 && j + 1 < count) {
      gdot = (g[j + 1] - g[j - 1]) / (t[j + 1] - t[j - 1]);
    } else if (count == 2) {
      gdot = (g[1] - g[0]) / (t[1] - t[0]);
    } else {
      const std::size_t lo = j == 0 ? 0 : count - 3;
      const std::span<const double> nodes(t.data() + lo, 3);
      const auto w = fd::fornberg_weights(t[j], nodes, 1);
      gdot = w[0] * g[lo] + w[1] * g[lo + 1] + w[2] * g[lo + 2];
    }
    out.push_back(g[j].partialPivLu().solve(gdot));
  }
  return out;
}

namespace {

template <typename F>
double trapezoid(const std::vector<double>& t, F&& f) {
  double acc = 0.0;
  double prev = f(0);
  for (std::size_t j = 1; j < t.size(); ++j) {
    const double cur = f(j);
    acc += 0.5 * (t[j] - t[j - 1]) * (prev + cur);
    prev = cur;
  }
  return acc;
}

}  // namespace

double p_energy(const DiscretePath& path, const PMetric& m) {
  const auto vel = left_velocities(path);
  return trapezoid(path.times(), [&](std::size_t j) { return lagrangian(vel[j], m); });
}

double p_length(const DiscretePath& path, const PMetric& m) {
  const auto vel = left_velocities(path);
  return trapezoid(path.times(),
                   [&](std::size_t j) { return linalg::p_norm(vel[j], m.p()); });
}

double second_variation(const Matrix& v, const Matrix& z, const PMetric& m) {
  if (v.rows() != z.rows() || v.cols() != z.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "second_variation: dimension mismatch");
  }
  // s -> ||v + s z||_p^p is a polynomial of degree p, so the extrapolated
  // stencil is exact up to rounding for p <= 6 and a wide step is safe.
  const double h = 0.1 * (1.0 + linalg::operator_norm(v)) / (1.0 + linalg::operator_norm(z));
  auto f = [&](double s) { return lagrangian(v + s * z, m); };
  const double f0 = f(0.0);
  auto stencil = [&](double step) {
    return (-f(2 * step) + 16 * f(step) - 30 * f0 + 16 * f(-step) - f(-2 * step)) /
           (12 * step * step);
  };
  const double coarse = stencil(h);
  const double fine = stencil(0.5 * h);
  return (16.0 * fine - coarse) / 15.0;
}

bool is_degenerate_direction(const Matrix& v, const Matrix& z, double tol) {
  return linalg::operator_norm(z * v.adjoint()) <= tol &&
         linalg::operator_norm(v.adjoint() * z) <= tol;
}

}  // namespace finsler::variational
