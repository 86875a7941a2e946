#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace finsler::fd {

/// Weights c_j such that f^(order)(z) ~ sum_j c_j f(x_j), by Fornberg's
/// recursion. Works on arbitrary distinct nodes.
inline std::vector<double> fornberg_weights(double z, std::span<const double> x, int order) {
  const std::size_t n = x.size();
  const auto m = static_cast<std::size_t>(order);
  if (n <= m) throw std::invalid_argument("fornberg_weights: too few nodes");
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

/// Index window of `width` consecutive nodes around node j, shifted inward at
/// the ends of a grid of `count` nodes.
inline std::pair<std::size_t, std::size_t> stencil_window(std::size_t j, std::size_t count,
                                                          std::size_t width) {
  width = std::min(width, count);
  std::size_t lo = j >= width / 2 ? j - width / 2 : 0;
  if (lo + width > count) lo = count - width;
  return {lo, lo + width};
}

/// First derivative of a sampled sequence at node j using up to `width`
/// neighbouring samples. T needs `T + T`, `double * T`.
template <typename T>
T derivative_at(std::span<const double> times, std::span<const T> values, std::size_t j,
                std::size_t width = 5) {
  const auto [lo, hi] = stencil_window(j, times.size(), width);
  const auto w = fornberg_weights(times[j], times.subspan(lo, hi - lo), 1);
  T acc = w[0] * values[lo];
  for (std::size_t k = 1; k < w.size(); ++k) acc = acc + w[k] * values[lo + k];
  return acc;
}

}  // namespace finsler::fd
