// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lpops/operator.hpp"
#include "lpops/quantities.hpp"

namespace lpops {

namespace detail {

// Angular chart of the unit sphere modulo global phase: magnitudes from
// spherical angles on the positive orthant, phases relative to coordinate 0.
// Real dimension 2n - 2.
inline ComplexVector chart_point(const std::vector<double>& t, int n, double p) {
  ComplexVector z(n);
  if (n == 1) {
    z[0] = 1.0;
  } else if (n == 2) {
    z[0] = std::cos(t[0]);
    z[1] = std::sin(t[0]) * std::polar(1.0, t[1]);
  } else {
    z[0] = std::cos(t[0]);
    z[1] = std::sin(t[0]) * std::cos(t[1]) * std::polar(1.0, t[2]);
    z[2] = std::sin(t[0]) * std::sin(t[1]) * std::polar(1.0, t[3]);
  }
  return z / lp_norm(z, p);
}

}  // namespace detail

inline constexpr int kOracleMaxDim = 3;
inline constexpr int kOracleCandidates = 16;

/// Brute-force value of a quantity: exhaustive grid over the phase-quotiented
/// unit sphere (`resolution` points per angle), then compass-search
/// refinement around the best few grid points. Independent of the BFGS path; the
/// cost is resolution^(2n-2) evaluations.
inline QuantityValue oracle_quantity(const Operator& T, QuantityKind kind, int resolution) {
  const int n = T.dim();
  if (n > kOracleMaxDim) {
    throw std::invalid_argument("oracle_quantity: dimension " + std::to_string(n) +
                                " too large (max " + std::to_string(kOracleMaxDim) + ")");
  }
  if (resolution < 2) throw std::invalid_argument("oracle_quantity: resolution must be >= 2");
  const int axes = 2 * n - 2;
  const double total = std::pow(static_cast<double>(resolution), axes);
  if (total > 2e7) throw std::invalid_argument("oracle_quantity: grid too large");

  const double p = T.space.p();
  const double sign = is_sup(kind) ? -1.0 : 1.0;
  const auto score = [&](const std::vector<double>& t) {
    const ComplexVector x = detail::chart_point(t, n, p);
    return sign * std::abs(witness_value_at(kind, T.matrix, x, p));
  };

  // Axis layout: polar angles first (n - 1 of them, range [0, pi/2]), then
  // phases (n - 1 of them, range [0, 2 pi)).
  constexpr double kPi = std::numbers::pi;
  std::vector<double> lo(axes), span(axes), step(axes);
  for (int a = 0; a < axes; ++a) {
    const bool polar = (n == 2) ? a == 0 : a < 2;
    lo[a] = 0.0;
    span[a] = polar ? kPi / 2 : 2 * kPi;
    step[a] = polar ? span[a] / (resolution - 1) : span[a] / resolution;
  }

  // Full grid of scores, mixed-radix indexed with axis 0 fastest.
  const std::size_t cells = static_cast<std::size_t>(total);
  std::vector<double> grid(cells);
  std::vector<double> t(axes);
  const auto point = [&](std::size_t flat) {
    for (int a = 0; a < axes; ++a) {
      t[a] = lo[a] + static_cast<double>(flat % resolution) * step[a];
      flat /= resolution;
    }
    return t;
  };
  for (std::size_t i = 0; i < cells; ++i) grid[i] = score(point(i));
  int evaluations = static_cast<int>(std::min<std::size_t>(cells, INT32_MAX));

  // Grid-local minima (phase axes wrap, polar axes are clamped) seed the
  // compass search; the kOracleCandidates lowest are refined.
  std::vector<std::size_t> minima;
  std::vector<std::size_t> stride(axes, 1);
  for (int a = 1; a < axes; ++a) stride[a] = stride[a - 1] * resolution;
  for (std::size_t i = 0; i < cells; ++i) {
    bool is_min = true;
    for (int a = 0; a < axes && is_min; ++a) {
      const bool polar = (n == 2) ? a == 0 : a < 2;
      const int k = static_cast<int>((i / stride[a]) % resolution);
      for (int d : {-1, 1}) {
        int kk = k + d;
        if (kk < 0 || kk >= resolution) {
          if (polar) continue;
          kk = (kk + resolution) % resolution;
        }
        const std::size_t j = i + (static_cast<std::ptrdiff_t>(kk) - k) * static_cast<std::ptrdiff_t>(stride[a]);
        if (grid[j] < grid[i]) {
          is_min = false;
          break;
        }
      }
    }
    if (is_min) minima.push_back(i);
  }
  std::stable_sort(minima.begin(), minima.end(),
                   [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
  if (minima.size() > static_cast<std::size_t>(kOracleCandidates)) minima.resize(kOracleCandidates);

  std::vector<double> best_t = point(minima.empty() ? 0 : minima.front());
  double best = score(best_t);
  for (std::size_t seed_cell : minima) {
    std::vector<double> local_t = point(seed_cell);
    double local = grid[seed_cell];
    std::vector<double> h = step;
    for (int iter = 0; iter < 100000; ++iter) {
      bool improved = false;
      for (int a = 0; a < axes; ++a) {
        for (double dir : {1.0, -1.0}) {
          std::vector<double> c = local_t;
          c[a] += dir * h[a];
          const double s = score(c);
          ++evaluations;
          if (s < local) {
            local = s;
            local_t = c;
            improved = true;
          }
        }
      }
      if (!improved) {
        double hmax = 0.0;
        for (double& v : h) {
          v *= 0.5;
          hmax = std::max(hmax, v);
        }
        if (hmax < 1e-12) break;
      }
    }
    if (local < best) {
      best = local;
      best_t = local_t;
    }
  }

  const ComplexVector x = phase_normalized(detail::chart_point(best_t, n, p));
  QuantityValue q{kind, 0.0, CVec(T.space, x), witness_value_at(kind, T.matrix, x, p),
                  Method::oracle, std::nullopt, evaluations};
  q.value = std::abs(q.witness_value);
  return q;
}

}  // namespace lpops
