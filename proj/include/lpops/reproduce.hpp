// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lpops/operator.hpp"
#include "lpops/quantities.hpp"

namespace lpops {

struct ReproLine {
  std::string name;
  double computed = 0.0;
  std::optional<double> target;  // empty for lower-bound style lines
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct ReproReport {
  std::string example;
  std::vector<ReproLine> lines;
  bool ok() const {
    for (const auto& l : lines) {
      if (!l.pass) return false;
    }
    return true;
  }
};

namespace detail {

inline ReproLine target_line(std::string name, double computed, double target, double tol,
                             std::string note = {}) {
  const double dev = std::abs(computed - target);
  return {std::move(name), computed, target, dev, tol, dev < tol, std::move(note)};
}

inline ReproLine below_line(std::string name, double computed, double tol, std::string note = {}) {
  return {std::move(name), computed, 0.0, std::abs(computed), tol, std::abs(computed) < tol,
          std::move(note)};
}

}  // namespace detail

/// x -> (x2, x1, x3, ..., xn) on l^p_n.
inline Operator swap_first_two(int n, double p) {
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  m(0, 0) = m(1, 1) = 0.0;
  m(0, 1) = m(1, 0) = 1.0;
  return Operator(SpaceSpec(n, p), m);
}

inline Operator jordan_2x2() {
  ComplexMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  return Operator(SpaceSpec(2, 2.0), m);
}

inline ReproReport reproduce_ex317(const OptimizerConfig& opt) {
  const Operator T = jordan_2x2();
  const double mu1 = min_modulus(T, opt).value;
  const double mu2 = min_modulus(power(T, 2), opt).value;
  ReproReport r{"ex317", {}};
  r.lines.push_back(detail::target_line("mu(T)^2", mu1 * mu1, (3.0 - std::sqrt(5.0)) / 2.0, 1e-6,
                                        "target (3 - sqrt 5)/2"));
  r.lines.push_back(detail::target_line("mu(T^2)^2", mu2 * mu2, 3.0 - 2.0 * std::sqrt(2.0), 1e-6,
                                        "target 3 - 2 sqrt 2"));
  const double gap = std::abs(mu2 - mu1 * mu1);
  r.lines.push_back({"|mu(T^2) - mu(T)^2|", gap, std::nullopt, gap, 0.03, gap > 0.03,
                     "must exceed 0.03: mu(T^2) != mu(T)^2"});
  return r;
}

/// Swap of the first two coordinates on l^4_n, n = 2..8.
inline ReproReport reproduce_ex46(const OptimizerConfig& opt, int samples = 1000,
                                  int max_dim = 8) {
  ReproReport r{"ex46", {}};
  for (int n = 2; n <= max_dim; ++n) {
    const Operator T = swap_first_two(n, 4.0);
    const auto probe = sample_unit_sphere(T.space, opt.seed + static_cast<std::uint64_t>(n), samples);
    const std::string dim = " n=" + std::to_string(n);
    r.lines.push_back(detail::below_line("self_adjoint residual" + dim,
                                         residual_self_adjoint(T, probe), 1e-9));
    r.lines.push_back(detail::below_line("unitary residual" + dim, residual_unitary(T, opt), 1e-9));
    r.lines.push_back(detail::below_line("normal residual" + dim, residual_normal(T, opt), 1e-9));
  }
  return r;
}

/// F(x1, x2) = (x2, x1) on l^2_2: c(F) = 0 while mu(F) = 1.
inline ReproReport reproduce_swapF(const OptimizerConfig& opt) {
  const Operator F = swap_first_two(2, 2.0);
  ReproReport r{"swapF", {}};
  r.lines.push_back(detail::below_line("c(F)", crawford(F, opt).value, 1e-6));
  r.lines.push_back(detail::target_line("mu(F)", min_modulus(F, opt).value, 1.0, 1e-9));
  return r;
}

inline std::optional<ReproReport> reproduce(std::string_view name, const OptimizerConfig& opt) {
  if (name == "ex317") return reproduce_ex317(opt);
  if (name == "ex46") return reproduce_ex46(opt);
  if (name == "swapF") return reproduce_swapF(opt);
  return std::nullopt;
}

}  // namespace lpops
