// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lpops/lp_core.hpp"

namespace lpops {

struct OptimizerConfig {
  int starts = 32;
  int max_iters = 500;
  double fd_step = 1e-6;
  double conv_tol = 1e-10;
  std::uint64_t seed = 0x5eed;
  // Candidate pool per start; the best `starts` pool points seed the local runs.
  int pool_factor = 8;

  void validate() const {
    if (starts < 1) throw std::invalid_argument("OptimizerConfig: starts must be >= 1");
    if (max_iters < 1) throw std::invalid_argument("OptimizerConfig: max_iters must be >= 1");
    if (!(fd_step > 0.0) || !(conv_tol > 0.0)) {
      throw std::invalid_argument("OptimizerConfig: fd_step and conv_tol must be positive");
    }
    if (pool_factor < 1) throw std::invalid_argument("OptimizerConfig: pool_factor must be >= 1");
  }
};

enum class Sense { minimize, maximize };

/// Objective evaluated on a unit vector of the space.
using SphereObjective = std::function<double(const ComplexVector&)>;

struct SphereOptimum {
  double value = 0.0;
  ComplexVector witness;  // unit p-norm, phase-normalised
  int evaluations = 0;
};

namespace detail {

// Unconstrained real parametrisation v in R^{2n}; the objective sees v/||v||_p.
class SphereProblem {
 public:
  SphereProblem(const SpaceSpec& space, const SphereObjective& f, Sense sense)
      : space_(space), f_(f), sign_(sense == Sense::minimize ? 1.0 : -1.0) {}

  Eigen::Index size() const { return 2 * space_.dim(); }

  ComplexVector to_unit(const Eigen::VectorXd& v) const {
    const int n = space_.dim();
    ComplexVector z(n);
    for (int i = 0; i < n; ++i) z[i] = Complex(v[2 * i], v[2 * i + 1]);
    const double s = lp_norm(z, space_.p());
    return s == 0.0 ? z : ComplexVector(z / s);
  }

  Eigen::VectorXd to_real(const ComplexVector& z) const {
    Eigen::VectorXd v(size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      v[2 * i] = z[i].real();
      v[2 * i + 1] = z[i].imag();
    }
    return v;
  }

  double operator()(const Eigen::VectorXd& v) {
    ++evaluations;
    const ComplexVector z = to_unit(v);
    if (z.isZero(0.0)) return std::numeric_limits<double>::infinity();
    return sign_ * f_(z);
  }

  // Fourth-order central stencil; the h^2 bias of the 3-point stencil is
  // large when the objective spans many orders of magnitude (high powers).
  Eigen::VectorXd gradient(const Eigen::VectorXd& v, double h) {
    Eigen::VectorXd g(v.size());
    Eigen::VectorXd w = v;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const double x0 = v[k];
      w[k] = x0 + h;
      const double fp1 = (*this)(w);
      w[k] = x0 - h;
      const double fm1 = (*this)(w);
      w[k] = x0 + 2 * h;
      const double fp2 = (*this)(w);
      w[k] = x0 - 2 * h;
      const double fm2 = (*this)(w);
      w[k] = x0;
      g[k] = (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
    }
    return g;
  }

  double sign() const { return sign_; }
  const SpaceSpec& space() const { return space_; }

  int evaluations = 0;

 private:
  SpaceSpec space_;
  const SphereObjective& f_;
  double sign_;
};

// BFGS with Armijo backtracking; returns the locally optimal real parameter.
inline Eigen::VectorXd bfgs_minimize(SphereProblem& prob, Eigen::VectorXd v,
                                     const OptimizerConfig& cfg) {
  const Eigen::Index m = v.size();
  double f = prob(v);
  Eigen::VectorXd g = prob.gradient(v, cfg.fd_step);
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(m, m);
  int stalls = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < cfg.conv_tol) break;
    Eigen::VectorXd d = -H * g;
    if (d.dot(g) >= 0.0) {
      H.setIdentity();
      d = -g;
    }
    const double dn = d.norm();
    if (dn > 0.5) d *= 0.5 / dn;

    const double slope = d.dot(g);
    double t = 1.0;
    double f_new = f;
    Eigen::VectorXd v_new = v;
    bool accepted = false;
    while (t > 1e-14) {
      v_new = v + t * d;
      f_new = prob(v_new);
      if (f_new <= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted || !(f_new <= f)) {
      if (H.isIdentity(0.0)) break;
      H.setIdentity();
      continue;
    }

    // Scale invariance lets us re-project to the unit sphere; curvature data
    // from the old scale is discarded when that happens.
    bool rescaled = false;
    {
      ComplexVector z(v_new.size() / 2);
      for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = Complex(v_new[2 * i], v_new[2 * i + 1]);
      const double s = lp_norm(z, prob.space().p());
      if (s < 0.5 || s > 2.0) {
        v_new /= s;
        rescaled = true;
      }
    }

    const Eigen::VectorXd g_new = prob.gradient(v_new, cfg.fd_step);
    if (rescaled) {
      H.setIdentity();
    } else {
      const Eigen::VectorXd s = v_new - v;
      const Eigen::VectorXd y = g_new - g;
      const double sy = s.dot(y);
      if (sy > 1e-300 && sy > 1e-12 * s.norm() * y.norm()) {
        const double rho = 1.0 / sy;
        const Eigen::VectorXd Hy = H * y;
        H += ((sy + y.dot(Hy)) * rho * rho) * (s * s.transpose()) -
             rho * (Hy * s.transpose() + s * Hy.transpose());
      }
    }

    const double gain = f - f_new;
    stalls = gain <= 1e-15 * std::max(1.0, std::abs(f)) ? stalls + 1 : 0;
    v = v_new;
    f = f_new;
    g = g_new;
    if (stalls >= 4) break;
  }
  return v;
}

}  // namespace detail

/// Multi-start optimisation of `f` over the unit sphere of `space`.
///
/// A seeded pool of `starts * pool_factor` sphere samples is scored and
/// `starts` of them are refined by BFGS with finite-difference gradients.
/// The reduction is deterministic: best value wins, near-ties go to the
/// lexicographically smallest phase-normalised witness. `extra_starts` are
/// always refined in addition to the pool picks.
inline SphereOptimum optimize_on_sphere(const SpaceSpec& space, const SphereObjective& f,
                                        Sense sense, const OptimizerConfig& cfg,
                                        const std::vector<ComplexVector>& extra_starts = {}) {
  cfg.validate();
  detail::SphereProblem prob(space, f, sense);

  const int pool_size = cfg.starts * cfg.pool_factor;
  const std::vector<CVec> pool = sample_unit_sphere(space, cfg.seed, pool_size);
  std::vector<double> scores(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) scores[i] = prob.sign() * f(pool[i].coords);
  prob.evaluations += pool_size;

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Half the starts are the best-scoring samples, the rest are spread evenly
  // over the remaining ranks so distant basins are also visited.
  std::vector<ComplexVector> starts;
  const int elite = (cfg.starts + 1) / 2;
  for (int i = 0; i < elite; ++i) starts.push_back(pool[order[i]].coords);
  const int spread = cfg.starts - elite;
  const std::size_t rest = pool.size() - static_cast<std::size_t>(elite);
  for (int i = 0; i < spread; ++i) {
    const std::size_t k = static_cast<std::size_t>(elite) + (rest * static_cast<std::size_t>(i)) / static_cast<std::size_t>(spread);
    starts.push_back(pool[order[k]].coords);
  }
  for (const auto& s : extra_starts) starts.push_back(s);

  bool have = false;
  double best = 0.0;
  ComplexVector best_x;
  for (const auto& s : starts) {
    const Eigen::VectorXd v = detail::bfgs_minimize(prob, prob.to_real(s), cfg);
    const ComplexVector x = phase_normalized(prob.to_unit(v));
    const double val = prob.sign() * f(x);
    const double tie = 1e-14 * std::max(1.0, std::abs(val));
    if (!have || val < best - tie) {
      best = val;
      best_x = x;
      have = true;
    } else if (std::abs(val - best) <= tie && lex_less(x, best_x)) {
      best = std::min(best, val);
      best_x = x;
    }
  }

  SphereOptimum out;
  out.witness = best_x;
  out.value = f(best_x);
  out.evaluations = prob.evaluations;
  return out;
}

}  // namespace lpops
