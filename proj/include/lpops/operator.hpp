// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lpops/lp_core.hpp"
#include "lpops/optimizer.hpp"

namespace lpops {

/// Bounded operator on l^p_n stored as an n x n complex matrix. The transpose
/// T' acts on X* as the plain (unconjugated) matrix transpose, because the
/// pairing is bilinear: (T'f)(x) = f(Tx).
struct Operator {
  SpaceSpec space;
  ComplexMatrix matrix;

  Operator(SpaceSpec s, ComplexMatrix m) : space(s), matrix(std::move(m)) {
    if (matrix.rows() != matrix.cols()) {
      throw std::invalid_argument("Operator: matrix must be square, got " +
                                  std::to_string(matrix.rows()) + "x" +
                                  std::to_string(matrix.cols()));
    }
    detail::require_dim(space, matrix.rows(), "Operator");
  }

  static Operator identity(SpaceSpec s) { return Operator(s, ComplexMatrix::Identity(s.dim(), s.dim())); }

  int dim() const { return space.dim(); }
};

inline CVec apply(const Operator& T, const CVec& x) {
  if (!(T.space == x.space)) throw std::invalid_argument("apply: space mismatch");
  return CVec(x.space, T.matrix * x.coords);
}

inline DualVec transpose_apply(const Operator& T, const DualVec& f) {
  if (!(T.space == f.space)) throw std::invalid_argument("transpose_apply: space mismatch");
  return DualVec(f.space, T.matrix.transpose() * f.coords);
}

inline Operator power(const Operator& T, int n) {
  if (n < 1) throw std::invalid_argument("power: exponent must be >= 1");
  ComplexMatrix result = T.matrix;
  ComplexMatrix base = T.matrix;
  int k = n - 1;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return Operator(T.space, std::move(result));
}

inline Operator operator-(const Operator& a, const Operator& b) {
  if (!(a.space == b.space)) throw std::invalid_argument("operator-: space mismatch");
  return Operator(a.space, a.matrix - b.matrix);
}

/// Riesz-Thorin bound ||A||_{p->p} <= ||A||_1^{1/p} ||A||_inf^{1-1/p}; exact
/// spectral norm at p = 2.
inline double norm_upper_bound(const Operator& T) {
  if (T.space.is_hilbert()) {
    Eigen::JacobiSVD<ComplexMatrix> svd(T.matrix);
    return svd.singularValues()(0);
  }
  const double col = T.matrix.cwiseAbs().colwise().sum().maxCoeff();
  const double row = T.matrix.cwiseAbs().rowwise().sum().maxCoeff();
  const double p = T.space.p();
  if (col == 0.0 || row == 0.0) return 0.0;
  return std::pow(col, 1.0 / p) * std::pow(row, 1.0 - 1.0 / p);
}

/// J(x)(Tx) for x on the unit sphere; a point of the numerical range.
inline Complex numerical_range_value(const ComplexMatrix& T, const ComplexVector& x, double p) {
  const ComplexVector jx = detail::lp_duality(x, p);
  return (jx.array() * (T * x).array()).sum();
}

/// ||T'J(x)||_q.
inline double transpose_duality_norm(const ComplexMatrix& T, const ComplexVector& x, double p) {
  const ComplexVector jx = detail::lp_duality(x, p);
  return detail::lp_norm(T.transpose() * jx, p / (p - 1.0));
}

// ---------------------------------------------------------------------------
// Residual tests for class membership.

/// Fixed seeded probe set used by the self-adjoint residual.
inline std::vector<CVec> default_probe_samples(const SpaceSpec& space, std::uint64_t seed,
                                               int count = 512) {
  return sample_unit_sphere(space, seed, count);
}

/// max over samples of ||T'J(x) - J(Tx)||_q, with J(0) = 0.
inline double residual_self_adjoint(const Operator& T, const std::vector<CVec>& samples) {
  if (samples.empty()) throw std::invalid_argument("residual_self_adjoint: empty sample list");
  const double p = T.space.p();
  const double q = T.space.q();
  double worst = 0.0;
  for (const auto& x : samples) {
    if (!(x.space == T.space)) throw std::invalid_argument("residual_self_adjoint: space mismatch");
    const ComplexVector tx = T.matrix * x.coords;
    const ComplexVector lhs = T.matrix.transpose() * detail::lp_duality(x.coords, p);
    const ComplexVector rhs = tx.isZero(0.0) ? ComplexVector(ComplexVector::Zero(tx.size()))
                                             : detail::lp_duality(tx, p);
    worst = std::max(worst, detail::lp_norm(lhs - rhs, q));
  }
  return worst;
}

/// sup over the sphere of |Im J(x)(Tx)|.
inline double residual_hermitian(const Operator& T, const OptimizerConfig& opt) {
  const double p = T.space.p();
  const auto f = [&](const ComplexVector& x) {
    return std::abs(numerical_range_value(T.matrix, x, p).imag());
  };
  return optimize_on_sphere(T.space, f, Sense::maximize, opt).value;
}

/// max(hermitian residual, max(0, -inf Re J(x)(Tx))).
inline double residual_positive(const Operator& T, const OptimizerConfig& opt) {
  const double p = T.space.p();
  const auto re = [&](const ComplexVector& x) { return numerical_range_value(T.matrix, x, p).real(); };
  const double inf_re = optimize_on_sphere(T.space, re, Sense::minimize, opt).value;
  return std::max(residual_hermitian(T, opt), std::max(0.0, -inf_re));
}

/// sup over the sphere of | ||Tx||_p - ||T'J(x)||_q |.
inline double residual_normal(const Operator& T, const OptimizerConfig& opt) {
  const double p = T.space.p();
  const auto f = [&](const ComplexVector& x) {
    return std::abs(detail::lp_norm(T.matrix * x, p) - transpose_duality_norm(T.matrix, x, p));
  };
  return optimize_on_sphere(T.space, f, Sense::maximize, opt).value;
}

/// sup over the sphere of max(| ||Tx|| - 1 |, | ||T'J(x)|| - 1 |).
inline double residual_unitary(const Operator& T, const OptimizerConfig& opt) {
  const double p = T.space.p();
  const auto f = [&](const ComplexVector& x) {
    const double a = std::abs(detail::lp_norm(T.matrix * x, p) - 1.0);
    const double b = std::abs(transpose_duality_norm(T.matrix, x, p) - 1.0);
    return std::max(a, b);
  };
  return optimize_on_sphere(T.space, f, Sense::maximize, opt).value;
}

// ---------------------------------------------------------------------------
// Strong normality, checked constructively only.

struct StrongNormalWitness {
  ComplexMatrix root;
  double square_residual = 0.0;        // bound on ||S^2 - T||
  double root_self_adjoint_residual = 0.0;
  double tolerance = 0.0;
  bool verdict = false;
};

inline StrongNormalWitness verify_strong_normal(const Operator& T, const Operator& S,
                                                const std::vector<CVec>& samples,
                                                double tol = 1e-8) {
  if (!(T.space == S.space)) throw std::invalid_argument("verify_strong_normal: space mismatch");
  StrongNormalWitness w;
  w.root = S.matrix;
  w.square_residual = norm_upper_bound(Operator(T.space, S.matrix * S.matrix - T.matrix));
  w.root_self_adjoint_residual = residual_self_adjoint(S, samples);
  w.tolerance = ToleranceConfig::effective(tol, norm_upper_bound(T));
  w.verdict = w.square_residual < w.tolerance && w.root_self_adjoint_residual < w.tolerance;
  return w;
}

/// Principal square root of a Hermitian positive semidefinite matrix on l^2.
inline Operator principal_sqrt_p2(const Operator& T, double tol = 1e-8) {
  if (!T.space.is_hilbert()) {
    throw std::invalid_argument("principal_sqrt_p2: spectral square root needs p = 2");
  }
  const double scale = std::max(1.0, T.matrix.cwiseAbs().maxCoeff());
  if ((T.matrix - T.matrix.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument("principal_sqrt_p2: matrix is not Hermitian");
  }
  const ComplexMatrix h = 0.5 * (T.matrix + T.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -tol * scale) {
    throw std::invalid_argument("principal_sqrt_p2: matrix is not positive semidefinite");
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix& u = es.eigenvectors();
  return Operator(T.space, u * ev.cast<Complex>().asDiagonal() * u.adjoint());
}

// ---------------------------------------------------------------------------

struct ClassificationReport {
  double residual_self_adjoint = 0.0;
  double residual_hermitian = 0.0;
  double residual_positive = 0.0;
  double residual_normal = 0.0;
  double residual_unitary = 0.0;
  bool self_adjoint = false;
  bool hermitian = false;
  bool positive = false;
  bool normal = false;
  bool unitary = false;
  std::optional<StrongNormalWitness> strong_normal;
  double tolerance = 0.0;  // effective (scaled) class tolerance
  double norm_estimate = 0.0;
  ToleranceConfig config;
};

inline ClassificationReport classify(const Operator& T, const ToleranceConfig& cfg,
                                     OptimizerConfig opt, std::uint64_t seed) {
  cfg.validate();
  opt.seed = seed;
  ClassificationReport r;
  r.config = cfg;
  r.norm_estimate = norm_upper_bound(T);
  r.tolerance = ToleranceConfig::effective(cfg.tol_class, r.norm_estimate);

  const auto samples = default_probe_samples(T.space, seed ^ 0x9e3779b97f4a7c15ULL);
  r.residual_self_adjoint = residual_self_adjoint(T, samples);
  r.residual_hermitian = residual_hermitian(T, opt);
  r.residual_positive = residual_positive(T, opt);
  r.residual_normal = residual_normal(T, opt);
  r.residual_unitary = residual_unitary(T, opt);

  r.self_adjoint = r.residual_self_adjoint < r.tolerance;
  r.hermitian = r.residual_hermitian < r.tolerance;
  r.positive = r.residual_positive < r.tolerance;
  r.normal = r.residual_normal < r.tolerance;
  r.unitary = r.residual_unitary < r.tolerance;

  if (r.positive && r.self_adjoint) {
    const int n = T.dim();
    const Complex a = T.matrix.trace() / static_cast<double>(n);
    const bool scalar = (T.matrix - a * ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <
                        r.tolerance;
    if (scalar && a.real() >= 0.0) {
      const ComplexMatrix root = std::sqrt(a.real()) * ComplexMatrix::Identity(n, n);
      r.strong_normal = verify_strong_normal(T, Operator(T.space, root), samples, cfg.tol_class);
    } else if (T.space.is_hilbert()) {
      try {
        r.strong_normal = verify_strong_normal(T, principal_sqrt_p2(T, r.tolerance), samples,
                                               cfg.tol_class);
      } catch (const std::invalid_argument&) {
        // residual-positive but numerically indefinite: no witness
      }
    }
  }
  return r;
}

}  // namespace lpops
