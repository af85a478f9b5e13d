// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lpops/lp_core.hpp"
#include "lpops/operator.hpp"
#include "lpops/optimizer.hpp"

namespace lpops {

enum class QuantityKind { norm, min_modulus, numerical_radius, crawford };
enum class Method { optimizer, oracle, closed_form };

inline std::string_view to_string(QuantityKind k) {
  switch (k) {
    case QuantityKind::norm: return "norm";
    case QuantityKind::min_modulus: return "min_modulus";
    case QuantityKind::numerical_radius: return "numerical_radius";
    case QuantityKind::crawford: return "crawford";
  }
  return "?";
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::optimizer: return "optimizer";
    case Method::oracle: return "oracle";
    case Method::closed_form: return "closed_form";
  }
  return "?";
}

inline std::optional<QuantityKind> parse_quantity_kind(std::string_view s) {
  if (s == "norm") return QuantityKind::norm;
  if (s == "min_modulus" || s == "min" || s == "mu") return QuantityKind::min_modulus;
  if (s == "numerical_radius" || s == "radius" || s == "r") return QuantityKind::numerical_radius;
  if (s == "crawford" || s == "c") return QuantityKind::crawford;
  return std::nullopt;
}

struct QuantityValue {
  QuantityKind kind = QuantityKind::norm;
  double value = 0.0;
  CVec witness;
  // J(x)(Tx) for r and c; ||Tx|| (as a real complex) for ||T|| and mu.
  Complex witness_value;
  Method method = Method::optimizer;
  // Singular-value reference at p = 2 for ||T|| and mu.
  std::optional<double> reference;
  int evaluations = 0;
};

/// The scalar each quantity extremises, evaluated at a unit vector x.
inline Complex witness_value_at(QuantityKind kind, const ComplexMatrix& T, const ComplexVector& x,
                                double p) {
  switch (kind) {
    case QuantityKind::norm:
    case QuantityKind::min_modulus: return Complex(detail::lp_norm(T * x, p), 0.0);
    case QuantityKind::numerical_radius:
    case QuantityKind::crawford: return numerical_range_value(T, x, p);
  }
  return {};
}

inline bool is_sup(QuantityKind k) {
  return k == QuantityKind::norm || k == QuantityKind::numerical_radius;
}

namespace detail {

inline QuantityValue optimize_quantity(const Operator& T, QuantityKind kind,
                                       const OptimizerConfig& opt) {
  const double p = T.space.p();
  const ComplexMatrix& m = T.matrix;
  // Infima use the squared modulus so the objective stays smooth at 0.
  SphereObjective f;
  switch (kind) {
    case QuantityKind::norm:
      f = [&m, p](const ComplexVector& x) { return lp_norm(m * x, p); };
      break;
    case QuantityKind::min_modulus:
      f = [&m, p](const ComplexVector& x) {
        const double v = lp_norm(m * x, p);
        return v * v;
      };
      break;
    case QuantityKind::numerical_radius:
      f = [&m, p](const ComplexVector& x) { return std::abs(numerical_range_value(m, x, p)); };
      break;
    case QuantityKind::crawford:
      f = [&m, p](const ComplexVector& x) { return std::norm(numerical_range_value(m, x, p)); };
      break;
  }
  // Eigenvectors and right singular vectors join the random starts.
  std::vector<ComplexVector> spectral;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m);
  Eigen::JacobiSVD<ComplexMatrix> sv(m, Eigen::ComputeFullV);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (es.info() == Eigen::Success) spectral.push_back(es.eigenvectors().col(j));
    spectral.push_back(sv.matrixV().col(j));
  }
  for (auto& v : spectral) v /= lp_norm(v, p);
  const SphereOptimum best = optimize_on_sphere(
      T.space, f, is_sup(kind) ? Sense::maximize : Sense::minimize, opt, spectral);

  QuantityValue q{kind, 0.0, CVec(T.space, best.witness),
                  witness_value_at(kind, m, best.witness, p), Method::optimizer, std::nullopt,
                  best.evaluations};
  q.value = std::abs(q.witness_value);
  if (T.space.is_hilbert() &&
      (kind == QuantityKind::norm || kind == QuantityKind::min_modulus)) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& sv = svd.singularValues();
    q.reference = kind == QuantityKind::norm ? sv(0) : sv(sv.size() - 1);
  }
  return q;
}

}  // namespace detail

/// sup ||Tx|| over the unit sphere.
inline QuantityValue operator_norm(const Operator& T, const OptimizerConfig& opt) {
  return detail::optimize_quantity(T, QuantityKind::norm, opt);
}

/// inf ||Tx|| over the unit sphere.
inline QuantityValue min_modulus(const Operator& T, const OptimizerConfig& opt) {
  return detail::optimize_quantity(T, QuantityKind::min_modulus, opt);
}

/// sup |J(x)(Tx)| over the unit sphere.
inline QuantityValue numerical_radius(const Operator& T, const OptimizerConfig& opt) {
  return detail::optimize_quantity(T, QuantityKind::numerical_radius, opt);
}

/// inf |J(x)(Tx)| over the unit sphere.
inline QuantityValue crawford(const Operator& T, const OptimizerConfig& opt) {
  return detail::optimize_quantity(T, QuantityKind::crawford, opt);
}

inline QuantityValue compute_quantity(const Operator& T, QuantityKind kind,
                                      const OptimizerConfig& opt) {
  return detail::optimize_quantity(T, kind, opt);
}

// ---------------------------------------------------------------------------
// Spectrum.

struct EigenPair {
  Complex value;
  CVec vector;  // unit p-norm, phase-normalised
  double residual = 0.0;  // ||Tv - lambda v||_p
};

struct SpectrumReport {
  std::vector<EigenPair> pairs;
  double spectral_radius = 0.0;
  double dist_zero = 0.0;  // min |lambda|, i.e. dist(0, sigma(T))
  bool defective = false;
  double max_residual = 0.0;

  std::vector<Complex> eigenvalues() const {
    std::vector<Complex> out;
    for (const auto& e : pairs) out.push_back(e.value);
    return out;
  }
};

/// Dense eigendecomposition. Eigenvalues are sorted by (re, im); clusters
/// closer than 1e-6 * max(1, rho) are treated as one eigenvalue, and a
/// cluster whose geometric multiplicity is below its size flags a defect.
/// In finite dimension sigma = sigma_eig = sigma_app.
inline SpectrumReport spectrum(const Operator& T) {
  const int n = T.dim();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(T.matrix);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  const auto& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (ev[a].real() != ev[b].real()) return ev[a].real() < ev[b].real();
    return ev[a].imag() < ev[b].imag();
  });

  SpectrumReport rep;
  for (int i = 0; i < n; ++i) rep.spectral_radius = std::max(rep.spectral_radius, std::abs(ev[i]));
  const double scale = std::max(1.0, rep.spectral_radius);
  const double cluster_tol = 1e-6 * scale;
  const double null_tol = 1e-8 * std::max(1.0, T.matrix.cwiseAbs().maxCoeff());

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::vector<EigenPair> pairs;
  for (int a = 0; a < n; ++a) {
    const int ia = order[static_cast<std::size_t>(a)];
    if (used[static_cast<std::size_t>(a)]) continue;
    std::vector<int> cluster;
    for (int b = a; b < n; ++b) {
      const int ib = order[static_cast<std::size_t>(b)];
      if (!used[static_cast<std::size_t>(b)] && std::abs(ev[ib] - ev[ia]) < cluster_tol) {
        cluster.push_back(b);
        used[static_cast<std::size_t>(b)] = true;
      }
    }
    Complex mean(0.0);
    for (int b : cluster) mean += ev[order[static_cast<std::size_t>(b)]];
    mean /= static_cast<double>(cluster.size());

    std::vector<ComplexVector> vecs;
    if (cluster.size() > 1) {
      // Null space of T - lambda I gives a clean eigenbasis for the cluster.
      Eigen::JacobiSVD<ComplexMatrix> svd(T.matrix - mean * ComplexMatrix::Identity(n, n),
                                          Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int geometric = 0;
      for (int k = 0; k < n; ++k) {
        if (sv(k) < null_tol) ++geometric;
      }
      if (geometric < static_cast<int>(cluster.size())) rep.defective = true;
      for (int k = 0; k < geometric; ++k) vecs.push_back(svd.matrixV().col(n - 1 - k));
      // Best-effort vectors fill out a defective cluster.
      for (std::size_t k = vecs.size(); k < cluster.size(); ++k) {
        vecs.push_back(es.eigenvectors().col(order[static_cast<std::size_t>(cluster[k])]));
      }
    } else {
      vecs.push_back(es.eigenvectors().col(ia));
    }

    for (std::size_t k = 0; k < cluster.size(); ++k) {
      const Complex lambda = cluster.size() > 1 ? mean : ev[ia];
      ComplexVector v = vecs[k];
      v /= detail::lp_norm(v, T.space.p());
      v = phase_normalized(v);
      const double res = detail::lp_norm(T.matrix * v - lambda * v, T.space.p());
      rep.max_residual = std::max(rep.max_residual, res);
      pairs.push_back(EigenPair{lambda, CVec(T.space, v), res});
    }
  }
  rep.pairs = std::move(pairs);
  rep.dist_zero = rep.spectral_radius;
  for (const auto& e : rep.pairs) rep.dist_zero = std::min(rep.dist_zero, std::abs(e.value));
  return rep;
}

// ---------------------------------------------------------------------------

struct NumericalRangeSample {
  std::vector<Complex> points;
  std::uint64_t seed = 0;
  int count = 0;
};

inline NumericalRangeSample numerical_range_sample(const Operator& T, int count,
                                                   std::uint64_t seed) {
  NumericalRangeSample s;
  s.seed = seed;
  s.count = count;
  for (const auto& x : sample_unit_sphere(T.space, seed, count)) {
    s.points.push_back(numerical_range_value(T.matrix, x.coords, T.space.p()));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Attainment.

struct AttainmentEntry {
  QuantityValue quantity;
  bool attained = true;  // compact unit sphere in finite dimension
  std::optional<Complex> modulus_match;  // eigenvalue with |lambda| = value
  std::optional<Complex> signed_match;   // eigenvalue equal to +value or -value
  bool characterization_applies = false;
  bool consistent = true;
};

struct AttainmentReport {
  AttainmentEntry norm;
  AttainmentEntry min_modulus;
  AttainmentEntry numerical_radius;
  AttainmentEntry crawford;
  SpectrumReport spectrum;
  double self_adjoint_residual = 0.0;
  bool self_adjoint = false;
  bool crawford_shift_strongly_normal = false;
  double tolerance = 0.0;
};

namespace detail {

inline AttainmentEntry match_entry(const QuantityValue& q, const SpectrumReport& spec, double tol,
                                   bool signed_only_real) {
  AttainmentEntry e;
  e.quantity = q;
  double best_mod = tol;
  double best_signed = tol;
  for (const auto& pr : spec.pairs) {
    const double dm = std::abs(std::abs(pr.value) - q.value);
    if (dm < best_mod) {
      best_mod = dm;
      e.modulus_match = pr.value;
    }
    const double plus = signed_only_real ? std::abs(pr.value - q.value) : dm;
    const double minus = signed_only_real ? std::abs(pr.value + q.value) : dm;
    const double ds = std::min(plus, minus);
    if (ds < best_signed) {
      best_signed = ds;
      e.signed_match = pr.value;
    }
  }
  return e;
}

// True when T - c I is constructively strongly normal: a nonnegative scalar
// multiple of I for any p, or Hermitian PSD at p = 2.
inline bool shift_is_strongly_normal(const Operator& T, double c, double tol) {
  const int n = T.dim();
  const Operator shifted(T.space, T.matrix - c * ComplexMatrix::Identity(n, n));
  const Complex a = shifted.matrix.trace() / static_cast<double>(n);
  if ((shifted.matrix - a * ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < tol &&
      std::abs(a.imag()) < tol && a.real() > -tol) {
    return true;
  }
  if (!T.space.is_hilbert()) return false;
  try {
    const Operator root = principal_sqrt_p2(shifted, tol);
    return norm_upper_bound(Operator(T.space, root.matrix * root.matrix - shifted.matrix)) <
           std::sqrt(tol);
  } catch (const std::invalid_argument&) {
    return false;
  }
}

}  // namespace detail

/// Compares each computed quantity with the spectrum. Finite-dimensional
/// attainment is automatic, so what is checked is the eigenvalue side of each
/// characterisation: +-||T|| and +-mu(T) for self-adjoint T, c(T) itself when
/// T - c(T) I is strongly normal.
inline AttainmentReport attainment_report(const Operator& T, const ToleranceConfig& cfg,
                                          const OptimizerConfig& opt) {
  cfg.validate();
  AttainmentReport rep;
  rep.spectrum = spectrum(T);
  const double est = norm_upper_bound(T);
  rep.tolerance = ToleranceConfig::effective(cfg.tol_quantity, est);
  rep.self_adjoint_residual =
      residual_self_adjoint(T, default_probe_samples(T.space, opt.seed ^ 0xa5a5a5a5ULL));
  rep.self_adjoint = rep.self_adjoint_residual < ToleranceConfig::effective(cfg.tol_class, est);

  rep.norm = detail::match_entry(operator_norm(T, opt), rep.spectrum, rep.tolerance, true);
  rep.min_modulus = detail::match_entry(min_modulus(T, opt), rep.spectrum, rep.tolerance, true);
  rep.numerical_radius =
      detail::match_entry(numerical_radius(T, opt), rep.spectrum, rep.tolerance, false);
  rep.crawford = detail::match_entry(crawford(T, opt), rep.spectrum, rep.tolerance, true);

  rep.norm.characterization_applies = rep.self_adjoint;
  rep.min_modulus.characterization_applies = rep.self_adjoint;
  rep.numerical_radius.characterization_applies = rep.self_adjoint;
  rep.norm.consistent = !rep.self_adjoint || rep.norm.signed_match.has_value();
  rep.min_modulus.consistent = !rep.self_adjoint || rep.min_modulus.signed_match.has_value();
  rep.numerical_radius.consistent =
      !rep.self_adjoint || rep.numerical_radius.modulus_match.has_value();

  rep.crawford_shift_strongly_normal = detail::shift_is_strongly_normal(
      T, rep.crawford.quantity.value, ToleranceConfig::effective(cfg.tol_class, est) * 1e2);
  rep.crawford.characterization_applies = rep.crawford_shift_strongly_normal;
  if (rep.crawford_shift_strongly_normal) {
    // c(T) itself (not -c) must be an eigenvalue.
    bool hit = false;
    for (const auto& pr : rep.spectrum.pairs) {
      hit = hit || std::abs(pr.value - rep.crawford.quantity.value) < rep.tolerance;
    }
    rep.crawford.consistent = hit;
  }
  return rep;
}

}  // namespace lpops
