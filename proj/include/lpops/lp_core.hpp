// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lpops {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Finite-dimensional complex l^p space, 1 < p < infinity.
///
/// Every such space is smooth, strictly convex and reflexive, so the duality
/// map is single valued and bijective. Exponents within 1e-12 of 2 take the
/// Hilbert-space shortcuts (J is coordinatewise conjugation).
class SpaceSpec {
 public:
  static constexpr double kHilbertSnap = 1e-12;

  SpaceSpec() = default;  // C^1 with the Euclidean norm

  SpaceSpec(int dim, double p) : dim_(dim), p_(p) {
    if (dim < 1) {
      throw std::invalid_argument("SpaceSpec: dim must be positive, got " +
                                  std::to_string(dim));
    }
    if (!std::isfinite(p) || p <= 1.0) {
      throw std::invalid_argument(
          "SpaceSpec: p must satisfy 1 < p < inf (l^p is not smooth "
          "otherwise), got " +
          std::to_string(p));
    }
    if (std::abs(p - 2.0) < kHilbertSnap) p_ = 2.0;
  }

  int dim() const { return dim_; }
  double p() const { return p_; }
  double q() const { return p_ / (p_ - 1.0); }
  bool is_hilbert() const { return p_ == 2.0; }

  static constexpr bool smooth() { return true; }
  static constexpr bool strictly_convex() { return true; }
  static constexpr bool reflexive() { return true; }

  SpaceSpec dual() const { return SpaceSpec(dim_, q()); }

  friend bool operator==(const SpaceSpec& a, const SpaceSpec& b) {
    return a.dim_ == b.dim_ && a.p_ == b.p_;
  }

 private:
  int dim_ = 1;
  double p_ = 2.0;
};

namespace detail {

inline void require_dim(const SpaceSpec& space, Eigen::Index n,
                        const char* what) {
  if (n != space.dim()) {
    throw std::invalid_argument(std::string(what) + ": length " +
                                std::to_string(n) + " does not match dim " +
                                std::to_string(space.dim()));
  }
}

// Scaled evaluation avoids overflow/underflow in |v_i|^p.
inline double lp_norm(const ComplexVector& v, double p) {
  if (p == 2.0) return v.norm();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) scale = std::max(scale, std::abs(v[i]));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += std::pow(std::abs(v[i]) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

// Duality map of l^r evaluated as ||v|| (|v_i|/||v||)^(r-1) conj(v_i)/|v_i|,
// which equals ||v||^(2-r) |v_i|^(r-2) conj(v_i) and is 0 on zero coordinates.
inline ComplexVector lp_duality(const ComplexVector& v, double r) {
  if (r == 2.0) return v.conjugate();
  const double s = lp_norm(v, r);
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    out[i] = a == 0.0 ? Complex(0.0) : s * std::pow(a / s, r - 1.0) * std::conj(v[i]) / a;
  }
  return out;
}

}  // namespace detail

/// Element of X = l^p_n.
struct CVec {
  SpaceSpec space;
  ComplexVector coords = ComplexVector::Zero(1);

  CVec() = default;

  CVec(SpaceSpec s, ComplexVector c) : space(s), coords(std::move(c)) {
    detail::require_dim(space, coords.size(), "CVec");
  }
  static CVec zero(SpaceSpec s) { return CVec(s, ComplexVector::Zero(s.dim())); }

  int dim() const { return space.dim(); }
  Complex operator[](int i) const { return coords[i]; }
};

/// Element of X* = l^q_n, paired with X bilinearly: f(x) = sum f_i x_i.
struct DualVec {
  SpaceSpec space;  // the primal space X
  ComplexVector coords;

  DualVec(SpaceSpec s, ComplexVector c) : space(s), coords(std::move(c)) {
    detail::require_dim(space, coords.size(), "DualVec");
  }

  int dim() const { return space.dim(); }
  Complex operator[](int i) const { return coords[i]; }
};

struct ToleranceConfig {
  double tol_identity = 1e-9;
  double tol_class = 1e-8;
  double tol_quantity = 1e-6;

  void validate() const {
    if (!(tol_identity > 0.0 && tol_class > 0.0 && tol_quantity > 0.0)) {
      throw std::invalid_argument("ToleranceConfig: tolerances must be positive");
    }
  }

  /// Relative scaling rule: tol * max(1, norm_estimate).
  static double effective(double tol, double norm_estimate) {
    return tol * std::max(1.0, norm_estimate);
  }
};

inline double p_norm(const CVec& v) { return detail::lp_norm(v.coords, v.space.p()); }

/// l^q norm, the dual norm of X*.
inline double q_norm(const DualVec& f) { return detail::lp_norm(f.coords, f.space.q()); }

inline Complex dual_pair(const DualVec& f, const CVec& x) {
  if (!(f.space == x.space)) {
    throw std::invalid_argument("dual_pair: functional and vector live on different spaces");
  }
  return (f.coords.array() * x.coords.array()).sum();
}

inline DualVec duality_map(const CVec& x) {
  if (x.coords.isZero(0.0)) throw std::domain_error("duality_map: zero vector");
  return DualVec(x.space, detail::lp_duality(x.coords, x.space.p()));
}

/// J^{-1}: the duality map of l^q, x_i = ||f||_q^(2-q) |f_i|^(q-2) conj(f_i).
inline CVec inv_duality_map(const DualVec& f) {
  if (f.coords.isZero(0.0)) throw std::domain_error("inv_duality_map: zero functional");
  return CVec(f.space, detail::lp_duality(f.coords, f.space.q()));
}

/// |J(x)(y)|; zero exactly when y lies in the J-orthogonal complement of x.
inline double perp_J_residual(const CVec& x, const CVec& y) {
  if (x.coords.isZero(0.0)) throw std::domain_error("perp_J_residual: zero x");
  return std::abs(dual_pair(duality_map(x), y));
}

/// Rotates v so its first non-negligible coordinate is real and positive.
inline ComplexVector phase_normalized(const ComplexVector& v) {
  const double cut = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > cut && a > 0.0) return v * (std::conj(v[i]) / a);
  }
  return v;
}

inline CVec phase_normalized(const CVec& v) { return CVec(v.space, phase_normalized(v.coords)); }

inline CVec normalized(const CVec& v) {
  const double n = p_norm(v);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  return CVec(v.space, v.coords / n);
}

/// Lexicographic order on (re, im) coordinates; used for witness tie-breaks.
inline bool lex_less(const ComplexVector& a, const ComplexVector& b) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return a.size() < b.size();
}

inline ComplexVector gaussian_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v[i] = Complex(re, im);
  }
  return v;
}

/// Deterministic draw of unit vectors (complex Gaussian, rescaled to unit
/// p-norm, phase-normalised).
inline std::vector<CVec> sample_unit_sphere(const SpaceSpec& space, std::uint64_t seed,
                                            int count) {
  if (count < 1) throw std::invalid_argument("sample_unit_sphere: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<CVec> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    ComplexVector v = gaussian_vector(space.dim(), rng);
    const double n = detail::lp_norm(v, space.p());
    if (n == 0.0) continue;
    out.emplace_back(space, phase_normalized(ComplexVector(v / n)));
  }
  return out;
}

}  // namespace lpops
