// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "lpops/lp_core.hpp"
#include "lpops/operator.hpp"
#include "lpops/optimizer.hpp"
#include "lpops/quantities.hpp"

namespace lpops {

// ---------------------------------------------------------------------------
// Instance generation.

enum class InstanceTag {
  hermitian_p2,
  signed_sym_perm,
  scaled_sym_perm,
  unitary_p2,
  gen_perm_isometry,
  strongly_normal,
  shifted_strongly_normal,
  jordan_like,
  normal_p2,
  arbitrary,
};

inline std::string_view to_string(InstanceTag t) {
  switch (t) {
    case InstanceTag::hermitian_p2: return "hermitian_p2";
    case InstanceTag::signed_sym_perm: return "signed_sym_perm";
    case InstanceTag::scaled_sym_perm: return "scaled_sym_perm";
    case InstanceTag::unitary_p2: return "unitary_p2";
    case InstanceTag::gen_perm_isometry: return "gen_perm_isometry";
    case InstanceTag::strongly_normal: return "strongly_normal";
    case InstanceTag::shifted_strongly_normal: return "shifted_strongly_normal";
    case InstanceTag::jordan_like: return "jordan_like";
    case InstanceTag::normal_p2: return "normal_p2";
    case InstanceTag::arbitrary: return "arbitrary";
  }
  return "?";
}

struct InstanceKind {
  InstanceTag tag = InstanceTag::arbitrary;
  int dim = 2;
  double p = 2.0;
  // Real scale for scaled_sym_perm / jordan_like; 0 draws one from [0.5, 2].
  double scale = 0.0;
  // alpha >= 0 in S^2 + alpha I.
  double shift = 0.0;
  // Forces an exact zero eigenvalue (hermitian_p2, normal_p2, strongly_normal).
  bool singular = false;
};

struct Instance {
  InstanceKind kind;
  std::uint64_t seed = 0;
  Operator op;
  std::optional<Operator> root;  // S with op - shift*I = S^2, when known

  std::string descriptor() const {
    std::ostringstream os;
    os << to_string(kind.tag) << "(n=" << kind.dim << ",p=" << kind.p;
    if (kind.scale != 0.0) os << ",scale=" << kind.scale;
    if (kind.shift != 0.0) os << ",shift=" << kind.shift;
    if (kind.singular) os << ",singular";
    os << ",seed=" << seed << ")";
    return os.str();
  }
};

namespace detail {

inline ComplexMatrix haar_unitary(int n, std::mt19937_64& rng) {
  ComplexMatrix g(n, n);
  for (int j = 0; j < n; ++j) g.col(j) = gaussian_vector(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

// Random involution with matching signs: P(i, sigma(i)) = s_i, s_i = s_sigma(i).
inline ComplexMatrix signed_symmetric_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::bernoulli_distribution coin(0.5);
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  for (std::size_t k = 0; k + 1 < idx.size(); k += 2) {
    if (coin(rng)) {
      sigma[static_cast<std::size_t>(idx[k])] = idx[k + 1];
      sigma[static_cast<std::size_t>(idx[k + 1])] = idx[k];
    }
  }
  std::vector<double> sign(static_cast<std::size_t>(n), 1.0);
  for (int i = 0; i < n; ++i) {
    const int j = sigma[static_cast<std::size_t>(i)];
    if (j >= i) {
      const double s = coin(rng) ? 1.0 : -1.0;
      sign[static_cast<std::size_t>(i)] = s;
      sign[static_cast<std::size_t>(j)] = s;
    }
  }
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, sigma[static_cast<std::size_t>(i)]) = sign[static_cast<std::size_t>(i)];
  return m;
}

inline double draw_scale(double requested, std::mt19937_64& rng) {
  if (requested != 0.0) return requested;
  std::uniform_real_distribution<double> u(0.5, 2.0);
  return u(rng);
}

// Hermitian with |eigenvalues| in [0.5, 2] and random signs.
inline ComplexMatrix random_hermitian(int n, bool singular, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) lam[i] = (coin(rng) ? 1.0 : -1.0) * mag(rng);
  if (singular) lam[0] = 0.0;
  const ComplexMatrix u = haar_unitary(n, rng);
  ComplexMatrix h = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (h + h.adjoint());
}

inline void require_self_adjoint(const Operator& T, std::uint64_t seed, const char* what) {
  const double res = residual_self_adjoint(T, default_probe_samples(T.space, seed ^ 0x51ed, 256));
  if (!(res < 1e-10 * std::max(1.0, norm_upper_bound(T)))) {
    throw std::logic_error(std::string("gen_instance: ") + what +
                           " failed self-adjoint validation, residual " + std::to_string(res));
  }
}

// Self-adjoint root for the strongly normal families: Hermitian at p = 2,
// scaled signed symmetric permutation otherwise.
inline ComplexMatrix self_adjoint_root(const InstanceKind& k, std::mt19937_64& rng) {
  if (SpaceSpec(k.dim, k.p).is_hilbert()) return random_hermitian(k.dim, k.singular, rng);
  if (k.singular) {
    throw std::invalid_argument("gen_instance: singular strongly normal instances need p = 2");
  }
  return draw_scale(k.scale, rng) * signed_symmetric_permutation(k.dim, rng);
}

}  // namespace detail

inline Instance gen_instance(const InstanceKind& kind, std::uint64_t seed) {
  const SpaceSpec space(kind.dim, kind.p);
  const int n = kind.dim;
  std::mt19937_64 rng(seed);
  const auto need_p2 = [&](const char* what) {
    if (!space.is_hilbert()) {
      throw std::invalid_argument(std::string("gen_instance: ") + what + " requires p = 2");
    }
  };
  if (kind.shift < 0.0) throw std::invalid_argument("gen_instance: shift must be >= 0");

  Instance inst{kind, seed, Operator::identity(space), std::nullopt};
  switch (kind.tag) {
    case InstanceTag::hermitian_p2: {
      need_p2("hermitian_p2");
      inst.op = Operator(space, detail::random_hermitian(n, kind.singular, rng));
      detail::require_self_adjoint(inst.op, seed, "hermitian_p2");
      break;
    }
    case InstanceTag::signed_sym_perm: {
      inst.op = Operator(space, detail::signed_symmetric_permutation(n, rng));
      detail::require_self_adjoint(inst.op, seed, "signed_sym_perm");
      break;
    }
    case InstanceTag::scaled_sym_perm: {
      const double s = detail::draw_scale(kind.scale, rng);
      inst.kind.scale = s;
      inst.op = Operator(space, s * detail::signed_symmetric_permutation(n, rng));
      detail::require_self_adjoint(inst.op, seed, "scaled_sym_perm");
      break;
    }
    case InstanceTag::unitary_p2: {
      need_p2("unitary_p2");
      inst.op = Operator(space, detail::haar_unitary(n, rng));
      break;
    }
    case InstanceTag::gen_perm_isometry: {
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.141592653589793);
      ComplexMatrix m = ComplexMatrix::Zero(n, n);
      for (int j = 0; j < n; ++j) m(perm[static_cast<std::size_t>(j)], j) = std::polar(1.0, phase(rng));
      inst.op = Operator(space, m);
      break;
    }
    case InstanceTag::strongly_normal:
    case InstanceTag::shifted_strongly_normal: {
      const double alpha = kind.tag == InstanceTag::shifted_strongly_normal ? kind.shift : 0.0;
      const ComplexMatrix s = detail::self_adjoint_root(kind, rng);
      const Operator root(space, s);
      detail::require_self_adjoint(root, seed, "strongly normal root");
      inst.root = root;
      inst.op = Operator(space, s * s + alpha * ComplexMatrix::Identity(n, n));
      break;
    }
    case InstanceTag::jordan_like: {
      const double lambda = kind.scale != 0.0 ? kind.scale : 1.0;
      ComplexMatrix m = lambda * ComplexMatrix::Identity(n, n);
      for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
      inst.op = Operator(space, m);
      break;
    }
    case InstanceTag::normal_p2: {
      need_p2("normal_p2");
      std::uniform_real_distribution<double> mag(0.5, 2.0);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.141592653589793);
      Eigen::VectorXcd lam(n);
      for (int i = 0; i < n; ++i) lam[i] = std::polar(mag(rng), phase(rng));
      if (kind.singular) lam[0] = 0.0;
      const ComplexMatrix u = detail::haar_unitary(n, rng);
      inst.op = Operator(space, u * lam.asDiagonal() * u.adjoint());
      break;
    }
    case InstanceTag::arbitrary: {
      ComplexMatrix m(n, n);
      for (int j = 0; j < n; ++j) m.col(j) = gaussian_vector(n, rng);
      inst.op = Operator(space, m / std::sqrt(2.0 * n));
      break;
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Check records.

enum class CheckStatus { pass, fail, skipped };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

struct CheckReport {
  std::string id;
  std::string instance;
  std::uint64_t seed = 0;
  double left = 0.0;
  double right = 0.0;
  double abs_deviation = 0.0;
  double rel_deviation = 0.0;
  // Which deviation the verdict gates on: "abs", "rel", or "agree" (0/1).
  std::string metric = "abs";
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::skipped;
  // Counterexample checks pass when the identity is shown to break.
  bool expected_failure = false;
  std::string note;

  double deviation() const { return metric == "rel" ? rel_deviation : abs_deviation; }
};

struct HarnessTolerances {
  double power_rel = 1e-5;
  double quantity_abs = 1e-6;
  double class_tol = 1e-8;
  double perp = 1e-8;
  double unitary = 1e-8;
  double counterexample_gap = 0.03;
};

namespace detail {

inline CheckReport make_report(std::string id, const Instance& inst, double left, double right,
                               std::string metric, double tol, std::string note = {}) {
  CheckReport r;
  r.id = std::move(id);
  r.instance = inst.descriptor();
  r.seed = inst.seed;
  r.left = left;
  r.right = right;
  r.abs_deviation = std::abs(left - right);
  const double mag = std::max(std::abs(left), std::abs(right));
  // Values both below 1e-12 compare absolutely.
  r.rel_deviation = mag < 1e-12 ? r.abs_deviation : r.abs_deviation / std::abs(right == 0.0 ? mag : right);
  r.metric = std::move(metric);
  r.tolerance = tol;
  r.status = r.deviation() < tol ? CheckStatus::pass : CheckStatus::fail;
  r.note = std::move(note);
  return r;
}

inline CheckReport make_skip(std::string id, const Instance& inst, std::string reason) {
  CheckReport r;
  r.id = std::move(id);
  r.instance = inst.descriptor();
  r.seed = inst.seed;
  r.status = CheckStatus::skipped;
  r.note = std::move(reason);
  return r;
}

inline bool verdict_self_adjoint(const Operator& T, double tol) {
  const auto samples = default_probe_samples(T.space, 0xc0ffee, 512);
  return residual_self_adjoint(T, samples) < ToleranceConfig::effective(tol, norm_upper_bound(T));
}

inline double smallest_singular_value(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// The spectrum point closest to `target`.
inline double distance_to_spectrum(const SpectrumReport& s, Complex target) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : s.pairs) best = std::min(best, std::abs(e.value - target));
  return best;
}

}  // namespace detail

/// Power identities for self-adjoint T, n = 1..N:
///   ||T^n|| = ||T||^n, r(T^n) = r(T)^n, mu(T^n) = mu(T)^n,
///   c(T^2n) = mu(T^2n), c(T^2n) = mu(T^n)^2, and c(T^2n) = c(T)^2n when c = mu.
/// With `counterexample`, a non-self-adjoint T is instead checked for the
/// failure mu(T^2) != mu(T)^2.
inline std::vector<CheckReport> check_power_laws(const Instance& inst, int N,
                                                 const OptimizerConfig& opt,
                                                 const HarnessTolerances& tol = {},
                                                 bool counterexample = false) {
  const Operator& T = inst.op;
  std::vector<CheckReport> out;
  const bool sa = detail::verdict_self_adjoint(T, tol.class_tol);
  if (!sa) {
    if (counterexample) {
      const double mu1 = min_modulus(T, opt).value;
      const double mu2 = min_modulus(power(T, 2), opt).value;
      CheckReport r = detail::make_report("jordan_power_counterexample", inst, mu2, mu1 * mu1,
                                          "abs", tol.counterexample_gap,
                                          "mu(T^2) vs mu(T)^2 on a non-self-adjoint operator");
      r.expected_failure = true;
      r.status = r.abs_deviation > tol.counterexample_gap ? CheckStatus::pass : CheckStatus::fail;
      out.push_back(r);
      return out;
    }
    for (const char* id : {"power_norm", "power_radius", "power_min_modulus", "even_power_crawford"}) {
      out.push_back(detail::make_skip(id, inst, "operator is not self-adjoint"));
    }
    return out;
  }

  const double nrm = operator_norm(T, opt).value;
  const double rad = numerical_radius(T, opt).value;
  const double mu = min_modulus(T, opt).value;
  const double craw = crawford(T, opt).value;
  const bool c_equals_mu = std::abs(craw - mu) < tol.quantity_abs * std::max(1.0, nrm);

  for (int n = 1; n <= N; ++n) {
    const Operator Tn = power(T, n);
    const Operator T2n = power(T, 2 * n);
    const std::string tag = "n=" + std::to_string(n);
    const double mu_n = min_modulus(Tn, opt).value;
    if (n > 1) {
      out.push_back(detail::make_report("power_norm", inst, operator_norm(Tn, opt).value,
                                        std::pow(nrm, n), "rel", tol.power_rel, tag));
      out.push_back(detail::make_report("power_radius", inst, numerical_radius(Tn, opt).value,
                                        std::pow(rad, n), "rel", tol.power_rel, tag));
      out.push_back(detail::make_report("power_min_modulus", inst, mu_n, std::pow(mu, n), "rel",
                                        tol.power_rel, tag));
    }
    const double c2n = crawford(T2n, opt).value;
    const double mu2n = min_modulus(T2n, opt).value;
    out.push_back(detail::make_report("even_power_crawford", inst, c2n, mu2n, "rel",
                                      tol.power_rel, tag + " c(T^2n) vs mu(T^2n)"));
    out.push_back(detail::make_report("even_power_crawford", inst, c2n, mu_n * mu_n, "rel",
                                      tol.power_rel, tag + " c(T^2n) vs mu(T^n)^2"));
    if (c_equals_mu) {
      out.push_back(detail::make_report("even_power_crawford_shifted", inst, c2n,
                                        std::pow(craw, 2 * n), "rel", tol.power_rel,
                                        tag + " c(T^2n) vs c(T)^2n"));
    }
  }
  return out;
}

/// r(T) = rho(T) = ||T|| for self-adjoint T.
inline std::vector<CheckReport> check_sa_equalities(const Instance& inst, const OptimizerConfig& opt,
                                                    const HarnessTolerances& tol = {}) {
  const Operator& T = inst.op;
  if (!detail::verdict_self_adjoint(T, tol.class_tol)) {
    return {detail::make_skip("sa_radius_equalities", inst, "operator is not self-adjoint")};
  }
  const double r = numerical_radius(T, opt).value;
  const double nrm = operator_norm(T, opt).value;
  const double rho = spectrum(T).spectral_radius;
  return {
      detail::make_report("sa_radius_equalities", inst, r, rho, "abs", tol.quantity_abs, "r vs rho"),
      detail::make_report("sa_radius_equalities", inst, r, nrm, "abs", tol.quantity_abs, "r vs ||T||"),
  };
}

enum class AttainmentPath { self_adjoint, crawford };

/// Eigenvalue side of the attainment characterisations. Self-adjoint path:
/// +-||T|| and +-mu(T) are eigenvalues (hypotheses ||T||^2 I - T^2 and
/// T^2 - mu^2 I strongly normal verified constructively), and the r-witness
/// attains ||T||. Crawford path: c(T) is an eigenvalue when T - c(T) I is
/// strongly normal, plus mu(T) when T^2 - c(T)^2 I is too.
inline std::vector<CheckReport> check_attainment_equivalences(const Instance& inst,
                                                              const ToleranceConfig& cfg,
                                                              const OptimizerConfig& opt,
                                                              AttainmentPath path,
                                                              const HarnessTolerances& tol = {}) {
  const Operator& T = inst.op;
  const int n = T.dim();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  const double est = norm_upper_bound(T);
  const double shift_tol = ToleranceConfig::effective(cfg.tol_class, est) * 1e2;
  std::vector<CheckReport> out;
  const SpectrumReport spec = spectrum(T);

  if (path == AttainmentPath::self_adjoint) {
    if (!detail::verdict_self_adjoint(T, tol.class_tol)) {
      for (const char* id : {"norm_attainment", "min_attainment", "radius_norm_equivalence",
                             "radius_attainment_transfer"}) {
        out.push_back(detail::make_skip(id, inst, "operator is not self-adjoint"));
      }
      return out;
    }
    const QuantityValue nrm = operator_norm(T, opt);
    const QuantityValue mu = min_modulus(T, opt);
    const QuantityValue rad = numerical_radius(T, opt);
    const ComplexMatrix t2 = T.matrix * T.matrix;

    const Operator norm_gap(T.space, nrm.value * nrm.value * I - t2);
    if (detail::shift_is_strongly_normal(norm_gap, 0.0, shift_tol)) {
      const double d = std::min(detail::distance_to_spectrum(spec, nrm.value),
                                detail::distance_to_spectrum(spec, -nrm.value));
      out.push_back(detail::make_report("norm_attainment", inst, d, 0.0, "abs", tol.quantity_abs,
                                        "distance from +-||T|| to the spectrum"));
      out.push_back(detail::make_report("radius_norm_equivalence", inst, rad.value, nrm.value,
                                        "abs", tol.quantity_abs,
                                        "r attained, ||T|| attained, +-||T|| eigenvalue"));
    } else {
      out.push_back(detail::make_skip("norm_attainment", inst,
                                      "||T||^2 I - T^2 not constructively strongly normal"));
    }
    const Operator min_gap(T.space, t2 - mu.value * mu.value * I);
    if (detail::shift_is_strongly_normal(min_gap, 0.0, shift_tol)) {
      const double d = std::min(detail::distance_to_spectrum(spec, mu.value),
                                detail::distance_to_spectrum(spec, -mu.value));
      out.push_back(detail::make_report("min_attainment", inst, d, 0.0, "abs", tol.quantity_abs,
                                        "distance from +-mu(T) to the spectrum"));
    } else {
      out.push_back(detail::make_skip("min_attainment", inst,
                                      "T^2 - mu^2 I not constructively strongly normal"));
    }
    const double at_witness = detail::lp_norm(T.matrix * rad.witness.coords, T.space.p());
    out.push_back(detail::make_report("radius_attainment_transfer", inst, at_witness, nrm.value,
                                      "abs", tol.quantity_abs, "||T x0|| at the r-witness x0"));
    return out;
  }

  const QuantityValue c = crawford(T, opt);
  if (!detail::shift_is_strongly_normal(T, c.value, shift_tol)) {
    out.push_back(detail::make_skip("crawford_attainment", inst,
                                    "T - c(T) I not constructively strongly normal"));
    return out;
  }
  out.push_back(detail::make_report("crawford_attainment", inst,
                                    detail::distance_to_spectrum(spec, c.value), 0.0, "abs",
                                    tol.quantity_abs, "distance from c(T) to the spectrum"));
  const Operator sq_gap(T.space, T.matrix * T.matrix - c.value * c.value * I);
  if (detail::shift_is_strongly_normal(sq_gap, 0.0, shift_tol)) {
    const QuantityValue mu = min_modulus(T, opt);
    out.push_back(detail::make_report("crawford_min_attainment", inst,
                                      detail::distance_to_spectrum(spec, mu.value), 0.0, "abs",
                                      tol.quantity_abs, "distance from mu(T) to the spectrum"));
  } else {
    out.push_back(detail::make_skip("crawford_min_attainment", inst,
                                    "T^2 - c^2 I not constructively strongly normal"));
  }
  return out;
}

enum class CrawfordPath { shifted_strongly_normal, strongly_normal_zero, singular_normal };

/// c(T) = mu(T) on the three routes: T - c I strongly normal, T strongly
/// normal with c = 0, T normal and singular. The singular route also checks
/// that invertibility and boundedness below agree.
inline std::vector<CheckReport> check_crawford_equals_min(const Instance& inst,
                                                          const OptimizerConfig& opt,
                                                          CrawfordPath path,
                                                          const HarnessTolerances& tol = {}) {
  const Operator& T = inst.op;
  const double est = norm_upper_bound(T);
  const double c = crawford(T, opt).value;
  const double mu = min_modulus(T, opt).value;
  std::vector<CheckReport> out;
  switch (path) {
    case CrawfordPath::shifted_strongly_normal: {
      if (!detail::shift_is_strongly_normal(T, c, ToleranceConfig::effective(tol.class_tol, est) * 1e2)) {
        out.push_back(detail::make_skip("crawford_equals_min", inst,
                                        "T - c(T) I not constructively strongly normal"));
        break;
      }
      out.push_back(detail::make_report("crawford_equals_min", inst, c, mu, "abs",
                                        tol.quantity_abs, "c(T) vs mu(T)"));
      break;
    }
    case CrawfordPath::strongly_normal_zero: {
      const auto samples = default_probe_samples(T.space, inst.seed, 256);
      const bool sn = inst.root.has_value() &&
                      verify_strong_normal(T, *inst.root, samples, tol.class_tol).verdict;
      if (!sn || !(c < tol.quantity_abs)) {
        out.push_back(detail::make_skip("strong_normal_zero_crawford", inst,
                                        sn ? "c(T) is not 0" : "no strongly normal root"));
        break;
      }
      out.push_back(detail::make_report("strong_normal_zero_crawford", inst, mu, 0.0, "abs",
                                        tol.quantity_abs, "mu(T) for strongly normal T with c = 0"));
      break;
    }
    case CrawfordPath::singular_normal: {
      const double normal_res = residual_normal(T, opt);
      const double smin = detail::smallest_singular_value(T.matrix);
      const double gate = ToleranceConfig::effective(tol.class_tol, est);
      if (!(normal_res < gate)) {
        out.push_back(detail::make_skip("singular_normal_crawford", inst, "operator is not normal"));
        break;
      }
      const bool singular = smin < gate;
      const bool bounded_below = mu > tol.quantity_abs;
      CheckReport agree = detail::make_report("invertible_bounded_below", inst, smin, mu, "agree",
                                              0.5, "sigma_min(T) vs mu(T)");
      agree.abs_deviation = agree.rel_deviation = (singular == !bounded_below) ? 0.0 : 1.0;
      agree.status = agree.abs_deviation < 0.5 ? CheckStatus::pass : CheckStatus::fail;
      out.push_back(agree);
      if (!singular) {
        out.push_back(detail::make_skip("singular_normal_crawford", inst, "operator is invertible"));
        break;
      }
      out.push_back(detail::make_report("singular_normal_crawford", inst, c, 0.0, "abs",
                                        tol.quantity_abs, "c(T) for singular normal T"));
      out.push_back(detail::make_report("singular_normal_crawford", inst, mu, 0.0, "abs",
                                        tol.quantity_abs, "mu(T) for singular normal T"));
      break;
    }
  }
  return out;
}

/// Eigenvectors of distinct eigenvalues of a self-adjoint operator are
/// mutually J-orthogonal, and unit ones sit at distance >= 1.
inline std::vector<CheckReport> check_eigvec_perp(const Instance& inst,
                                                  const HarnessTolerances& tol = {}) {
  const Operator& T = inst.op;
  if (!detail::verdict_self_adjoint(T, tol.class_tol)) {
    return {detail::make_skip("eigvec_perp", inst, "operator is not self-adjoint")};
  }
  const SpectrumReport spec = spectrum(T);
  double worst_perp = 0.0;
  double min_sep = std::numeric_limits<double>::infinity();
  int pairs = 0;
  for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.pairs.size(); ++j) {
      if (std::abs(spec.pairs[i].value - spec.pairs[j].value) <= 1e-6) continue;
      const CVec& a = spec.pairs[i].vector;
      const CVec& b = spec.pairs[j].vector;
      worst_perp = std::max({worst_perp, perp_J_residual(a, b), perp_J_residual(b, a)});
      min_sep = std::min(min_sep, p_norm(CVec(a.space, a.coords - b.coords)));
      ++pairs;
    }
  }
  if (pairs == 0) return {detail::make_skip("eigvec_perp", inst, "spectrum is degenerate")};
  const std::string note = std::to_string(pairs) + " eigenvector pairs";
  CheckReport perp = detail::make_report("eigvec_perp", inst, worst_perp, 0.0, "abs", tol.perp,
                                         "max |J(x1)(x2)| over " + note);
  CheckReport sep = detail::make_report("eigvec_separation", inst, min_sep, 1.0, "abs", tol.perp,
                                        "min ||x1 - x2|| over " + note);
  sep.abs_deviation = sep.rel_deviation = std::max(0.0, 1.0 - min_sep);
  sep.status = sep.abs_deviation < tol.perp ? CheckStatus::pass : CheckStatus::fail;
  return {perp, sep};
}

// ---------------------------------------------------------------------------
// Unitary characterisations.

struct UnitaryCharacterization {
  double unitary_residual = 0.0;   // sup max(| ||Tx|| - 1 |, | ||T'Jx|| - 1 |)
  double isometry_defect = 0.0;    // sup | ||Tx|| - 1 |
  double smallest_singular = 0.0;  // invertibility (surjectivity in finite dimension)
  double identity_residual = 0.0;  // sup over samples of both composite-map defects
  bool by_definition = false;
  bool by_surjective_isometry = false;
  bool by_duality_identity = false;

  bool agree() const {
    return by_definition == by_surjective_isometry && by_definition == by_duality_identity;
  }
};

inline UnitaryCharacterization unitary_characterization(const Operator& T,
                                                        const OptimizerConfig& opt,
                                                        double tol = 1e-8, int samples = 512) {
  const double p = T.space.p();
  const double q = T.space.q();
  UnitaryCharacterization u;
  u.unitary_residual = residual_unitary(T, opt);
  const auto defect = [&](const ComplexVector& x) {
    return std::abs(detail::lp_norm(T.matrix * x, p) - 1.0);
  };
  u.isometry_defect = optimize_on_sphere(T.space, defect, Sense::maximize, opt).value;
  u.smallest_singular = detail::smallest_singular_value(T.matrix);

  const auto dual = [](const ComplexVector& v, double r) {
    return v.isZero(0.0) ? ComplexVector(ComplexVector::Zero(v.size())) : detail::lp_duality(v, r);
  };
  for (const auto& s : sample_unit_sphere(T.space, opt.seed ^ 0x7777, samples)) {
    const ComplexVector& x = s.coords;
    // J^{-1} T' J T x and T J^{-1} T' J x.
    const ComplexVector left = dual(T.matrix.transpose() * dual(T.matrix * x, p), q);
    const ComplexVector right = T.matrix * dual(T.matrix.transpose() * dual(x, p), q);
    u.identity_residual = std::max({u.identity_residual, detail::lp_norm(left - x, p),
                                    detail::lp_norm(right - x, p)});
  }
  u.by_definition = u.unitary_residual < tol;
  u.by_surjective_isometry = u.isometry_defect < tol && u.smallest_singular > tol;
  u.by_duality_identity = u.identity_residual < tol;
  return u;
}

inline std::vector<CheckReport> check_unitary_chars(const Instance& inst, const OptimizerConfig& opt,
                                                    const HarnessTolerances& tol = {}) {
  const UnitaryCharacterization u = unitary_characterization(inst.op, opt, tol.unitary);
  const auto verdict_word = [](bool b) { return b ? "true" : "false"; };
  CheckReport a = detail::make_report("unitary_isometry", inst, u.unitary_residual,
                                      u.isometry_defect, "agree", 0.5,
                                      std::string("definition=") + verdict_word(u.by_definition) +
                                          " surjective_isometry=" +
                                          verdict_word(u.by_surjective_isometry));
  a.abs_deviation = a.rel_deviation = u.by_definition == u.by_surjective_isometry ? 0.0 : 1.0;
  a.status = a.abs_deviation < 0.5 ? CheckStatus::pass : CheckStatus::fail;
  CheckReport b = detail::make_report("unitary_duality_identity", inst, u.unitary_residual,
                                      u.identity_residual, "agree", 0.5,
                                      std::string("definition=") + verdict_word(u.by_definition) +
                                          " duality_identity=" +
                                          verdict_word(u.by_duality_identity));
  b.abs_deviation = b.rel_deviation = u.by_definition == u.by_duality_identity ? 0.0 : 1.0;
  b.status = b.abs_deviation < 0.5 ? CheckStatus::pass : CheckStatus::fail;
  return {a, b};
}

/// T = S^2 with mu(S) = c(S) gives c(T^n) = c(T)^n.
inline std::vector<CheckReport> check_strong_normal_powers(const Instance& inst, int N,
                                                           const OptimizerConfig& opt,
                                                           const HarnessTolerances& tol = {}) {
  if (!inst.root) return {detail::make_skip("strong_normal_power_crawford", inst, "no root")};
  const Operator& S = *inst.root;
  const double cs = crawford(S, opt).value;
  const double ms = min_modulus(S, opt).value;
  if (!(std::abs(cs - ms) < tol.quantity_abs * std::max(1.0, norm_upper_bound(S)))) {
    return {detail::make_skip("strong_normal_power_crawford", inst, "c(S) != mu(S)")};
  }
  const double ct = crawford(inst.op, opt).value;
  std::vector<CheckReport> out;
  for (int n = 2; n <= N; ++n) {
    out.push_back(detail::make_report("strong_normal_power_crawford", inst,
                                      crawford(power(inst.op, n), opt).value, std::pow(ct, n),
                                      "rel", tol.power_rel, "n=" + std::to_string(n)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suite.

struct Observation {
  std::string id;
  std::string instance;
  double value = 0.0;
  std::string note;
};

struct SuiteConfig {
  std::vector<int> dims{2, 3, 4, 5, 6};
  std::vector<double> ps{1.5, 2.0, 3.0, 4.0};
  int count = 2;       // instances per (family, dim, p)
  int max_power = 4;   // N in the power checks
  std::set<std::string> only;  // empty: every check
  bool counterexamples = true;
  bool counterexamples_only = false;
  ToleranceConfig tolerances;
  HarnessTolerances harness;
  OptimizerConfig optimizer;
};

struct SuiteReport {
  std::vector<CheckReport> checks;
  std::vector<Observation> observations;
  int total = 0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  int expected_failures = 0;
  std::uint64_t seed = 0;
  SuiteConfig config;

  bool ok() const { return failed == 0; }
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0, std::uint64_t d = 0) {
  // splitmix64 over the tuple
  std::uint64_t z = seed;
  for (std::uint64_t v : {a, b, c, d}) {
    z += 0x9e3779b97f4a7c15ULL + v;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
  }
  return z;
}

inline Instance pseudo_instance(std::string_view label) {
  InstanceKind k;
  Instance inst{k, 0, Operator::identity(SpaceSpec(1, 2.0)), std::nullopt};
  (void)label;
  return inst;
}

}  // namespace detail

inline SuiteReport run_suite(const SuiteConfig& config, std::uint64_t seed) {
  SuiteReport rep;
  rep.seed = seed;
  rep.config = config;
  const HarnessTolerances& tol = config.harness;
  OptimizerConfig opt = config.optimizer;
  opt.seed = detail::mix_seed(seed, 0xfeed);

  const auto wanted = [&](std::initializer_list<const char*> ids) {
    if (config.only.empty()) return true;
    for (const char* id : ids) {
      if (config.only.count(id)) return true;
    }
    return false;
  };
  const auto add = [&](std::vector<CheckReport> v) {
    for (auto& r : v) {
      if (config.only.empty() || config.only.count(r.id)) rep.checks.push_back(std::move(r));
    }
  };

  std::uniform_real_distribution<double> shift_dist(0.1, 1.0);
  const bool regular = !config.counterexamples_only;

  for (std::size_t pi = 0; pi < config.ps.size() && regular; ++pi) {
    const double p = config.ps[pi];
    const bool hilbert = SpaceSpec(1, p).is_hilbert();
    for (int dim : config.dims) {
      for (int k = 0; k < config.count; ++k) {
        const auto sd = [&](std::uint64_t family) {
          return detail::mix_seed(seed, pi, static_cast<std::uint64_t>(dim), family,
                                  static_cast<std::uint64_t>(k));
        };

        // Self-adjoint families.
        std::vector<Instance> sa;
        if (hilbert) sa.push_back(gen_instance({InstanceTag::hermitian_p2, dim, p}, sd(1)));
        sa.push_back(gen_instance({InstanceTag::scaled_sym_perm, dim, p}, sd(2)));
        for (const Instance& inst : sa) {
          if (wanted({"sa_radius_equalities"})) add(check_sa_equalities(inst, opt, tol));
          if (wanted({"power_norm", "power_radius", "power_min_modulus", "even_power_crawford",
                      "even_power_crawford_shifted"})) {
            add(check_power_laws(inst, config.max_power, opt, tol));
          }
          if (wanted({"norm_attainment", "min_attainment", "radius_norm_equivalence",
                      "radius_attainment_transfer"})) {
            add(check_attainment_equivalences(inst, config.tolerances, opt,
                                              AttainmentPath::self_adjoint, tol));
          }
          if (wanted({"eigvec_perp", "eigvec_separation"})) add(check_eigvec_perp(inst, tol));
        }

        if (hilbert) {
          std::mt19937_64 rng(sd(3));
          const double alpha = shift_dist(rng);
          const Instance shifted =
              gen_instance({InstanceTag::shifted_strongly_normal, dim, p, 0.0, alpha}, sd(4));
          if (wanted({"crawford_equals_min"})) {
            add(check_crawford_equals_min(shifted, opt, CrawfordPath::shifted_strongly_normal, tol));
          }
          if (wanted({"crawford_attainment", "crawford_min_attainment"})) {
            add(check_attainment_equivalences(shifted, config.tolerances, opt,
                                              AttainmentPath::crawford, tol));
          }
          if (wanted({"even_power_crawford", "even_power_crawford_shifted"})) {
            add(check_power_laws(shifted, config.max_power, opt, tol));
          }

          const Instance sn0 =
              gen_instance({InstanceTag::strongly_normal, dim, p, 0.0, 0.0, true}, sd(5));
          if (wanted({"strong_normal_zero_crawford"})) {
            add(check_crawford_equals_min(sn0, opt, CrawfordPath::strongly_normal_zero, tol));
          }
          for (InstanceTag tag : {InstanceTag::hermitian_p2, InstanceTag::normal_p2}) {
            const Instance sing = gen_instance({tag, dim, p, 0.0, 0.0, true}, sd(6 + (tag == InstanceTag::normal_p2)));
            if (wanted({"singular_normal_crawford", "invertible_bounded_below"})) {
              add(check_crawford_equals_min(sing, opt, CrawfordPath::singular_normal, tol));
            }
          }
          if (wanted({"unitary_isometry", "unitary_duality_identity"})) {
            add(check_unitary_chars(gen_instance({InstanceTag::unitary_p2, dim, p}, sd(8)), opt, tol));
          }
        } else if (wanted({"strong_normal_power_crawford"})) {
          add(check_strong_normal_powers(gen_instance({InstanceTag::strongly_normal, dim, p}, sd(9)),
                                         config.max_power, opt, tol));
        }

        if (wanted({"unitary_isometry", "unitary_duality_identity"})) {
          const Instance iso = gen_instance({InstanceTag::gen_perm_isometry, dim, p}, sd(10));
          add(check_unitary_chars(iso, opt, tol));
          // Perturbed copy: T (I + 0.1 E), not an isometry.
          Instance bent = iso;
          std::mt19937_64 rng(sd(11));
          ComplexMatrix e(dim, dim);
          for (int j = 0; j < dim; ++j) e.col(j) = gaussian_vector(dim, rng);
          bent.op = Operator(iso.op.space,
                             iso.op.matrix * (ComplexMatrix::Identity(dim, dim) + 0.1 * e));
          bent.kind.tag = InstanceTag::arbitrary;
          add(check_unitary_chars(bent, opt, tol));
        }

        if (k == 0) {
          // Never asserted: relation between T J^-1 T' J = J^-1 T' J T and normality.
          const Instance arb = gen_instance({InstanceTag::arbitrary, dim, p}, sd(12));
          const double q = arb.op.space.q();
          const auto dual = [](const ComplexVector& v, double r) {
            return v.isZero(0.0) ? ComplexVector(ComplexVector::Zero(v.size()))
                                 : detail::lp_duality(v, r);
          };
          double gap = 0.0;
          for (const auto& s : sample_unit_sphere(arb.op.space, sd(13), 64)) {
            const ComplexMatrix& m = arb.op.matrix;
            const ComplexVector a = m * dual(m.transpose() * dual(s.coords, p), q);
            const ComplexVector b = dual(m.transpose() * dual(m * s.coords, p), q);
            gap = std::max(gap, detail::lp_norm(a - b, p));
          }
          rep.observations.push_back({"commutation_vs_normality", arb.descriptor(), gap,
                                      "sup over samples of ||T J^-1 T'J x - J^-1 T'J T x||; normal "
                                      "residual " + std::to_string(residual_normal(arb.op, opt))});
        }
      }
    }
  }

  if (config.counterexamples && wanted({"jordan_power_counterexample"})) {
    const Instance jordan = gen_instance({InstanceTag::jordan_like, 2, 2.0}, 0);
    add(check_power_laws(jordan, 2, opt, tol, true));
  }

  if (regular) {
    Instance none = detail::pseudo_instance("finite-dimensional");
    none.kind.tag = InstanceTag::arbitrary;
    const std::string vacuous = "vacuous in finite dimension: sigma = sigma_eig = sigma_app";
    for (const char* id : {"spectrum_equals_approx", "normal_spectrum_approx"}) {
      if (wanted({id})) add({detail::make_skip(id, none, vacuous)});
    }
    if (wanted({"eigvec_countable"})) {
      add({detail::make_skip("eigvec_countable", none,
                             "finite spectrum; covered by eigvec_separation")});
    }
  }

  std::stable_sort(rep.checks.begin(), rep.checks.end(), [](const CheckReport& a, const CheckReport& b) {
    return std::tie(a.id, a.seed) < std::tie(b.id, b.seed);
  });
  for (const auto& r : rep.checks) {
    switch (r.status) {
      case CheckStatus::pass: ++rep.passed; break;
      case CheckStatus::fail: ++rep.failed; break;
      case CheckStatus::skipped: ++rep.skipped; break;
    }
    if (r.expected_failure && r.status == CheckStatus::pass) ++rep.expected_failures;
  }
  rep.total = static_cast<int>(rep.checks.size());
  return rep;
}

/// Every check id the suite can emit.
inline const std::vector<std::string>& known_check_ids() {
  static const std::vector<std::string> ids{
      "crawford_attainment",       "crawford_equals_min",        "crawford_min_attainment",
      "eigvec_countable",          "eigvec_perp",                "eigvec_separation",
      "even_power_crawford",       "even_power_crawford_shifted", "invertible_bounded_below",
      "jordan_power_counterexample", "min_attainment",           "norm_attainment",
      "normal_spectrum_approx",    "power_min_modulus",          "power_norm",
      "power_radius",              "radius_attainment_transfer", "radius_norm_equivalence",
      "sa_radius_equalities",      "singular_normal_crawford",   "spectrum_equals_approx",
      "strong_normal_power_crawford", "strong_normal_zero_crawford", "unitary_duality_identity",
      "unitary_isometry"};
  return ids;
}

}  // namespace lpops
