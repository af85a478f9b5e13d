// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lpops/harness.hpp"
#include "lpops/oracle.hpp"
#include "lpops/quantities.hpp"
#include "lpops/reproduce.hpp"

using namespace lpops;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Tracks the worst deviation seen against a bound.
struct Worst {
  double value = 0.0;
  double bound;
  std::string where;
  explicit Worst(double b) : bound(b) {}
  void see(double v, const std::string& w) {
    if (!(v <= value)) {
      value = v;
      where = w;
    }
  }
  bool ok() const { return value < bound; }
  std::string str(const char* name) const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s max %.3g (< %.0e)", name, value, bound);
    return buf;
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double min_eig_distance(const SpectrumReport& s, Complex z) {
  double d = INFINITY;
  for (const auto& e : s.pairs) d = std::min(d, std::abs(e.value - z));
  return d;
}

std::vector<Instance> hermitian_corpus() {
  std::vector<Instance> v;
  for (int k = 0; k < 100; ++k) {
    const int dim = 2 + k % 5;
    v.push_back(gen_instance({InstanceTag::hermitian_p2, dim, 2.0}, 1000 + static_cast<std::uint64_t>(k)));
  }
  return v;
}

std::vector<Instance> shifted_corpus() {
  std::vector<Instance> v;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> alpha(0.1, 1.0);
  for (int k = 0; k < 50; ++k) {
    const int dim = 2 + k % 5;
    v.push_back(gen_instance({InstanceTag::shifted_strongly_normal, dim, 2.0, 0.0, alpha(rng)},
                             2000 + static_cast<std::uint64_t>(k)));
  }
  return v;
}

const OptimizerConfig kOpt{};

Outcome criterion1() {
  const Operator T = jordan_2x2();
  const double mu1 = min_modulus(T, kOpt).value;
  const double mu2 = min_modulus(power(T, 2), kOpt).value;
  const double d1 = std::abs(mu1 * mu1 - (3.0 - std::sqrt(5.0)) / 2.0);
  const double d2 = std::abs(mu2 * mu2 - (3.0 - 2.0 * std::sqrt(2.0)));
  const auto flagged = check_power_laws(
      Instance{{InstanceTag::jordan_like, 2, 2.0}, 0, T, std::nullopt}, 2, kOpt, {}, true);
  const bool flag = flagged.size() == 1 && flagged[0].expected_failure &&
                    flagged[0].status == CheckStatus::pass && flagged[0].abs_deviation > 0.03;
  char buf[256];
  std::snprintf(buf, sizeof buf, "|mu(T)^2-(3-sqrt5)/2| %.2e, |mu(T^2)^2-(3-2sqrt2)| %.2e, gap %.6f flagged=%s",
                d1, d2, std::abs(mu2 - mu1 * mu1), flag ? "yes" : "no");
  return {d1 < 1e-6 && d2 < 1e-6 && flag, buf};
}

Outcome criterion2() {
  Worst sa(1e-9), un(1e-9);
  std::string missing;
  for (int n = 2; n <= 8; ++n) {
    const Operator T = swap_first_two(n, 4.0);
    sa.see(residual_self_adjoint(T, sample_unit_sphere(T.space, 77 + static_cast<std::uint64_t>(n), 1000)),
           "n=" + std::to_string(n));
    un.see(residual_unitary(T, kOpt), "n=" + std::to_string(n));
    const ClassificationReport r = classify(T, {}, kOpt, 5);
    const std::string tag = " n=" + std::to_string(n);
    if (!r.self_adjoint) missing += " self-adjoint" + tag;
    if (!r.hermitian) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " hermitian%s(res %.6f)", tag.c_str(), r.residual_hermitian);
      missing += buf;
    }
    if (!r.normal) missing += " normal" + tag;
    if (!r.unitary) missing += " unitary" + tag;
  }
  std::string d = sa.str("residual_self_adjoint") + ", " + un.str("residual_unitary");
  d += missing.empty() ? ", all four verdicts" : ", missing verdicts:" + missing;
  return {sa.ok() && un.ok() && missing.empty(), d};
}

Outcome criterion3(const std::vector<Instance>& corpus) {
  Worst a(1e-6), b(1e-6);
  for (const auto& inst : corpus) {
    const double r = numerical_radius(inst.op, kOpt).value;
    a.see(std::abs(r - spectrum(inst.op).spectral_radius), inst.descriptor());
    b.see(std::abs(r - operator_norm(inst.op, kOpt).value), inst.descriptor());
  }
  return {a.ok() && b.ok(), a.str("|r-rho|") + ", " + b.str("|r-||T|||") + " over 100 instances"};
}

Outcome criterion4(const std::vector<Instance>& corpus, const std::vector<Instance>& shifted) {
  Worst w(1e-5), ws(1e-5);
  for (const auto& inst : corpus) {
    const Operator& T = inst.op;
    const double nrm = operator_norm(T, kOpt).value;
    const double mu = min_modulus(T, kOpt).value;
    const double r = numerical_radius(T, kOpt).value;
    for (int n = 1; n <= 4; ++n) {
      const Operator Tn = power(T, n);
      const Operator T2n = power(T, 2 * n);
      const std::string at = inst.descriptor() + " n=" + std::to_string(n);
      w.see(rel(operator_norm(Tn, kOpt).value, std::pow(nrm, n)), at + " norm");
      w.see(rel(min_modulus(Tn, kOpt).value, std::pow(mu, n)), at + " mu");
      w.see(rel(numerical_radius(Tn, kOpt).value, std::pow(r, n)), at + " r");
      w.see(rel(crawford(T2n, kOpt).value, min_modulus(T2n, kOpt).value), at + " c vs mu");
    }
  }
  for (const auto& inst : shifted) {
    const double c = crawford(inst.op, kOpt).value;
    for (int n = 1; n <= 4; ++n) {
      ws.see(rel(crawford(power(inst.op, 2 * n), kOpt).value, std::pow(c, 2 * n)),
             inst.descriptor() + " n=" + std::to_string(n));
    }
  }
  std::string d = w.str("relative deviation (Hermitian corpus)") + ", " +
                  ws.str("c(T^2n) vs c(T)^2n (50 shifted)");
  if (!w.ok()) d += " at " + w.where;
  if (!ws.ok()) d += " at " + ws.where;
  return {w.ok() && ws.ok(), d};
}

Outcome criterion5(const std::vector<Instance>& corpus, const std::vector<Instance>& shifted) {
  Worst a(1e-6), b(1e-6), c(1e-6);
  for (const auto& inst : corpus) {
    const SpectrumReport s = spectrum(inst.op);
    const double nrm = operator_norm(inst.op, kOpt).value;
    const double mu = min_modulus(inst.op, kOpt).value;
    a.see(std::min(min_eig_distance(s, nrm), min_eig_distance(s, -nrm)), inst.descriptor());
    b.see(std::min(min_eig_distance(s, mu), min_eig_distance(s, -mu)), inst.descriptor());
  }
  for (const auto& inst : shifted) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(inst.op.matrix);
    c.see(std::abs(crawford(inst.op, kOpt).value - es.eigenvalues().minCoeff()), inst.descriptor());
  }
  return {a.ok() && b.ok() && c.ok(),
          a.str("+-||T|| to spectrum") + ", " + b.str("+-mu to spectrum") + ", " +
              c.str("c vs smallest eigenvalue (50 shifted)")};
}

Outcome criterion6() {
  const Operator F = swap_first_two(2, 2.0);
  const double c = crawford(F, kOpt).value;
  const double mu = min_modulus(F, kOpt).value;
  Worst w(1e-6);
  for (int k = 0; k < 50; ++k) {
    const InstanceTag tag = k % 2 == 0 ? InstanceTag::hermitian_p2 : InstanceTag::normal_p2;
    const Instance inst = gen_instance({tag, 2 + k % 5, 2.0, 0.0, 0.0, true}, 3000 + static_cast<std::uint64_t>(k));
    w.see(crawford(inst.op, kOpt).value, inst.descriptor());
    w.see(min_modulus(inst.op, kOpt).value, inst.descriptor());
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "F: c %.2e (< 1e-06), |mu-1| %.2e (< 1e-09), ", c, std::abs(mu - 1.0));
  return {c < 1e-6 && std::abs(mu - 1.0) < 1e-9 && w.ok(),
          buf + w.str("c, mu on 50 singular normal")};
}

Outcome criterion7(const std::vector<Instance>& corpus) {
  Worst perp(1e-8), sep(1e-8);
  int qualifying = 0;
  std::vector<Instance> all = corpus;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (int dim = 2; dim <= 6; ++dim) {
      for (std::uint64_t k = 0; k < 8; ++k) {
        all.push_back(gen_instance({InstanceTag::scaled_sym_perm, dim, p}, 4000 + k * 31 + static_cast<std::uint64_t>(dim)));
      }
    }
  }
  for (const auto& inst : all) {
    const auto reps = check_eigvec_perp(inst);
    if (reps[0].status == CheckStatus::skipped) continue;
    ++qualifying;
    for (const auto& r : reps) {
      if (r.id == "eigvec_perp") perp.see(r.left, inst.descriptor());
      if (r.id == "eigvec_separation") sep.see(r.abs_deviation, inst.descriptor());
    }
  }
  return {perp.ok() && sep.ok() && qualifying > 100,
          std::to_string(qualifying) + " qualifying instances, " + perp.str("perp_J_residual") + ", " +
              sep.str("1 - min ||x1-x2||")};
}

Outcome criterion8() {
  int iso_ok = 0, bent_ok = 0;
  Worst w(1e-8);
  std::string bad;
  const double ps[] = {1.5, 2.0, 3.0, 4.0};
  for (int k = 0; k < 50; ++k) {
    const double p = ps[k % 4];
    const int dim = 2 + k % 5;
    const Instance iso = gen_instance({InstanceTag::gen_perm_isometry, dim, p}, 5000 + static_cast<std::uint64_t>(k));
    const UnitaryCharacterization u = unitary_characterization(iso.op, kOpt);
    w.see(std::max({u.unitary_residual, u.isometry_defect, u.identity_residual}), iso.descriptor());
    if (u.by_definition && u.by_surjective_isometry && u.by_duality_identity) {
      ++iso_ok;
    } else {
      bad += " " + iso.descriptor();
    }
    std::mt19937_64 rng(6000 + static_cast<std::uint64_t>(k));
    ComplexMatrix e(dim, dim);
    for (int j = 0; j < dim; ++j) e.col(j) = gaussian_vector(dim, rng);
    const Operator bent(iso.op.space, iso.op.matrix * (ComplexMatrix::Identity(dim, dim) + 0.1 * e));
    const UnitaryCharacterization b = unitary_characterization(bent, kOpt);
    if (!b.by_definition && !b.by_surjective_isometry && !b.by_duality_identity) {
      ++bent_ok;
    } else {
      bad += " perturbed(" + iso.descriptor() + ")";
    }
  }
  return {iso_ok == 50 && bent_ok == 50 && w.ok(),
          std::to_string(iso_ok) + "/50 isometries all true, " + std::to_string(bent_ok) +
              "/50 perturbed all false, " + w.str("isometry residual") + bad};
}

Outcome criterion9() {
  Worst w(1e-3);
  const double ps[] = {1.5, 2.0, 3.0, 4.0};
  for (int k = 0; k < 50; ++k) {
    const Instance inst = gen_instance({InstanceTag::arbitrary, 2, ps[k % 4]}, 7000 + static_cast<std::uint64_t>(k));
    for (auto kind : {QuantityKind::norm, QuantityKind::min_modulus, QuantityKind::numerical_radius,
                      QuantityKind::crawford}) {
      const double a = compute_quantity(inst.op, kind, kOpt).value;
      const double b = oracle_quantity(inst.op, kind, 48).value;
      w.see(std::abs(a - b), inst.descriptor() + " " + std::string(to_string(kind)));
    }
  }
  return {w.ok(), w.str("|optimizer - oracle|") + " over 50 operators x 4 quantities"};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  int failures = 0;
  const auto report = [&](int id, const std::function<Outcome()>& fn, double limit_s) {
    const auto t0 = Clock::now();
    Outcome o = fn();
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && secs >= limit_s) {
      o.pass = false;
      o.detail += ", over time limit";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d: %s  %s  [%.2fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  const std::vector<Instance> corpus = hermitian_corpus();
  const std::vector<Instance> shifted = shifted_corpus();

  report(1, criterion1, 1.0);
  report(2, criterion2, 5.0);
  report(3, [&] { return criterion3(corpus); }, 0);
  report(4, [&] { return criterion4(corpus, shifted); }, 0);
  report(5, [&] { return criterion5(corpus, shifted); }, 0);
  report(6, criterion6, 0);
  report(7, [&] { return criterion7(corpus); }, 0);
  report(8, criterion8, 0);
  report(9, criterion9, 0);

  const double total = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = total < 300.0;
  if (!in_time) ++failures;
  std::printf("total runtime %.1fs (%s 300s limit)\n", total, in_time ? "within" : "OVER");
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
