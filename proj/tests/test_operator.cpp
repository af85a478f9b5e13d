// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lpops/harness.hpp"
#include "lpops/operator.hpp"
#include "lpops/oracle.hpp"

using namespace lpops;

namespace {

Operator swap(int n, double p) {
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  m(0, 0) = m(1, 1) = 0.0;
  m(0, 1) = m(1, 0) = 1.0;
  return Operator(SpaceSpec(n, p), m);
}

ComplexMatrix random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ComplexMatrix m(n, n);
  for (int j = 0; j < n; ++j) m.col(j) = gaussian_vector(n, rng);
  return m;
}

}  // namespace

TEST(Operator, ShapeValidation) {
  EXPECT_THROW(Operator(SpaceSpec(2, 2.0), ComplexMatrix::Zero(2, 3)), std::invalid_argument);
  EXPECT_THROW(Operator(SpaceSpec(3, 2.0), ComplexMatrix::Zero(2, 2)), std::invalid_argument);
  EXPECT_THROW(power(Operator::identity(SpaceSpec(2, 3.0)), 0), std::invalid_argument);
}

TEST(Operator, TransposeActsThroughBilinearPairing) {
  // (T'f)(x) = f(Tx)
  const SpaceSpec s(4, 3.0);
  const Operator T(s, random_matrix(4, 1));
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    const CVec x(s, gaussian_vector(4, rng));
    const DualVec f(s, gaussian_vector(4, rng));
    EXPECT_LT(std::abs(dual_pair(transpose_apply(T, f), x) - dual_pair(f, apply(T, x))), 1e-12);
  }
}

TEST(Operator, PowerMatchesRepeatedProduct) {
  const Operator T(SpaceSpec(3, 2.0), random_matrix(3, 5) * 0.5);
  ComplexMatrix ref = T.matrix;
  for (int n = 2; n <= 7; ++n) {
    ref = ref * T.matrix;
    EXPECT_LT((power(T, n).matrix - ref).norm(), 1e-12 * ref.norm()) << n;
  }
}

TEST(Operator, NormUpperBoundDominatesOracleNorm) {
  for (double p : {1.5, 3.0, 4.0}) {
    const Operator T(SpaceSpec(2, p), random_matrix(2, 7));
    const double oracle = oracle_quantity(T, QuantityKind::norm, 64).value;
    EXPECT_GE(norm_upper_bound(T), oracle - 1e-12) << p;
  }
  const Operator H(SpaceSpec(3, 2.0), random_matrix(3, 8));
  Eigen::JacobiSVD<ComplexMatrix> svd(H.matrix);
  EXPECT_NEAR(norm_upper_bound(H), svd.singularValues()(0), 1e-12);
}

TEST(SelfAdjoint, HermitianAtP2) {
  ComplexMatrix a = random_matrix(4, 3);
  const Operator T(SpaceSpec(4, 2.0), a + a.adjoint());
  EXPECT_LT(residual_self_adjoint(T, default_probe_samples(T.space, 1)), 1e-12);
}

TEST(SelfAdjoint, SwapOnL4) {
  for (int n = 2; n <= 8; ++n) {
    const Operator T = swap(n, 4.0);
    EXPECT_LT(residual_self_adjoint(T, default_probe_samples(T.space, 9, 1000)), 1e-14) << n;
  }
}

// diag(2, 1) at p = 4, x = (1, 1)/2^(1/4): T'J(x) has coordinates (2, 1)/2^(3/4)
// while J(Tx) = (8, 1)/(17^(1/2) 2^(1/4)); the l^(4/3) distance is ~0.70.
TEST(SelfAdjoint, RealDiagonalFailsAwayFromHilbert) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  const Operator T(SpaceSpec(2, 4.0), d);
  const double c = std::pow(2.0, -0.25);
  ComplexVector x(2);
  x << c, c;
  const std::vector<CVec> probe{CVec(T.space, x)};
  ComplexVector lhs(2), rhs(2);
  lhs << 2.0 * std::pow(2.0, -0.75), std::pow(2.0, -0.75);
  rhs << 8.0 / std::sqrt(17.0) * std::pow(2.0, 0.25) / std::sqrt(2.0),
      1.0 / std::sqrt(17.0) * std::pow(2.0, 0.25) / std::sqrt(2.0);
  const double expected = detail::lp_norm(lhs - rhs, 4.0 / 3.0);
  EXPECT_NEAR(residual_self_adjoint(T, probe), expected, 1e-12);
  EXPECT_GE(expected, std::abs(8.0 / std::sqrt(17.0) - 2.0 / std::sqrt(2.0)));
}

// Im J(x)(Sx) = (|x1|^2 - |x2|^2) Im(conj(x1) x2) on the l^4 sphere; with
// u = |x1|^2, v = |x2|^2, u^2 + v^2 = 1 its supremum is 1/(2 sqrt 2).
TEST(Hermitian, SwapOnComplexL4IsNotHermitian) {
  const Operator T = swap(2, 4.0);
  EXPECT_NEAR(residual_hermitian(T, {}), 1.0 / (2.0 * std::sqrt(2.0)), 1e-9);
  // Closed-form point: u = cos t, v = sin t with sin 2t = 1/2, relative phase pi/2.
  const double t = std::asin(0.5) / 2.0;
  ComplexVector x(2);
  x << std::sqrt(std::cos(t)), Complex(0.0, std::sqrt(std::sin(t)));
  EXPECT_NEAR(detail::lp_norm(x, 4.0), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(numerical_range_value(T.matrix, x, 4.0).imag()),
              1.0 / (2.0 * std::sqrt(2.0)), 1e-14);
}

TEST(Hermitian, RealVectorsGiveRealValuesForSwap) {
  const Operator T = swap(2, 4.0);
  ComplexVector x(2);
  x << 0.8, -0.45;
  x /= detail::lp_norm(x, 4.0);
  EXPECT_EQ(numerical_range_value(T.matrix, x, 4.0).imag(), 0.0);
}

TEST(Classify, SwapOnL4) {
  const ClassificationReport r = classify(swap(2, 4.0), {}, {}, 1);
  EXPECT_TRUE(r.self_adjoint);
  EXPECT_TRUE(r.normal);
  EXPECT_TRUE(r.unitary);
  EXPECT_FALSE(r.hermitian);
  EXPECT_FALSE(r.positive);
  EXPECT_LT(r.residual_unitary, 1e-12);
}

TEST(Classify, JordanBlockHasNoVerdicts) {
  ComplexMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  const ClassificationReport r = classify(Operator(SpaceSpec(2, 2.0), m), {}, {}, 1);
  EXPECT_FALSE(r.self_adjoint || r.hermitian || r.positive || r.normal || r.unitary);
  EXPECT_FALSE(r.strong_normal.has_value());
}

TEST(Classify, IdentityHasEveryVerdict) {
  for (double p : {1.5, 2.0, 3.0}) {
    const ClassificationReport r = classify(Operator::identity(SpaceSpec(3, p)), {}, {}, 2);
    EXPECT_TRUE(r.self_adjoint && r.hermitian && r.positive && r.normal && r.unitary) << p;
    ASSERT_TRUE(r.strong_normal.has_value());
    EXPECT_TRUE(r.strong_normal->verdict);
  }
}

TEST(Classify, PositiveHermitianGetsPrincipalRoot) {
  ComplexMatrix a = random_matrix(3, 4);
  const Operator T(SpaceSpec(3, 2.0), a * a.adjoint() + ComplexMatrix::Identity(3, 3));
  const ClassificationReport r = classify(T, {}, {}, 3);
  EXPECT_TRUE(r.positive);
  ASSERT_TRUE(r.strong_normal.has_value());
  EXPECT_TRUE(r.strong_normal->verdict);
  EXPECT_LT(r.strong_normal->square_residual, 1e-10);
}

TEST(Classify, ScaledUnitaryIsNormalNotUnitary) {
  const Operator T(SpaceSpec(2, 4.0), 0.9 * swap(2, 4.0).matrix);
  const ClassificationReport r = classify(T, {}, {}, 4);
  EXPECT_TRUE(r.self_adjoint);
  EXPECT_TRUE(r.normal);
  EXPECT_FALSE(r.unitary);
  EXPECT_NEAR(r.residual_unitary, 0.1, 1e-9);
}

// Invariants: self-adjoint implies Hermitian at p = 2, and normal for every p.
TEST(Classify, SelfAdjointImplications) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Instance h = gen_instance({InstanceTag::hermitian_p2, 3, 2.0}, seed);
    const ClassificationReport r = classify(h.op, {}, {}, seed);
    EXPECT_TRUE(r.self_adjoint && r.hermitian && r.normal);
    for (double p : {1.5, 3.0, 4.0}) {
      const Instance s = gen_instance({InstanceTag::scaled_sym_perm, 4, p}, seed);
      const ClassificationReport rs = classify(s.op, {}, {}, seed);
      EXPECT_TRUE(rs.self_adjoint && rs.normal) << s.descriptor();
    }
  }
}

TEST(StrongNormal, PrincipalRootErrors) {
  EXPECT_THROW(principal_sqrt_p2(Operator::identity(SpaceSpec(2, 3.0))), std::invalid_argument);
  ComplexMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(principal_sqrt_p2(Operator(SpaceSpec(2, 2.0), m)), std::invalid_argument);
  ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  EXPECT_THROW(principal_sqrt_p2(Operator(SpaceSpec(2, 2.0), neg)), std::invalid_argument);
}

TEST(StrongNormal, RootSquaresBack) {
  ComplexMatrix a = random_matrix(4, 6);
  const Operator T(SpaceSpec(4, 2.0), a * a.adjoint());
  const Operator S = principal_sqrt_p2(T);
  EXPECT_LT((S.matrix * S.matrix - T.matrix).norm(), 1e-10 * T.matrix.norm());
  const auto w = verify_strong_normal(T, S, default_probe_samples(T.space, 1, 128));
  EXPECT_TRUE(w.verdict);
}

TEST(StrongNormal, SwapSquaredOnL4) {
  // S = swap is self-adjoint on l^4 and S^2 = I.
  const Operator S = swap(3, 4.0);
  const Operator T = Operator::identity(SpaceSpec(3, 4.0));
  EXPECT_TRUE(verify_strong_normal(T, S, default_probe_samples(T.space, 2, 128)).verdict);
  const Operator T2(SpaceSpec(3, 4.0), 2.0 * T.matrix);
  EXPECT_FALSE(verify_strong_normal(T2, S, default_probe_samples(T.space, 2, 128)).verdict);
}
