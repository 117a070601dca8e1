#include <gtest/gtest.h>

#include "hgeo/slrep.hpp"

using namespace hgeo;

namespace {

HPoly random_poly(Rng& rng, int n, Basis b = Basis::XY) { return HPoly(b, rng.cgauss(2 * n)); }

double rel(const CVec& a, const CVec& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

}  // namespace

TEST(Act, IdentityAndDiagonal) {
  Rng rng(1);
  const HPoly p = random_poly(rng, 3);
  EXPECT_LE(rel(act(SL2R(), p).coeffs(), p.coeffs()), 1e-15);
  const double t = 0.4;
  const HPoly x3 = act(g_t(t), HPoly::monomial(Basis::XY, 3, 0));
  EXPECT_NEAR(std::abs(x3[0] - std::exp(3 * t)), 0, 1e-13);
  EXPECT_LE(x3.coeffs().tail(3).norm(), 1e-15);
}

TEST(Act, PointwiseOracle) {
  // (g.P)(x, y) = P(g^{-1}(x, y))
  Rng rng(2);
  for (int s = 0; s < 200; ++s) {
    const SL2R g = random_sl2(rng);
    const HPoly p = random_poly(rng, 1 + s % 4);
    const HPoly q = act(g, p);
    const Mat2 gi = g.inverse().m;
    const double x = rng.normal(), y = rng.normal();
    const cplx want = evaluate(p, gi(0, 0) * x + gi(0, 1) * y, gi(1, 0) * x + gi(1, 1) * y);
    ASSERT_NEAR(std::abs(evaluate(q, x, y) - want), 0, 1e-10 * (1 + std::abs(want)));
  }
}

TEST(Act, Composition) {
  // |g|, |h| <= 2: coefficients grow like |g|^d, so the absolute bound
  // below only makes sense for moderate group elements
  Rng rng(3);
  for (int s = 0; s < 200; ++s) {
    const SL2R g = random_sl2(rng, 2.0), h = random_sl2(rng, 2.0);
    const HPoly p = random_poly(rng, 1 + s % 4, s % 2 ? Basis::XY : Basis::ZW);
    const CVec a = act(g, act(h, p)).coeffs(), b = act(g * h, p).coeffs();
    ASSERT_LE((a - b).norm(), 1e-9 * p.norm());
  }
}

TEST(Act, SingularThrows) {
  Mat2 z = Mat2::Zero();
  EXPECT_THROW(act(z, HPoly::monomial(Basis::XY, 1, 0)), DomainError);
  EXPECT_THROW(SL2R::from(2, 0, 0, 2), DomainError);
}

TEST(SymRep, Examples) {
  EXPECT_LE((sym_rep_matrix(SL2R(), 3) - CMat::Identity(6, 6)).norm(), 1e-15);
  const double t = -0.3;
  CMat want = CMat::Zero(4, 4);
  for (int k = 0; k < 4; ++k) want(k, k) = std::exp((3 - 2 * k) * t);
  EXPECT_LE((sym_rep_matrix(g_t(t), 2) - want).norm(), 1e-13);
}

TEST(SymRep, MatchesActAndDeterminant) {
  Rng rng(4);
  for (int s = 0; s < 1000; ++s) {
    const int n = 1 + s % 4;
    const SL2R g = random_sl2(rng);
    const HPoly p = random_poly(rng, n);
    const CMat m = sym_rep_matrix(g, n);
    ASSERT_LE((m * p.coeffs() - act(g, p).coeffs()).norm(), 1e-9 * m.norm() * p.norm());
    if (s < 100) ASSERT_NEAR(std::abs(m.determinant() - 1.0), 0, 1e-8);
  }
}

TEST(SymRep, RepresentationLaw) {
  Rng rng(5);
  for (int s = 0; s < 100; ++s) {
    const SL2R g = random_sl2(rng, 10.0), h = random_sl2(rng, 10.0);
    const int n = 1 + s % 3;
    const CMat a = sym_rep_matrix(g * h, n), b = sym_rep_matrix(g, n) * sym_rep_matrix(h, n);
    ASSERT_LE((a - b).norm(), 1e-8 * b.norm());
  }
}

TEST(SymRep, IotaBarIsInverseTranspose) {
  Rng rng(6);
  const SL2R g = random_sl2(rng);
  const Mat2 it = g.m.inverse().transpose();
  EXPECT_LE((iota_bar(g, 2) - sym_rep_matrix(it, 2)).norm(), 1e-14);
  // for rotations the two agree
  const SL2R r = rotation_sl2(0.8);
  EXPECT_LE((iota_bar(r, 3) - sym_rep_matrix(r, 3)).norm(), 1e-12);
}

TEST(LieG0, Examples) {
  // n = 1, P = Z -> W
  const HPoly z = HPoly::monomial(Basis::ZW, 1, 1);
  const HPoly q = lie_act_g0(z);
  EXPECT_NEAR(std::abs(q[0] - 1.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(q[1]), 0, 1e-15);
  // X^3 -> 3 X^3
  const HPoly x3 = lie_act_g0(HPoly::monomial(Basis::XY, 3, 0));
  EXPECT_NEAR(std::abs(x3[0] - 3.0), 0, 1e-15);
}

TEST(LieG0, EigenRelation) {
  for (int n = 1; n <= 4; ++n) {
    const int d = 2 * n - 1;
    for (int a = 0; a <= d; ++a) {
      const HPoly m = HPoly::monomial(Basis::XY, d, d - a);  // X^a Y^{d-a}
      const HPoly q = lie_act_g0(m);
      EXPECT_NEAR(std::abs(q[d - a] - double(2 * a - 2 * n + 1)), 0, 1e-15);
    }
  }
}

TEST(LieG0, BasesAgree) {
  Rng rng(7);
  for (int s = 0; s < 50; ++s) {
    const HPoly p = random_poly(rng, 1 + s % 4);
    const HPoly a = to_basis(lie_act_g0(p), Basis::ZW);
    const HPoly b = lie_act_g0(to_basis(p, Basis::ZW));
    ASSERT_LE(rel(a.coeffs(), b.coeffs()), 1e-12);
  }
}

TEST(LieG0, Derivation) {
  Rng rng(8);
  for (int s = 0; s < 100; ++s) {
    const Basis b = s % 2 ? Basis::XY : Basis::ZW;
    const HPoly p = random_poly(rng, 1 + s % 3, b), q = random_poly(rng, 1 + (s / 3) % 3, b);
    const HPoly lhs = lie_act_g0(poly_mul(p, q));
    const HPoly rhs = poly_mul(lie_act_g0(p), q) + poly_mul(p, lie_act_g0(q));
    ASSERT_LE((lhs - rhs).norm(), 1e-10 * (1 + rhs.norm()));
  }
}

TEST(LieG0, ExponentialCompatibility) {
  Rng rng(9);
  for (int s = 0; s < 50; ++s) {
    const HPoly p = random_poly(rng, 1 + s % 4);
    const double h = 1e-5;
    const CVec fd = (act(g_t(h), p).coeffs() - act(g_t(-h), p).coeffs()) / (2 * h);
    ASSERT_LE((fd - lie_act_g0(p).coeffs()).norm(), 1e-7 * p.norm() * 10);
  }
}

TEST(Circle, Examples) {
  Rng rng(10);
  const HPoly p = random_poly(rng, 3, Basis::ZW);
  EXPECT_LE(rel(circle_act(0.0, p).coeffs(), p.coeffs()), 1e-15);
  EXPECT_LE(rel(circle_act(2 * kPi, p).coeffs(), p.coeffs()), 1e-13);
}

TEST(Circle, MatchesSubstitutionAction) {
  Rng rng(11);
  for (int s = 0; s < 1000; ++s) {
    const double th = rng.uniform(-kPi, kPi);
    const HPoly p = random_poly(rng, 1 + s % 4);
    const HPoly a = circle_act(th, p);
    const HPoly b = to_basis(act(rotation_sl2(th), p), Basis::ZW);
    ASSERT_LE(rel(a.coeffs(), b.coeffs()), 1e-10);
  }
}

TEST(RepMatrices, Examples) {
  const RepMatrices id = rep_matrices(0.0, 3);
  EXPECT_LE((id.L - RMat::Identity(3, 3)).norm(), 1e-15);
  EXPECT_LE((id.phi_prime - CMat::Identity(6, 6)).norm(), 1e-15);
  const double th = 0.21;
  const RepMatrices r = rep_matrices(th, 2);
  const int e[4] = {3, 1, -1, -3};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(r.phi_prime(k, k) - std::exp(kI * (e[k] * th))), 0, 1e-15);
  // block angles (2n + 2 - 4i) theta, here 2 theta for i = 1
  EXPECT_LE((r.L - rotation(2 * th)).norm(), 1e-15);
}

TEST(RepMatrices, Homomorphism) {
  Rng rng(12);
  for (int n = 1; n <= 6; ++n)
    for (int s = 0; s < 20; ++s) {
      const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
      const RepMatrices ra = rep_matrices(a, n), rb = rep_matrices(b, n), rab = rep_matrices(a + b, n);
      ASSERT_LE((ra.L * rb.L - rab.L).norm(), 1e-10);
      ASSERT_LE((ra.R * rb.R - rab.R).norm(), 1e-10);
      ASSERT_LE((ra.phi_prime * rb.phi_prime - rab.phi_prime).norm(), 1e-10);
      ASSERT_LE((ra.delta_R * rb.delta_R - rab.delta_R).norm(), 1e-10);
    }
}

TEST(BasisChangeA, NEqualsOne) {
  const CMat a = basis_change_A(1);
  const double s = std::sqrt(0.5);
  EXPECT_NEAR(std::abs(a(0, 0) - s), 0, 1e-15);
  EXPECT_NEAR(std::abs(a(0, 1) - s), 0, 1e-15);
  EXPECT_NEAR(std::abs(a(1, 0) + kI * s), 0, 1e-15);
  EXPECT_NEAR(std::abs(a(1, 1) - kI * s), 0, 1e-15);
  const CVec out = a * CVec::Ones(2);
  EXPECT_NEAR(std::abs(out(0) - std::sqrt(2.0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(out(1)), 0, 1e-15);
}

TEST(BasisChangeA, ConjugatesCircleActions) {
  Rng rng(13);
  for (int n = 1; n <= 6; ++n) {
    const CMat a = basis_change_A(n);
    ASSERT_GT(std::abs(a.determinant()), 1e-6);
    const CMat ai = a.inverse();
    EXPECT_LE((a * ai - CMat::Identity(2 * n, 2 * n)).norm(), 1e-12);
    for (int s = 0; s < 100; ++s) {
      const double th = s == 0 ? 0.0 : rng.uniform(-kPi, kPi);
      const RepMatrices r = rep_matrices(th, n);
      ASSERT_LE((a * r.phi_prime * ai - r.phi_embedded()).norm(), 1e-10) << "n=" << n;
    }
  }
}

TEST(BasisChangeA, RealOnTauFixed) {
  Rng rng(14);
  for (int n = 1; n <= 6; ++n) {
    const CMat a = basis_change_A(n);
    for (int s = 0; s < 100; ++s) {
      const CVec x = rng.cgauss(2 * n);
      const CVec t = 0.5 * (x + tau0(x));
      ASSERT_LE((t - tau0(t)).norm(), 1e-15);
      ASSERT_LE((a * t).imag().cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}
