#include <gtest/gtest.h>

#include "hgeo/higgsflat.hpp"

using namespace hgeo;

namespace {

UHPoint random_z(Rng& rng) { return UHPoint(rng.uniform(-3, 3), std::exp(rng.uniform(-1.5, 1.5))); }

}  // namespace

TEST(HiggsData, Invariants) {
  for (int n = 1; n <= 6; ++n) {
    const HiggsData d = HiggsData::fuchsian(n);
    const CMat Q = d.Q(), phi = d.phi();
    EXPECT_EQ(phi.trace(), cplx(0.0));
    EXPECT_EQ(Q, Q.transpose());
    EXPECT_EQ(Q * Q, CMat::Identity(2 * n, 2 * n));
    for (int i = 1; i < 2 * n; ++i) EXPECT_NEAR(d.r[i - 1] * d.r[i - 1], i * (2.0 * n - i) / 2, 1e-13);
    for (int k = 1; k <= 2 * n; ++k) EXPECT_EQ(d.m[k - 1], 2 * k - 2 * n - 1);
  }
  EXPECT_NEAR(HiggsData::fuchsian(1).r[0], std::sqrt(0.5), 1e-16);
  EXPECT_THROW(HiggsData::fuchsian(0), DomainError);
  EXPECT_THROW(UHPoint(0.0, 0.0), DomainError);
}

TEST(ConnMatrices, ExamplesAtI) {
  for (int n = 1; n <= 3; ++n) {
    const HiggsData d = HiggsData::fuchsian(n);
    const ConnSample c = conn_matrices(d, UHPoint(0, 1));
    for (int k = 0; k + 1 < d.rank(); ++k) {
      EXPECT_NEAR(std::abs(c.Azbar(k, k + 1) - d.r[k] / 2), 0, 1e-15);
      EXPECT_NEAR(std::abs(c.Az(k + 1, k) - d.r[k]), 0, 1e-15);
    }
    for (int k = 0; k < d.rank(); ++k) EXPECT_NEAR(std::abs(c.Az(k, k) - d.m[k] * kI / 2.0), 0, 1e-15);
    // nothing else
    CMat rest = c.Azbar;
    for (int k = 0; k + 1 < d.rank(); ++k) rest(k, k + 1) = 0;
    EXPECT_EQ(rest.norm(), 0.0);
  }
}

TEST(ConnMatrices, DiagonalMatchesFiniteDifferences) {
  // diag of Az is d/dz log H = (1/2)(d/dx - i d/dy) log H
  Rng rng(1);
  const HiggsData d = HiggsData::fuchsian(2);
  for (int s = 0; s < 50; ++s) {
    const UHPoint z = random_z(rng);
    const double e = 1e-6 * z.y;
    const RVec lp = d.H(z.y + e).array().log(), lm = d.H(z.y - e).array().log();
    const ConnSample c = conn_matrices(d, z);
    for (int k = 0; k < d.rank(); ++k) {
      const cplx want = -0.5 * kI * (lp(k) - lm(k)) / (2 * e);
      ASSERT_NEAR(std::abs(c.Az(k, k) - want), 0, 1e-8 * (1 + std::abs(want)));
    }
  }
}

TEST(Flatness, Examples) {
  EXPECT_LE(flatness_residual(HiggsData::fuchsian(1), UHPoint(0, 1), 0.1), 1e-6);
  EXPECT_LE(flatness_residual(HiggsData::fuchsian(2), UHPoint(2, 3), 0.3), 1e-6);
  EXPECT_EQ(flatness_residual(HiggsData::fuchsian(2), UHPoint(2, 3), 0.0), 0.0);
  EXPECT_THROW(flatness_residual(HiggsData::fuchsian(1), UHPoint(0, 1), 1.0), DomainError);
}

TEST(Flatness, RandomLoops) {
  Rng rng(2);
  for (int n = 1; n <= 3; ++n)
    for (int s = 0; s < 5; ++s) {
      const UHPoint z = random_z(rng);
      const double r = z.y * rng.uniform(0.05, 0.9);
      ASSERT_LE(flatness_residual(HiggsData::fuchsian(n), z, r), 1e-6) << n;
    }
}

TEST(Flatness, WrongMetricIsNotFlat) {
  HiggsData d = HiggsData::fuchsian(1);
  d.r[0] *= 2.0;
  EXPECT_GT(flatness_residual(d, UHPoint(0, 1), 0.5), 1e-3);
}

TEST(Parallel, RealSectionsForNOne) {
  Rng rng(3);
  const HiggsData d = HiggsData::fuchsian(1);
  double worst = 0;
  for (int s = 0; s < 1000; ++s) {
    const UHPoint z = random_z(rng);
    const double a = rng.normal(), b = rng.normal();
    const double scale = step1_section(a, b, z.z()).norm() + 1;
    worst = std::max(worst, covariant_derivative_fd(d, [&](cplx w) { return step1_section(a, b, w); }, z,
                                                    1e-5 * z.y) / scale);
  }
  EXPECT_LE(worst, 1e-7);
  // a section that is not parallel
  EXPECT_GT(covariant_derivative_fd(d, [](cplx w) { return CVec(CVec::Ones(2) * w); }, UHPoint(0, 1)), 0.1);
}

TEST(Parallel, TransportMovesSectionsToThemselves) {
  Rng rng(4);
  const HiggsData d = HiggsData::fuchsian(1);
  for (int s = 0; s < 10; ++s) {
    const UHPoint z0 = random_z(rng), z1 = random_z(rng);
    const double a = rng.normal(), b = rng.normal();
    const CVec want = step1_section(a, b, z1.z());
    const CVec got = transport_segment(d, z0, z1) * step1_section(a, b, z0.z());
    ASSERT_LE((got - want).norm(), 1e-7 * (1 + want.norm()));
  }
}

TEST(Hitchin, Examples) {
  EXPECT_LE(hitchin_residual(HiggsData::fuchsian(1), UHPoint(0, 1)), 1e-8);
  EXPECT_LE(hitchin_residual(HiggsData::fuchsian(3), UHPoint(0.5, 0.2)), 1e-8);
  HiggsData bad = HiggsData::fuchsian(2);
  bad.m[0] += 2;
  EXPECT_GT(hitchin_residual(bad, UHPoint(0, 1)), 1e-2);
}

TEST(Hitchin, CalibrationIsUniqueAndFrozen) {
  Rng rng(5);
  for (int n = 1; n <= 3; ++n) {
    const HitchinCalibration cal = calibrate_hitchin(HiggsData::fuchsian(n), random_z(rng));
    EXPECT_EQ(cal.best.sign, kHitchinConvention.sign);
    EXPECT_EQ(cal.best.factor, kHitchinConvention.factor);
    EXPECT_LE(cal.best_residual, 1e-8);
    EXPECT_GT(cal.runner_up, 1e-2);
    EXPECT_EQ(cal.table.size(), 6u);
  }
}

TEST(Hitchin, RandomPoints) {
  Rng rng(6);
  for (int n = 1; n <= 4; ++n)
    for (int s = 0; s < 100; ++s) {
      const UHPoint z = random_z(rng);
      // the terms scale like 1/y^2
      ASSERT_LE(hitchin_residual(HiggsData::fuchsian(n), z), 1e-8 * std::max(1.0, 1 / (z.y * z.y)));
    }
}

TEST(Hitchin, CurvatureTermMatchesFiniteDifferences) {
  Rng rng(7);
  const HiggsData d = HiggsData::fuchsian(2);
  for (int s = 0; s < 20; ++s) {
    const UHPoint z(rng.uniform(-1, 1), rng.uniform(0.5, 2));
    ASSERT_LE((curvature_term(d, z) - curvature_term_fd(d, z)).norm(), 1e-5);
  }
}

TEST(RealStructure, Involution) {
  Rng rng(8);
  for (int s = 0; s < 1000; ++s) {
    const HiggsData d = HiggsData::fuchsian(1 + s % 4);
    const UHPoint z = random_z(rng);
    const CVec v = rng.cgauss(d.rank());
    const CVec w = real_structure_tau(d, z, real_structure_tau(d, z, v));
    ASSERT_LE((w - v).norm(), 1e-12 * v.norm());
    // anti-linear
    const CVec iv = real_structure_tau(d, z, kI * v);
    ASSERT_LE((iv + kI * real_structure_tau(d, z, v)).norm(), 1e-12 * v.norm());
  }
  EXPECT_THROW(real_structure_tau(HiggsData::fuchsian(1), UHPoint(0, 1), CVec::Ones(3)), DomainError);
}

TEST(RealStructure, UnitMetricIsReversal) {
  const HiggsData d = HiggsData::fuchsian(2);
  const UHPoint z(0.3, std::sqrt(0.5));  // h = 1
  Rng rng(9);
  const CVec v = rng.cgauss(4);
  EXPECT_LE((real_structure_tau(d, z, v) - v.reverse().conjugate()).norm(), 1e-14);
}

TEST(RealStructure, FixedPoints) {
  Rng rng(10);
  for (int n = 1; n <= 4; ++n) {
    const HiggsData d = HiggsData::fuchsian(n);
    const UHPoint z = random_z(rng);
    CVec t = rng.cgauss(2 * n);
    for (int k = n; k < 2 * n; ++k) t(k) = std::conj(t(2 * n - 1 - k));
    const CVec s = real_point(d, z, t);
    ASSERT_LE((real_structure_tau(d, z, s) - s).norm(), 1e-12 * s.norm());
    // s_1 = h^{(2n-1)/2} t_1
    ASSERT_NEAR(std::abs(s(0) - std::pow(h_metric(z.y), (2 * n - 1) / 2.0) * t(0)), 0, 1e-12 * s.norm());
  }
}

TEST(RealStructure, TransportPreservesRealVectors) {
  Rng rng(11);
  for (int n = 1; n <= 2; ++n) {
    const HiggsData d = HiggsData::fuchsian(n);
    for (int s = 0; s < 5; ++s) {
      const UHPoint z0 = random_z(rng), z1 = random_z(rng);
      CVec t = rng.cgauss(2 * n);
      for (int k = n; k < 2 * n; ++k) t(k) = std::conj(t(2 * n - 1 - k));
      const CVec v = transport_segment(d, z0, z1) * real_point(d, z0, t);
      ASSERT_LE((real_structure_tau(d, z1, v) - v).norm(), 1e-7 * v.norm());
      const CVec w = loop_holonomy(d, z0, 0.5 * z0.y) * real_point(d, z0, t);
      ASSERT_LE((real_structure_tau(d, z0, w) - w).norm(), 1e-7 * w.norm());
    }
  }
}

TEST(Jacobian, Examples) {
  const HiggsData d = HiggsData::fuchsian(2);
  const JacobianReport r = tautological_jacobian(d, Field::C, UHPoint(0, 1), CVec::Unit(4, 0));
  EXPECT_EQ(r.dim, 8);
  EXPECT_GT(r.min_sv, 1e-6);
  EXPECT_THROW(tautological_jacobian(d, Field::C, UHPoint(0, 1), CVec::Ones(4)), DomainError);
  EXPECT_THROW(tautological_jacobian(d, Field::C, UHPoint(0, 1), CVec::Zero(4)), DomainError);
  EXPECT_THROW(tautological_jacobian(d, Field::C, UHPoint(0, 1), CVec::Unit(3, 0)), DomainError);
}

TEST(Jacobian, TransverseOnRandomSamples) {
  Rng rng(12);
  for (Field f : {Field::R, Field::C})
    for (int n = 2; n <= 3; ++n) {
      const HiggsData d = HiggsData::fuchsian(n);
      double worst = 1e300;
      for (int s = 0; s < 1000; ++s) {
        const JacobianReport r = tautological_jacobian(d, f, random_z(rng), random_cone_prime(rng, n, f));
        ASSERT_EQ(r.dim, f == Field::C ? 4 * n : 2 * n);
        worst = std::min(worst, r.min_sv);
        if (f == Field::R) ASSERT_LE(r.reality_defect, 1e-10);
      }
      EXPECT_GT(worst, 1e-6) << n;
    }
}

TEST(Jacobian, IndependentOfBasePoint) {
  Rng rng(13);
  const HiggsData d = HiggsData::fuchsian(2);
  for (int s = 0; s < 20; ++s) {
    const CVec t = random_cone_prime(rng, 2, Field::C);
    const double a = tautological_jacobian(d, Field::C, random_z(rng), t).min_sv;
    const double b = tautological_jacobian(d, Field::C, random_z(rng), t).min_sv;
    ASSERT_NEAR(a, b, 1e-10);
  }
}

TEST(Jacobian, NegativeControlWithoutHiggsField) {
  // report only: without phi the columns lose rank at t = e_1
  HiggsData d = HiggsData::fuchsian(2);
  for (double& r : d.r) r = 0.0;
  const JacobianReport r = tautological_jacobian(d, Field::C, UHPoint(0, 1), CVec::Unit(4, 0));
  EXPECT_GE(r.min_sv, 0.0);
  RecordProperty("min_sv_without_phi", std::to_string(r.min_sv));
}

TEST(Sne, Examples) {
  // n = 2: 2 r_1 = 2 sqrt(1.5) > r_2 + r_0 = sqrt(2)
  const HiggsData d = HiggsData::fuchsian(2);
  EXPECT_NEAR(d.r[0], std::sqrt(1.5), 1e-15);
  EXPECT_NEAR(d.r[1], std::sqrt(2.0), 1e-15);
  EXPECT_GT(2 * d.r[0], d.r[1]);
  EXPECT_TRUE(sne_inequality(1).holds);
  EXPECT_EQ(sne_inequality(1).rel.size(), 1u);
  EXPECT_TRUE(sne_inequality(2).holds);
}

TEST(Sne, ExactForAllSmallN) {
  for (long n = 1; n <= 50; ++n)
    for (long i = 1; i <= n; ++i) ASSERT_TRUE(sne_integer_identity(n, i)) << n << " " << i;
  for (int n = 1; n <= 20; ++n) {
    const SneReport r = sne_inequality(n);
    EXPECT_TRUE(r.holds) << n;
    EXPECT_TRUE(r.identity) << n;
    ASSERT_EQ(static_cast<int>(r.rel.size()), n);
    // floating point cross-check of 2 r_{2i-1} > r_{2i} + r_{2i-2}
    const HiggsData d = HiggsData::fuchsian(n);
    auto r_ = [&](int k) { return k <= 0 || k >= 2 * n ? 0.0 : d.r[k - 1]; };
    for (int i = 1; i <= n; ++i) EXPECT_GT(2 * r_(2 * i - 1), r_(2 * i) + r_(2 * i - 2)) << n;
  }
}
