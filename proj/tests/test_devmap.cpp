#include <gtest/gtest.h>

#include <algorithm>

#include "hgeo/devmap.hpp"

using namespace hgeo;

namespace {

UHPoint random_z(Rng& rng) { return UHPoint(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1))); }

std::vector<double> sorted_real_roots(const HPoly& p) {
  std::vector<double> v;
  for (auto& c : real_root_multiplicity(p).clusters)
    if (c.is_real) v.push_back(c.at_infinity() ? std::numeric_limits<double>::infinity() : c.value().real());
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<double> sorted_values(const N2Roots& a) {
  std::vector<double> v;
  for (const RP1Point* p : {&a.a1, &a.a2, &a.a3})
    v.push_back(p->is_infinite() ? std::numeric_limits<double>::infinity() : p->value());
  std::sort(v.begin(), v.end());
  return v;
}

N2Params random_params(Rng& rng) {
  return {rng.uniform(kThetaLo, kThetaHi), std::exp(rng.uniform(-1, 1)), rng.uniform(0.05, kPi - 0.05)};
}

}  // namespace

TEST(Frames, ExamplesAtI) {
  const Frame2 f = frames(kBasePoint);
  const double s = std::pow(2.0, -0.25);
  EXPECT_NEAR(std::abs(f.e1(0) - s * std::exp(-0.75 * kI * kPi)), 0, 1e-15);
  EXPECT_NEAR(std::abs(f.e1(1) - s * std::exp(0.75 * kI * kPi)), 0, 1e-15);
  Rng rng(1);
  for (int j = 0; j < 10; ++j) {
    const UHPoint z = random_z(rng);
    const Frame2 g = frames(z);
    const double sz = std::sqrt(h_metric(z.y));
    EXPECT_NEAR(std::abs(g.e2(0) - sz * std::conj(kLambda)), 0, 1e-15);
    EXPECT_NEAR(std::abs(g.e2(1) - sz * kLambda), 0, 1e-15);
  }
}

TEST(Frames, Parallel) {
  Rng rng(2);
  const HiggsData d = HiggsData::fuchsian(1);
  for (int s = 0; s < 200; ++s) {
    const UHPoint z = random_z(rng);
    for (int col = 0; col < 2; ++col) {
      auto sec = [&](cplx w) { return CVec(frames(UHPoint::of(w)).holomorphic().col(col)); };
      ASSERT_LE(covariant_derivative_fd(d, sec, z, 1e-5 * z.y) / (1 + sec(z.z()).norm()), 1e-7);
    }
  }
}

TEST(Transport2, IdentityAndGroupoid) {
  Rng rng(3);
  for (int s = 0; s < 100; ++s) {
    const UHPoint a = random_z(rng), b = random_z(rng), c = random_z(rng);
    ASSERT_LE((transport2(a, a) - Mat2c::Identity()).norm(), 1e-13);
    const Mat2c ab = transport2(a, b), bc = transport2(b, c), ac = transport2(a, c);
    ASSERT_LE((ab * bc - ac).norm(), 1e-12 * ab.norm() * bc.norm());
  }
}

TEST(Transport2, MatchesOdeIntegrator) {
  Rng rng(4);
  const HiggsData d = HiggsData::fuchsian(1);
  for (int s = 0; s < 100; ++s) {
    const UHPoint z0 = random_z(rng), z = random_z(rng);
    // the integrator carries the fibre at z to the fibre at z0
    const CMat ode = transport_segment(d, z, z0);
    const Mat2c cf = transport2(z0, z);
    ASSERT_LE((ode - CMat(cf)).norm(), 1e-6 * cf.norm());
  }
}

TEST(TransportSym, DiagonalAndIdentity) {
  const cplx mu = std::exp(cplx(0.3, 0.7));
  Mat2c T = Mat2c::Zero();
  T(0, 0) = mu;
  T(1, 1) = 1.0 / mu;
  const CMat S = sym_power(T, 2);
  const cplx want[4] = {mu * mu * mu, mu, 1.0 / mu, 1.0 / (mu * mu * mu)};
  CMat D = CMat::Zero(4, 4);
  for (int k = 0; k < 4; ++k) D(k, k) = want[k];
  EXPECT_LE((S - D).norm(), 1e-13);
  EXPECT_LE((transport_sym(UHPoint(1, 2), UHPoint(1, 2), 3) - CMat::Identity(6, 6)).norm(), 1e-13);
  EXPECT_THROW(sym_power(T, 0), DomainError);
}

TEST(TransportSym, HomomorphismAndDeterminant) {
  Rng rng(5);
  for (int n = 1; n <= 4; ++n)
    for (int s = 0; s < 30; ++s) {
      const UHPoint a = random_z(rng), b = random_z(rng), c = random_z(rng);
      const CMat ab = transport_sym(a, b, n), bc = transport_sym(b, c, n), ac = transport_sym(a, c, n);
      ASSERT_LE((ab * bc - ac).norm(), 1e-10 * ab.norm() * bc.norm());
      ASSERT_NEAR(std::abs(transport_sym(kBasePoint, c, n).determinant()), 1.0, 1e-8);
      // sym power of a product
      Mat2c A, B;
      A << rng.cgauss(2), rng.cgauss(2);
      B << rng.cgauss(2), rng.cgauss(2);
      ASSERT_LE((sym_power(A * B, n) - sym_power(A, n) * sym_power(B, n)).norm(),
                1e-10 * sym_power(A, n).norm() * sym_power(B, n).norm());
    }
}

TEST(TransportSym, MatchesOdeIntegrator) {
  Rng rng(6);
  for (int n = 2; n <= 3; ++n) {
    const HiggsData d = HiggsData::fuchsian(n);
    for (int s = 0; s < 20; ++s) {
      const UHPoint z0 = random_z(rng), z = random_z(rng);
      const CMat cf = transport_holo(z0, z, n);
      ASSERT_LE((transport_segment(d, z, z0) - cf).norm(), 1e-6 * cf.norm()) << n;
    }
  }
}

TEST(Developing, BasePointPhase) {
  // t = e_1, n = 2 at z = i: only the Z^3 coefficient survives, with phase
  // -e^{-3 i pi/4} once the overall factor -1 is included
  const HPoly p = to_basis(developing(kBasePoint, CVec::Unit(4, 0)), Basis::ZW);
  EXPECT_LE(p.coeffs().head(3).norm(), 1e-14);
  EXPECT_NEAR(std::arg(p[3]), std::arg(-std::exp(-0.75 * kI * kPi)), 1e-14);
  EXPECT_THROW(developing(kBasePoint, CVec::Ones(4)), DomainError);
  EXPECT_THROW(developing(kBasePoint, CVec::Ones(3)), DomainError);
}

TEST(Developing, FibreIsLinear) {
  Rng rng(7);
  for (int s = 0; s < 100; ++s) {
    const int n = 1 + s % 4;
    const UHPoint z = random_z(rng);
    const CVec t = rng.cgauss(2 * n), u = rng.cgauss(2 * n);
    const cplx a(rng.normal(), rng.normal()), b(rng.normal(), rng.normal());
    const CVec lhs = developing_unchecked(z, a * t + b * u).coeffs();
    const CVec rhs = a * developing_unchecked(z, t).coeffs() + b * developing_unchecked(z, u).coeffs();
    ASSERT_LE((lhs - rhs).norm(), 1e-10 * (1 + rhs.norm()));
  }
}

TEST(Developing, ThreeFormsAgree) {
  Rng rng(8);
  for (Field f : {Field::R, Field::C})
    for (int n = 2; n <= 4; ++n)
      for (int s = 0; s < 50; ++s) {
        const UHPoint z = random_z(rng);
        const CVec t = random_cone_prime(rng, n, f);
        const CVec d = developing(z, t, f).coeffs();
        ASSERT_LE(fs_distance(developing_product_form(z, t, f).coeffs(), d), 1e-8);
        ASSERT_LE(fs_distance(developing_via_transport(z, t, f).coeffs(), d), 1e-8);
        if (f == Field::R) ASSERT_LE(d.imag().norm(), 1e-10 * d.norm());
      }
}

TEST(Developing, ConeIdentityAtI) {
  Rng rng(9);
  for (Field f : {Field::R, Field::C})
    for (int n = (f == Field::R ? 2 : 1); n <= 5; ++n) {
      const Lambda lam = default_lambda(n);
      for (int s = 0; s < 200; ++s) {
        const HPoly p = developing(kBasePoint, random_cone_prime(rng, n, f), f);
        ASSERT_LE(std::abs(q_lambda(lam, p, p)) / p.coeffs().squaredNorm(), 1e-10) << n;
      }
    }
}

TEST(Developing, AvoidsK) {
  Rng rng(10);
  for (Field f : {Field::R, Field::C})
    for (int n = 2; n <= 3; ++n)
      for (int s = 0; s < 1000; ++s) {
        const HPoly p = developing(random_z(rng), random_cone_prime(rng, n, f), f);
        const KMembership k = in_K(p * (1.0 / p.norm()));
        ASSERT_FALSE(k.member) << n;
      }
}

TEST(LeftAction, FrameCocycle) {
  EXPECT_LE(left_action_frame_check(SL2R(), kBasePoint), 1e-15);
  EXPECT_LE(left_action_frame_check(g_t(0.7), kBasePoint), 1e-14);
  EXPECT_NEAR(cocycle_angle(g_t(0.7), kBasePoint), 0.0, 1e-15);
  Rng rng(11);
  for (int s = 0; s < 1000; ++s) ASSERT_LE(left_action_frame_check(random_sl2(rng), random_z(rng)), 1e-10);
}

TEST(LeftAction, MobiusIsAnAction) {
  Rng rng(12);
  for (int s = 0; s < 100; ++s) {
    const SL2R g = random_sl2(rng), h = random_sl2(rng);
    const UHPoint z = random_z(rng);
    const UHPoint a = mobius(g, mobius(h, z)), b = mobius(g * h, z);
    ASSERT_LE(std::abs(a.z() - b.z()), 1e-10 * (1 + std::abs(b.z())));
  }
}

TEST(Equivariance, Examples) {
  Rng rng(13);
  const CVec t = random_cone_prime(rng, 2, Field::C);
  EXPECT_LE(equivariance_check(SL2R(), random_z(rng), t), 1e-12);
  for (int s = 0; s < 20; ++s)
    EXPECT_LE(equivariance_check(rotation_sl2(rng.uniform(-kPi, kPi)), kBasePoint, t), 1e-9);
}

TEST(Equivariance, RandomSamples) {
  Rng rng(14);
  for (Field f : {Field::R, Field::C})
    for (int n = 2; n <= 3; ++n) {
      double worst = 0;
      for (int s = 0; s < 1000; ++s)
        worst = std::max(worst, equivariance_check(random_sl2(rng), random_z(rng), random_cone_prime(rng, n, f), f));
      EXPECT_LE(worst, 1e-8) << n;
    }
}

TEST(N2, ForwardExamples) {
  const N2Roots a = n2_forward({kPi / 4, 1.0, kPi / 2});
  EXPECT_NEAR(a.a1.value(), 1.0, 1e-14);
  const N2Params p{kPi / 2, 1.7, 0.9};
  const N2Roots b = n2_forward(p);
  EXPECT_TRUE(b.a1.is_infinite(1e-15));  // cos(pi/2) is 6e-17 in double
  EXPECT_NEAR(p.r * std::cos(p.phi), 0.5 * (b.a2.value() + b.a3.value()), 1e-14);
  EXPECT_THROW(n2_forward({0.1, 1.0, 1.0}), DomainError);
  EXPECT_THROW(n2_forward({1.0, -1.0, 1.0}), DomainError);
  EXPECT_THROW(n2_forward({1.0, 1.0, kPi}), DomainError);
}

TEST(N2, ForwardMatchesDevelopedRoots) {
  Rng rng(15);
  for (int s = 0; s < 200; ++s) {
    const N2Params p = random_params(rng);
    const HPoly P = developing(p.z(), n2_omega1_vector(p.theta_p), Field::R);
    const std::vector<double> got = sorted_real_roots(P), want = sorted_values(n2_forward(p));
    ASSERT_EQ(got.size(), 3u);
    for (int j = 0; j < 3; ++j) {
      if (std::isinf(want[j])) {
        ASSERT_GT(std::abs(got[j]), 1e6);
        continue;
      }
      ASSERT_NEAR(got[j], want[j], 1e-7 * (1 + std::abs(want[j])));
    }
  }
}

TEST(N2, RoundTrip) {
  Rng rng(16);
  for (int s = 0; s < 1000; ++s) {
    N2Params p = random_params(rng);
    if (s % 50 == 0) p.theta_p = kPi / 2;  // a1 = infinity
    const N2Roots a = n2_forward(p);
    ASSERT_EQ(n2_admissible_count({a.a1, a.a2, a.a3}), 1);
    const N2Params q = n2_inverse(a);
    ASSERT_NEAR(q.theta_p, p.theta_p, 1e-9);
    ASSERT_NEAR(q.r, p.r, 1e-9 * (1 + p.r));
    ASSERT_NEAR(q.phi, p.phi, 1e-9);
    const N2Params u = n2_inverse_unordered({a.a3, a.a1, a.a2});
    ASSERT_NEAR(u.theta_p, p.theta_p, 1e-9);
    // inverse then forward
    const N2Roots b = n2_forward(q);
    ASSERT_LE(b.a1.distance(a.a1) + b.a2.distance(a.a2) + b.a3.distance(a.a3), 1e-9);
  }
}

TEST(N2, InverseOnRandomRootTriples) {
  Rng rng(17);
  int done = 0;
  for (int s = 0; s < 1000; ++s) {
    std::array<RP1Point, 3> a{RP1Point::make(rng.normal(), 1), RP1Point::make(rng.normal(), 1),
                              RP1Point::make(rng.normal(), 1)};
    const N2Params p = n2_inverse_unordered(a);
    const N2Roots b = n2_forward(p);
    std::vector<double> got = sorted_values(b), want;
    for (auto& x : a) want.push_back(x.value());
    std::sort(want.begin(), want.end());
    for (int j = 0; j < 3; ++j) ASSERT_NEAR(got[j], want[j], 1e-9 * (1 + std::abs(want[j])));
    ++done;
  }
  EXPECT_EQ(done, 1000);
}

TEST(N2, Degenerate) {
  const RP1Point x = RP1Point::make(0.3, 1);
  EXPECT_THROW(n2_inverse(x, x, RP1Point::make(1, 1)), DegenerateRoots);
  EXPECT_THROW(n2_inverse_unordered({x, RP1Point::make(1, 1), x}), DegenerateRoots);
}

TEST(N2, OmegaTwoBranch) {
  Rng rng(18);
  for (int s = 0; s < 1000; ++s) {
    const UHPoint z = random_z(rng);
    const double th = rng.uniform(0, kPi);
    const RP1Point a = omega2_forward(z, th);
    const double back = omega2_inverse(z, a);
    const double diff = std::remainder(back - th, kPi);
    ASSERT_NEAR(diff, 0.0, 1e-9);
    if (s < 50) {
      // the developed polynomial has roots z, zbar and a
      const HPoly P = developing(z, n2_omega2_vector(th), Field::R);
      const RootReport rr = real_root_multiplicity(P);
      ASSERT_EQ(rr.clusters.size(), 3u);
      for (auto& c : rr.clusters) {
        if (c.is_real) {
          if (!a.is_infinite()) ASSERT_NEAR(c.value().real(), a.value(), 1e-7 * (1 + std::abs(a.value())));
        } else {
          ASSERT_NEAR(std::abs(c.value() - (c.value().imag() > 0 ? z.z() : std::conj(z.z()))), 0, 1e-8);
        }
      }
    }
  }
}
