#pragma once
// Closed-form parallel frames for the uniformising rank-2 bundle, their
// symmetric powers, the developing map into binary forms in the flat frame
// (e1(z0), e2(z0)), SL(2,R)-equivariance and the explicit n = 2 root system.
//
// Coordinates: "sigma" coordinates are those of the unitary frame
// X = h^{1/2} dz^{1/2}, Y = h^{-1/2} dz^{-1/2} (and its normalised symmetric
// powers); "holomorphic" coordinates are those of dz^{a_k} used by higgsflat.

#include "hgeo/dod.hpp"
#include "hgeo/higgsflat.hpp"
#include "hgeo/qform.hpp"

namespace hgeo {

using Mat2c = Eigen::Matrix2cd;

inline const cplx kLambda = std::exp(kI * (kPi / 4));

inline const UHPoint kBasePoint{0.0, 1.0};

struct Frame2 {
  Eigen::Vector2cd e1, e2;  // sigma coordinates
  UHPoint z;

  Mat2c matrix() const {
    Mat2c m;
    m.col(0) = e1;
    m.col(1) = e2;
    return m;
  }
  // in the holomorphic frame (dz^{1/2}, dz^{-1/2})
  Mat2c holomorphic() const {
    const double s = std::sqrt(h_metric(z.y));
    Mat2c d = Mat2c::Zero();
    d(0, 0) = s;
    d(1, 1) = 1.0 / s;
    return d * matrix();
  }
};

inline Frame2 frames(const UHPoint& z) {
  const double s = std::sqrt(h_metric(z.y));
  const cplx zz = z.z();
  const cplx li = std::conj(kLambda);
  Frame2 f;
  f.z = z;
  f.e1 << s * std::conj(zz) * li, s * zz * kLambda;
  f.e2 << s * li, s * kLambda;
  if (std::abs(f.matrix().determinant()) <= 1e-10) throw DomainError("frames: degenerate frame");
  return f;
}

// fibre at z -> fibre at z0, taking e_i(z) to e_i(z0)
inline Mat2c transport2_sigma(const UHPoint& z0, const UHPoint& z) {
  return frames(z0).matrix() * frames(z).matrix().inverse();
}
inline Mat2c transport2(const UHPoint& z0, const UHPoint& z) {
  return frames(z0).holomorphic() * frames(z).holomorphic().inverse();
}

// Matrix of Sym^{2n-1}(T) on the normalised monomials sqrt(C(d,k)) X^{d-k} Y^k.
inline CMat sym_power(const Mat2c& T, int n) {
  if (n < 1) throw DomainError("sym_power: n >= 1");
  const int d = 2 * n - 1;
  CMat S(d + 1, d + 1);
  for (int k = 0; k <= d; ++k) {
    // T X = T00 X + T10 Y, T Y = T01 X + T11 Y
    const CVec c = substitute(CVec::Unit(d + 1, k), T(0, 0), T(1, 0), T(0, 1), T(1, 1));
    for (int j = 0; j <= d; ++j) S(j, k) = c(j) * std::sqrt(binom(d, k) / binom(d, j));
  }
  return S;
}

inline CMat transport_sym(const UHPoint& z0, const UHPoint& z, int n) {
  return sym_power(transport2_sigma(z0, z), n);
}

// diag(h^{a_k}), a_k = (2n+1-2k)/2: sigma coordinates -> holomorphic ones
inline RVec sigma_scale(const UHPoint& z, int n) {
  RVec s(2 * n);
  for (int k = 1; k <= 2 * n; ++k) s(k - 1) = std::pow(h_metric(z.y), (2.0 * n + 1 - 2 * k) / 2.0);
  return s;
}

inline CMat transport_holo(const UHPoint& z0, const UHPoint& z, int n) {
  return sigma_scale(z0, n).cast<cplx>().asDiagonal() * transport_sym(z0, z, n) *
         sigma_scale(z, n).cwiseInverse().cast<cplx>().asDiagonal();
}

namespace detail {

inline int half_rank_of(const CVec& t) {
  if (t.size() < 2 || t.size() % 2) throw DomainError("developing: t must have even length >= 2");
  return static_cast<int>(t.size() / 2);
}

inline void require_cone_prime(const CVec& t, Field f) {
  if (!in_cone_prime(t, f, 1e-10).member) throw DomainError("developing: t violates the cone equation");
}

}  // namespace detail

// sum t_k sigma_k at z, transported to the base point and written as a
// binary form in (e1, e2). Flat frames make this independent of z0.
inline HPoly developing_unchecked(const UHPoint& z, const CVec& t) {
  const int n = detail::half_rank_of(t);
  const int d = 2 * n - 1;
  const Mat2c Fi = frames(z).matrix().inverse();
  CVec c(d + 1);
  for (int j = 0; j <= d; ++j) c(j) = t(j) * std::sqrt(binom(d, j));
  // X = Fi00 e1 + Fi10 e2, Y = Fi01 e1 + Fi11 e2
  return HPoly(Basis::XY, substitute(c, Fi(0, 0), Fi(1, 0), Fi(0, 1), Fi(1, 1)));
}

inline HPoly developing(const UHPoint& z, const CVec& t, Field f = Field::C) {
  detail::half_rank_of(t);
  detail::require_cone_prime(t, f);
  return developing_unchecked(z, t);
}

// The product form with the explicit overall factor -(2 sqrt2 y)^{(1-2n)/2}:
// X ~ lambda^{-1}(e1 - z e2), Y ~ lambda (e1 - zbar e2).
inline HPoly developing_product_form(const UHPoint& z, const CVec& t, Field f = Field::C) {
  const int n = detail::half_rank_of(t);
  detail::require_cone_prime(t, f);
  const int d = 2 * n - 1;
  const cplx zz = z.z();
  CVec lx(2), ly(2);
  lx << std::conj(kLambda), -std::conj(kLambda) * zz;
  ly << kLambda, -kLambda * std::conj(zz);
  const HPoly X(Basis::XY, lx), Y(Basis::XY, ly);
  HPoly acc = HPoly::zero(Basis::XY, d);
  for (int k = 1; k <= 2 * n; ++k) {
    HPoly term(Basis::XY, CVec::Ones(1));
    for (int j = 0; j < 2 * n - k; ++j) term = poly_mul(term, X);
    for (int j = 0; j < k - 1; ++j) term = poly_mul(term, Y);
    acc = acc + term * (t(k - 1) * std::sqrt(binom(d, k - 1)));
  }
  return acc * cplx(-std::pow(2.0 * std::sqrt(2.0) * z.y, (1.0 - 2.0 * n) / 2.0));
}

// Transport to the base point first, then read off there. The transported
// vector is generally off the cone, hence the unchecked reader.
inline HPoly developing_via_transport(const UHPoint& z, const CVec& t, Field f = Field::C) {
  const int n = detail::half_rank_of(t);
  detail::require_cone_prime(t, f);
  return developing_unchecked(kBasePoint, transport_sym(kBasePoint, z, n) * t);
}

// ---------------------------------------------------------------------------
// SL(2,R) on the half plane

inline UHPoint mobius(const SL2R& g, const UHPoint& z) {
  const cplx w = (g.a() * z.z() + g.b()) / (g.c() * z.z() + g.d());
  return UHPoint(w.real(), w.imag());
}

// theta with e^{i theta} = (cz+d)/|cz+d|
inline double cocycle_angle(const SL2R& g, const UHPoint& z) { return std::arg(g.c() * z.z() + g.d()); }

// (g^{-1})^* (h^{1/2} dz^{1/2})_z = h(gz)^{1/2} dz^{1/2}_{gz} (cz+d)/|cz+d|.
// Relative residual; the pullback uses g'(z) = 1/(cz+d)^2 and h(gz) from the
// image point, and the square root branch continuous from the identity.
inline double left_action_frame_check(const SL2R& g, const UHPoint& z) {
  const cplx czd = g.c() * z.z() + g.d();
  const cplx gp = 1.0 / (czd * czd);
  cplx root = std::sqrt(1.0 / gp);
  if ((root * std::conj(czd)).real() < 0.0) root = -root;
  const cplx lhs = std::sqrt(h_metric(z.y)) * root;
  const UHPoint w = mobius(g, z);
  const cplx rhs = std::sqrt(h_metric(w.y)) * (czd / std::abs(czd));
  return std::abs(lhs - rhs) / std::abs(rhs);
}

// g.(z,t) = (gz, phi'(theta) t)
inline CVec act_fibre(const SL2R& g, const UHPoint& z, const CVec& t) {
  const int n = detail::half_rank_of(t);
  return rep_matrices(cocycle_angle(g, z), n).phi_prime * t;
}

// FS distance between D(g.(z,t)) and g.D(z,t)
inline double equivariance_check(const SL2R& g, const UHPoint& z, const CVec& t, Field f = Field::C) {
  const HPoly lhs = developing(mobius(g, z), act_fibre(g, z, t), f);
  const HPoly rhs = act(g, developing(z, t, f));
  return fs_distance(lhs.coeffs(), rhs.coeffs());
}

// ---------------------------------------------------------------------------
// n = 2, real field: polynomials with three distinct real roots (Omega_1) and
// with one real root and a conjugate pair (Omega_2).

struct DegenerateRoots : DomainError {
  using DomainError::DomainError;
};

struct N2Params {
  double theta_p = kPi / 4;  // [pi/4, 7pi/12)
  double r = 1.0;            // > 0
  double phi = kPi / 2;      // (0, pi)

  UHPoint z() const { return UHPoint(r * std::cos(phi), r * std::sin(phi)); }
  static N2Params from_z(const UHPoint& z, double theta_p) {
    return {theta_p, std::abs(z.z()), std::arg(z.z())};
  }
};

inline constexpr double kThetaLo = kPi / 4, kThetaHi = 7 * kPi / 12;

struct N2Roots {
  RP1Point a1, a2, a3;  // zero loci [x:1], infinity = [1:0]
};

inline void check_n2_params(const N2Params& p) {
  if (!(p.theta_p >= kThetaLo && p.theta_p < kThetaHi)) throw DomainError("n2: theta' outside [pi/4, 7pi/12)");
  if (!(p.r > 0.0)) throw DomainError("n2: r must be positive");
  if (!(p.phi > 0.0 && p.phi < kPi)) throw DomainError("n2: phi outside (0, pi)");
}

// a_j = r cos(alpha_j - phi) / cos(alpha_j), alpha_j = theta' + (j-1) pi/3
inline N2Roots n2_forward(const N2Params& p) {
  check_n2_params(p);
  auto root = [&](int j) {
    const double al = p.theta_p + j * kPi / 3;
    return RP1Point::make(p.r * std::cos(al - p.phi), std::cos(al));
  };
  return {root(0), root(1), root(2)};
}

// the t in the F_1 component giving these parameters: theta = theta' - pi/4
inline CVec n2_omega1_vector(double theta_p) {
  const double th = theta_p - kPi / 4;
  CVec t = CVec::Zero(4);
  t(0) = std::exp(-3.0 * kI * th);
  t(3) = std::exp(3.0 * kI * th);
  return t;
}

// Inverse on the ordered triple. Admissible triples run a1 -> a2 -> a3 in
// increasing cyclic order on RP^1 and carry the one cyclic labelling whose
// theta' lands in [pi/4, 7pi/12); the other two belong to theta' + pi/3 and
// theta' + 2pi/3 (same roots, +-P). Sorting alone does not decide it: the
// image has a2 < a3 finite with a1 = infinity or a1 outside [a2, a3], but
// not every such triple is admissible.
inline N2Params n2_inverse(const RP1Point& a1, const RP1Point& a2, const RP1Point& a3) {
  constexpr double kEq = 1e-14;
  if (a1.distance(a2) <= kEq || a1.distance(a3) <= kEq || a2.distance(a3) <= kEq)
    throw DegenerateRoots("n2_inverse: repeated root");
  if (a2.is_infinite() || a3.is_infinite()) throw DomainError("n2_inverse: a2, a3 must be finite");
  const double x2 = a2.value(), x3 = a3.value();
  const double s3 = std::sqrt(3.0);
  double th, rs, rc;
  if (a1.is_infinite()) {
    th = kPi / 2;
    rc = 0.5 * (x2 + x3);
    rs = 0.5 * s3 * (x3 - x2);
  } else {
    const double x1 = a1.value();
    const double xi = (2 * x1 - (x2 + x3)) / (s3 * (x3 - x2));
    th = std::atan(xi);
    if (th < kThetaLo) th += kPi;
    rs = 2 * (x2 - x1) * (x3 - x1) / (s3 * (1 + xi * xi) * (x3 - x2));
    // same value as x1 - xi rs, but without the cancellation as x1 -> infinity;
    // 1 - sqrt3 xi stays away from 0 on the domain of xi
    rc = x2 - (xi + s3) * rs / (1 - s3 * xi);
  }
  if (!(th >= kThetaLo && th < kThetaHi)) throw DomainError("n2_inverse: roots not in the admissible order");
  if (!(rs > 0.0)) throw DomainError("n2_inverse: roots not in the admissible order");
  return {th, std::hypot(rc, rs), std::atan2(rs, rc)};
}

inline N2Params n2_inverse(const N2Roots& a) { return n2_inverse(a.a1, a.a2, a.a3); }

// any order: the admissible labelling is unique
inline N2Params n2_inverse_unordered(std::array<RP1Point, 3> a) {
  std::array<int, 3> idx{0, 1, 2};
  do {
    try {
      return n2_inverse(a[idx[0]], a[idx[1]], a[idx[2]]);
    } catch (const DegenerateRoots&) {
      throw;
    } catch (const DomainError&) {
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  throw DomainError("n2_inverse_unordered: no admissible labelling");
}

inline int n2_admissible_count(const std::array<RP1Point, 3>& a) {
  std::array<int, 3> idx{0, 1, 2};
  int c = 0;
  do {
    try {
      n2_inverse(a[idx[0]], a[idx[1]], a[idx[2]]);
      ++c;
    } catch (const DomainError&) {
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  return c;
}

// Omega_2: t = (0, e^{-i theta}, e^{i theta}, 0) at z has roots z, zbar and
// the real root r cos(pi/4 + theta - phi) / cos(pi/4 + theta).
inline CVec n2_omega2_vector(double theta) {
  CVec t = CVec::Zero(4);
  t(1) = std::exp(-kI * theta);
  t(2) = std::exp(kI * theta);
  return t;
}

inline RP1Point omega2_forward(const UHPoint& z, double theta) {
  const double r = std::abs(z.z()), ph = std::arg(z.z());
  const double be = kPi / 4 + theta;
  return RP1Point::make(r * std::cos(be - ph), std::cos(be));
}

// theta modulo pi (theta and theta + pi give -P and P)
inline double omega2_inverse(const UHPoint& z, const RP1Point& a) {
  const double r = std::abs(z.z()), ph = std::arg(z.z());
  const double rs = r * std::sin(ph), rc = r * std::cos(ph);
  // tan(pi/4 + theta) = (a - r cos phi) / (r sin phi)
  const double be = a.is_infinite() ? kPi / 2 : std::atan((a.value() - rc) / rs);
  double th = std::fmod(be - kPi / 4, kPi);
  if (th < 0) th += kPi;
  return th;
}

}  // namespace hgeo
