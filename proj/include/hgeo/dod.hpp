#pragma once
// The equivariant curve of n-planes v([a:b]) = {P : (aX+bY)^n | P}, and
// membership in K = union of these planes (a real root of multiplicity >= n).

#include "hgeo/slrep.hpp"

namespace hgeo {

struct SubspaceBasis {
  std::vector<HPoly> polys;

  CMat matrix() const {
    CMat m(polys.front().coeffs().size(), polys.size());
    for (size_t j = 0; j < polys.size(); ++j) m.col(j) = polys[j].coeffs();
    return m;
  }
};

inline HPoly linear_power(double a, double b, int n) {
  HPoly l(Basis::XY, CVec(2));
  l.coeffs() << a, b;
  HPoly r = HPoly(Basis::XY, CVec::Ones(1));
  for (int k = 0; k < n; ++k) r = poly_mul(r, l);
  return r;
}

// Here [a:b] labels the linear form aX + bY (its zero is [X:Y] = [-b:a]).
inline SubspaceBasis v_curve(const RP1Point& t, int n) {
  const HPoly l = linear_power(t.a, t.b, n);
  SubspaceBasis s;
  for (int j = 0; j < n; ++j) {
    HPoly m = HPoly::monomial(Basis::XY, n - 1, n - 1 - j);  // X^j Y^{n-1-j}
    s.polys.push_back(poly_mul(l, m));
  }
  return s;
}

// Action on the labels of linear forms, frozen after checking both
// candidates against v(g.t) = iota_bar(g) v(t): g acts through its entries,
// [a:b] -> [g11 a + g12 b : g21 a + g22 b].
inline RP1Point rp1_act(const SL2R& g, const RP1Point& t) {
  return RP1Point::make(g.a() * t.a + g.b() * t.b, g.c() * t.a + g.d() * t.b);
}

// The rejected candidate, kept so the calibration stays visible in tests.
inline RP1Point rp1_act_dual(const SL2R& g, const RP1Point& t) {
  const Mat2 m = g.m.inverse().transpose();
  return RP1Point::make(m(0, 0) * t.a + m(0, 1) * t.b, m(1, 0) * t.a + m(1, 1) * t.b);
}

struct KMembership {
  bool member = false;
  int mult = 0;
  bool ambiguous = false;  // the verdict flips somewhere in the 10x tolerance band
  RootReport roots;
};

inline KMembership in_K(const HPoly& p, const RootOptions& opt = {}) {
  const int n = p.n();
  KMembership k;
  k.roots = real_root_multiplicity(p, opt);
  k.mult = k.roots.max_real_mult;
  k.member = k.mult >= n;
  k.ambiguous = (k.roots.max_real_mult_lo >= n) != (k.roots.max_real_mult_hi >= n);
  return k;
}

// (aX+bY)^n Q with [a:b] uniform on the circle and Q Gaussian of degree n-1
// (complex coefficients for field C, real for field R).
inline std::vector<HPoly> sample_K(int n, int count, std::uint64_t seed, Field f = Field::C) {
  Rng rng(seed);
  std::vector<HPoly> out;
  out.reserve(std::max(count, 0));
  for (int s = 0; s < count; ++s) {
    const double th = rng.uniform(0.0, kPi);
    CVec q = f == Field::C ? rng.cgauss(n) : CVec(rng.rgauss(n).cast<cplx>());
    HPoly p = poly_mul(linear_power(std::cos(th), std::sin(th), n), HPoly(Basis::XY, q));
    out.push_back(p * (1.0 / p.norm()));
  }
  return out;
}

}  // namespace hgeo
