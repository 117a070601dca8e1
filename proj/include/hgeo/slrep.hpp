#pragma once
// SL(2,R) acting on binary forms by substitution, its Lie algebra element
// g0 = diag(-1,1), the circle actions and the matrix A relating the
// diagonal circle action phi' to the block rotation action phi.

#include <unsupported/Eigen/KroneckerProduct>

#include "hgeo/hpoly.hpp"

namespace hgeo {

using Mat2 = Eigen::Matrix2d;

struct SL2R {
  Mat2 m = Mat2::Identity();

  SL2R() = default;
  explicit SL2R(const Mat2& g, double tol = 1e-10) : m(g) {
    if (std::abs(g.determinant() - 1.0) > tol) throw DomainError("SL2R: determinant is not 1");
  }
  static SL2R from(double a, double b, double c, double d) {
    Mat2 g;
    g << a, b, c, d;
    return SL2R(g);
  }
  SL2R operator*(const SL2R& o) const { return SL2R(m * o.m, 1e-8); }
  SL2R inverse() const {
    Mat2 r;
    r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return SL2R(r, 1e-8);
  }
  double a() const { return m(0, 0); }
  double b() const { return m(0, 1); }
  double c() const { return m(1, 0); }
  double d() const { return m(1, 1); }
};

inline Mat2 rotation(double th) {
  Mat2 r;
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return r;
}

inline SL2R rotation_sl2(double th) { return SL2R(rotation(th)); }

// the one-parameter group generated by g0
inline SL2R g_t(double t) { return SL2R::from(std::exp(-t), 0.0, 0.0, std::exp(t)); }

// Random element k1 * diag(e^s, e^-s) * k2 with operator norm e^s <= max_norm.
inline SL2R random_sl2(Rng& rng, double max_norm = 5.0) {
  const double s = rng.uniform(0.0, std::log(max_norm));
  Mat2 dg;
  dg << std::exp(s), 0.0, 0.0, std::exp(-s);
  return SL2R(rotation(rng.uniform(0, 2 * kPi)) * dg * rotation(rng.uniform(0, 2 * kPi)), 1e-8);
}

// g.P(X,Y) = P(aX+bY, cX+dY) where g^{-1} = [[a,b],[c,d]]. Accepts any
// invertible matrix; the result stays in the input's basis.
inline HPoly act(const Mat2& g, const HPoly& p) {
  if (std::abs(g.determinant()) < 1e-14) throw DomainError("act: singular matrix");
  const Mat2 gi = g.inverse();
  const HPoly q = to_basis(p, Basis::XY);
  HPoly r(Basis::XY, substitute(q.coeffs(), gi(0, 0), gi(0, 1), gi(1, 0), gi(1, 1)));
  return to_basis(r, p.basis());
}

inline HPoly act(const SL2R& g, const HPoly& p) { return act(g.m, p); }

// Matrix of act(g, .) on XY coefficients, basis X^{2n-1}, X^{2n-2}Y, ..., Y^{2n-1}.
inline CMat sym_rep_matrix(const Mat2& g, int n) {
  const int d = 2 * n - 1;
  CMat m(d + 1, d + 1);
  for (int k = 0; k <= d; ++k) m.col(k) = act(g, HPoly::monomial(Basis::XY, d, k)).coeffs();
  return m;
}

inline CMat sym_rep_matrix(const SL2R& g, int n) { return sym_rep_matrix(g.m, n); }

// the dual representation g -> sym_rep_matrix((g^{-1})^T)
inline CMat iota_bar(const SL2R& g, int n) {
  return sym_rep_matrix(Mat2(g.m.inverse().transpose()), n);
}

// g0 . P = P_X X - P_Y Y, equivalently P_Z W + P_W Z; computed natively in
// either basis.
inline HPoly lie_act_g0(const HPoly& p) {
  const int d = p.degree();
  CVec out = CVec::Zero(d + 1);
  if (p.basis() == Basis::XY) {
    for (int k = 0; k <= d; ++k) out(k) = double(d - 2 * k) * p[k];
  } else {
    for (int k = 0; k <= d; ++k) {
      if (k + 1 <= d) out(k) += double(k + 1) * p[k + 1];
      if (k >= 1) out(k) += double(d - k + 1) * p[k - 1];
    }
  }
  return HPoly(p.basis(), out);
}

// Rotation R_theta acting through act(); in the (Z,W) frame it is diagonal
// with Z -> e^{i theta} Z, W -> e^{-i theta} W, so the coefficient of
// Z^k W^{d-k} picks up e^{i(2k-d) theta}. Returns ZW coefficients.
inline HPoly circle_act(double th, const HPoly& p0) {
  HPoly p = to_basis(p0, Basis::ZW);
  const int d = p.degree();
  for (int k = 0; k <= d; ++k) p.coeffs()(k) *= std::exp(kI * (double(2 * k - d) * th));
  return p;
}

struct RepMatrices {
  RMat L;      // n x n block rotation
  Mat2 R;      // 2 x 2 rotation
  CMat phi_prime;  // 2n x 2n diagonal
  RMat delta_L;    // identity
  Mat2 delta_R;

  // phi acting on (v,w) -> L (v,w) R^{-1}, written on the interleaved
  // vector (v1,w1,v2,w2,...): the Kronecker product L (x) R.
  CMat phi_embedded() const {
    return Eigen::kroneckerProduct(L, RMat(R)).eval().cast<cplx>();
  }
};

inline RepMatrices rep_matrices(double th, int n) {
  if (n < 1) throw DomainError("rep_matrices: n >= 1");
  RepMatrices r;
  r.L = RMat::Identity(n, n);
  for (int i = 1; i <= n / 2; ++i) r.L.block(2 * i - 2, 2 * i - 2, 2, 2) = rotation((2 * n + 2 - 4 * i) * th);
  r.R = rotation(th);
  r.phi_prime = CMat::Zero(2 * n, 2 * n);
  for (int k = 1; k <= 2 * n; ++k) r.phi_prime(k - 1, k - 1) = std::exp(kI * (double(2 * n + 1 - 2 * k) * th));
  r.delta_L = RMat::Identity(n, n);
  r.delta_R = rotation(th);
  return r;
}

// Block i sends (t_{2i-1}, t_{2i}, t_{2n-2i+1}, t_{2n-2i+2}) to
// (v_{2i-1}, w_{2i-1}, v_{2i}, w_{2i}); for odd n a final 2x2 block sends
// (t_n, t_{n+1}) to (v_n, w_n). Output is in interleaved order.
inline CMat basis_change_A(int n) {
  if (n < 1) throw DomainError("basis_change_A: n >= 1");
  CMat a = CMat::Zero(2 * n, 2 * n);
  Eigen::Matrix4cd blk;
  blk << 1.0, 1.0, 1.0, 1.0,
         -kI, kI, -kI, kI,
         -kI, -kI, kI, kI,
         -1.0, 1.0, 1.0, -1.0;
  blk *= 0.5;
  for (int i = 1; i <= n / 2; ++i) {
    const int cols[4] = {2 * i - 2, 2 * i - 1, 2 * n - 2 * i, 2 * n - 2 * i + 1};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) a(4 * i - 4 + r, cols[c]) = blk(r, c);
  }
  if (n % 2 == 1) {
    const double s = std::sqrt(0.5);
    a(2 * n - 2, n - 1) = s;
    a(2 * n - 2, n) = s;
    a(2 * n - 1, n - 1) = -kI * s;
    a(2 * n - 1, n) = kI * s;
  }
  return a;
}

// tau0(t) = (conj t_{2n}, ..., conj t_1)
inline CVec tau0(const CVec& t) { return t.reverse().conjugate(); }

}  // namespace hgeo
