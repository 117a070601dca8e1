#pragma once
// Orthonormal 2-frames (v,w) as points of the cones
//   C_C = {Re<v,w> = 0, |v| = |w|},  C_R = {<v,w> = 0, |v| = |w|},
// the cone C' = {sum t_{2j-1} conj(t_{2j}) = 0} in the t-coordinates, group
// actions, the fibration map h(A) = Re(conj(A)^T A), and projections.

#include "hgeo/slrep.hpp"

namespace hgeo {

struct StiefelPoint {
  Field field = Field::C;
  int n = 1;
  CVec v, w;

  // (v1,w1,v2,w2,...) -> (v,w)
  static StiefelPoint from_interleaved(const CVec& x, Field f) {
    if (x.size() % 2) throw DomainError("StiefelPoint: odd length");
    StiefelPoint p;
    p.field = f;
    p.n = static_cast<int>(x.size() / 2);
    p.v.resize(p.n);
    p.w.resize(p.n);
    for (int j = 0; j < p.n; ++j) {
      p.v(j) = x(2 * j);
      p.w(j) = x(2 * j + 1);
    }
    return p;
  }
  CVec interleaved() const {
    CVec x(2 * n);
    for (int j = 0; j < n; ++j) {
      x(2 * j) = v(j);
      x(2 * j + 1) = w(j);
    }
    return x;
  }
  CMat as_matrix() const {
    CMat m(n, 2);
    m.col(0) = v;
    m.col(1) = w;
    return m;
  }
};

struct ConeCheck {
  bool member = false;
  double re_ip = 0, norm_diff = 0, im_ip = 0, imag_part = 0;
  double worst() const { return std::max({re_ip, norm_diff, im_ip, imag_part}); }
};

// Residuals are reported relative to |v|^2 + |w|^2.
inline ConeCheck in_cone(const StiefelPoint& p, double tol = 1e-9) {
  const double s = p.v.squaredNorm() + p.w.squaredNorm();
  if (s == 0.0) return {true, 0, 0, 0, 0};
  const cplx ip = p.v.dot(p.w);  // conj(v)^T w
  ConeCheck c;
  c.re_ip = std::abs(ip.real()) / s;
  c.norm_diff = std::abs(p.v.squaredNorm() - p.w.squaredNorm()) / s;
  if (p.field == Field::R) {
    c.im_ip = std::abs(ip.imag()) / s;
    c.imag_part = std::sqrt((p.v.imag().squaredNorm() + p.w.imag().squaredNorm()) / s);
  }
  c.member = c.worst() <= tol;
  return c;
}

struct ConePrimeCheck {
  bool member = false;
  double residual = 0;     // |sum t_{2j-1} conj(t_{2j})| / |t|^2
  double tau_residual = 0; // |t - tau0(t)| / |t|, field R only
};

inline cplx cone_prime_form(const CVec& t) {
  cplx s = 0.0;
  for (Eigen::Index j = 0; j + 1 < t.size(); j += 2) s += t(j) * std::conj(t(j + 1));
  return s;
}

inline ConePrimeCheck in_cone_prime(const CVec& t, Field f, double tol = 1e-9) {
  if (t.size() % 2) throw DomainError("in_cone_prime: odd length");
  const double s = t.squaredNorm();
  ConePrimeCheck c;
  if (s == 0.0) {
    c.member = true;
    return c;
  }
  c.residual = std::abs(cone_prime_form(t)) / s;
  if (f == Field::R) c.tau_residual = (t - tau0(t)).norm() / std::sqrt(s);
  c.member = c.residual <= tol && c.tau_residual <= tol;
  return c;
}

inline bool is_unitary(const CMat& a, double tol = 1e-8) {
  return (a.adjoint() * a - CMat::Identity(a.cols(), a.cols())).cwiseAbs().maxCoeff() <= tol;
}

// (v,w) -> A (v,w) B^{-1}
inline StiefelPoint act_group(const StiefelPoint& p, const CMat& A, const Mat2& B) {
  if (A.rows() != p.n || A.cols() != p.n) throw DomainError("act_group: size mismatch");
  if (!is_unitary(A)) throw DomainError("act_group: A is not unitary");
  if (p.field == Field::R && A.imag().cwiseAbs().maxCoeff() > 1e-8)
    throw DomainError("act_group: A is not real orthogonal");
  if ((B.transpose() * B - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-8)
    throw DomainError("act_group: B is not orthogonal");
  const CMat m = A * p.as_matrix() * Mat2(B.inverse()).cast<cplx>();
  StiefelPoint r = p;
  r.v = m.col(0);
  r.w = m.col(1);
  return r;
}

// Haar-distributed unitary (field C) or orthogonal (field R) matrix
inline CMat random_unitary(Rng& rng, int n, Field f) {
  CMat g(n, n);
  for (int j = 0; j < n; ++j) g.col(j) = f == Field::C ? rng.cgauss(n) : CVec(rng.rgauss(n).cast<cplx>());
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(n, n);
  const CMat r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

// random (v, w) in C_K with |v| = |w| = 1
inline StiefelPoint random_cone_point(Rng& rng, int n, Field f) {
  if (f == Field::R && n < 2) throw DomainError("random_cone_point: C_R needs n >= 2");
  for (;;) {
    CVec v = f == Field::C ? rng.cgauss(n) : CVec(rng.rgauss(n).cast<cplx>());
    CVec w = f == Field::C ? rng.cgauss(n) : CVec(rng.rgauss(n).cast<cplx>());
    const double nv = v.norm();
    if (nv < 1e-3) continue;
    v /= nv;
    const cplx ip = v.dot(w);
    w -= (f == Field::C ? cplx(ip.real()) : ip) * v;
    const double nw = w.norm();
    if (nw < 1e-3) continue;
    StiefelPoint p;
    p.field = f;
    p.n = n;
    p.v = v;
    p.w = w / nw;
    return p;
  }
}

// f(v,w) = Im<v,w> / (|v||w|), invariant under U(n)
inline double invariant_f(const CVec& v, const CVec& w) {
  return v.dot(w).imag() / (v.norm() * w.norm());
}

struct DiagFiber {
  Mat2 h;
  bool positive_definite = false;
  double min_eig = 0;
};

// h(A) = Re(conj(A)^T A) for an n x 2 matrix A. Rank is decided on the
// singular values of A viewed as a real 2-frame, relative threshold 1e-8.
inline DiagFiber diag_fiber_map(const CMat& a) {
  if (a.cols() != 2) throw DomainError("diag_fiber_map: need n x 2");
  DiagFiber r;
  r.h = (a.adjoint() * a).real();
  r.h = 0.5 * (r.h + r.h.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat2> es(r.h);
  r.min_eig = es.eigenvalues()(0);
  const double mx = es.eigenvalues()(1);
  r.positive_definite = mx > 0.0 && std::sqrt(std::max(0.0, r.min_eig) / mx) > 1e-8;
  return r;
}

// ---------------------------------------------------------------------------
// projections

// An ordered orthonormal pair in R^m; complex vectors are read as real
// vectors through (Re z_1..Re z_n, Im z_1..Im z_n).
struct OrientedPlane {
  RVec e1, e2;
  int orientation = 1;

  RMat basis() const {
    RMat m(e1.size(), 2);
    m.col(0) = e1;
    m.col(1) = e2;
    return m;
  }
  // max principal angle, plus whether the two orientations agree
  double angle_to(const OrientedPlane& o) const { return max_principal_angle(basis(), o.basis()); }
  bool same_orientation(const OrientedPlane& o) const {
    Mat2 g;
    g << e1.dot(o.e1), e1.dot(o.e2), e2.dot(o.e1), e2.dot(o.e2);
    return g.determinant() > 0.0;
  }
};

inline RVec realify(const CVec& x, Field f) {
  if (f == Field::R) return x.real();
  RVec r(2 * x.size());
  r << x.real(), x.imag();
  return r;
}

inline OrientedPlane oriented_span(const CVec& v, const CVec& w, Field f) {
  const RVec a = realify(v, f), b = realify(w, f);
  const double na = a.norm();
  if (na == 0.0) throw DomainError("oriented_span: rank deficient");
  OrientedPlane p;
  p.e1 = a / na;
  const double r12 = p.e1.dot(b);
  RVec bp = b - r12 * p.e1;
  const double r22 = bp.norm();
  if (r22 <= 1e-8 * std::max(na, b.norm())) throw DomainError("oriented_span: rank deficient");
  p.e2 = bp / r22;
  // change of basis (v,w) -> (e1,e2) is upper triangular [[na, r12],[0, r22]]
  p.orientation = (na * r22 > 0.0) ? 1 : -1;
  return p;
}

struct Projections {
  OrientedPlane plane;
  ProjClass base_point;
};

inline Projections projections(const StiefelPoint& p) {
  return {oriented_span(p.v, p.w, p.field), ProjClass::of(p.v)};
}

// U(1) acting on a plane of C^n = R^{2n} through multiplication by e^{i theta}.
inline OrientedPlane u1_rotate(const OrientedPlane& pl, double th) {
  const Eigen::Index n = pl.e1.size() / 2;
  auto rot = [&](const RVec& x) {
    const CVec z = (x.head(n).cast<cplx>() + kI * x.tail(n).cast<cplx>()) * std::exp(kI * th);
    RVec r(2 * n);
    r << z.real(), z.imag();
    return r;
  };
  return {rot(pl.e1), rot(pl.e2), pl.orientation};
}

}  // namespace hgeo
