#pragma once
// The uniformising Higgs bundle of rank 2n on the upper half plane in the
// holomorphic frame dz^{a_k}, a_k = (2n+1)/2 - k: metric H = diag(h^{m_k}),
// h = 1/(sqrt2 y), m_k = 2k-2n-1, Higgs field with constant subdiagonal r_k.
// Flat connection d + Az dz + Azbar dzbar with
//   Az = H^{-1} dH/dz + phi,   Azbar = phi^{*H} = H^{-1} phi^dagger H.

#include <boost/numeric/odeint.hpp>

#include "hgeo/exact.hpp"
#include "hgeo/stiefel.hpp"

namespace hgeo {

struct UHPoint {
  double x = 0.0, y = 1.0;

  UHPoint() = default;
  UHPoint(double x_, double y_) : x(x_), y(y_) {
    if (!(y_ > 0.0)) throw DomainError("UHPoint: y must be positive");
  }
  static UHPoint of(cplx z) { return UHPoint(z.real(), z.imag()); }
  cplx z() const { return {x, y}; }
};

inline double h_metric(double y) { return 1.0 / (std::sqrt(2.0) * y); }

struct HiggsData {
  int n = 1;
  std::vector<double> r;  // r_1 .. r_{2n-1}
  std::vector<double> m;  // m_1 .. m_{2n}

  static HiggsData fuchsian(int n) {
    if (n < 1) throw DomainError("HiggsData: n >= 1");
    HiggsData d;
    d.n = n;
    for (int i = 1; i <= 2 * n - 1; ++i) d.r.push_back(std::sqrt(i * (2.0 * n - i) / 2.0));
    for (int k = 1; k <= 2 * n; ++k) d.m.push_back(2.0 * k - 2.0 * n - 1.0);
    return d;
  }
  int rank() const { return 2 * n; }
  CMat phi() const {
    CMat p = CMat::Zero(rank(), rank());
    for (int i = 1; i < rank(); ++i) p(i, i - 1) = r[i - 1];
    return p;
  }
  // anti-diagonal ones
  CMat Q() const { return CMat::Identity(rank(), rank()).rowwise().reverse(); }
  RVec H(double y) const {
    RVec d(rank());
    for (int k = 0; k < rank(); ++k) d(k) = std::pow(h_metric(y), m[k]);
    return d;
  }
};

struct ConnSample {
  CMat Az, Azbar;
  UHPoint at;
};

// d/dz log h = i/(2y)
inline cplx dlogh(double y) { return kI / (2.0 * y); }

inline ConnSample conn_matrices(const HiggsData& d, const UHPoint& z) {
  const int N = d.rank();
  ConnSample c;
  c.at = z;
  c.Az = d.phi();
  for (int k = 0; k < N; ++k) c.Az(k, k) += d.m[k] * dlogh(z.y);
  const RVec H = d.H(z.y);
  c.Azbar = H.cwiseInverse().asDiagonal() * d.phi().adjoint() * H.asDiagonal();
  return c;
}

// A(gamma) applied to a tangent vector dz: Az dz + Azbar conj(dz)
inline CMat conn_along(const HiggsData& d, cplx z, cplx dz) {
  const ConnSample c = conn_matrices(d, UHPoint::of(z));
  return c.Az * dz + c.Azbar * std::conj(dz);
}

// max(|nabla_z s|, |nabla_zbar s|) for a section given in the holomorphic
// frame, derivatives by central differences in x and y
template <class Section>
double covariant_derivative_fd(const HiggsData& d, Section s, const UHPoint& z, double step = 1e-5) {
  const cplx z0 = z.z();
  const CVec sx = (s(z0 + step) - s(z0 - step)) / (2 * step);
  const CVec sy = (s(z0 + kI * step) - s(z0 - kI * step)) / (2 * step);
  const CVec dz = 0.5 * (sx - kI * sy), dzb = 0.5 * (sx + kI * sy);
  const ConnSample c = conn_matrices(d, z);
  const CVec v = s(z0);
  return std::max((dz + c.Az * v).norm(), (dzb + c.Azbar * v).norm());
}

// Real parallel sections for n = 1: ((a zbar + b) e^{-i pi/4} h, (a z + b) e^{i pi/4})
inline CVec step1_section(double a, double b, cplx z) {
  CVec s(2);
  s << (a * std::conj(z) + b) * std::exp(-kI * (kPi / 4)) * h_metric(z.imag()),
      (a * z + b) * std::exp(kI * (kPi / 4));
  return s;
}

// ---------------------------------------------------------------------------
// parallel transport by adaptive Dormand-Prince integration

struct OdeOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
};

// Solves dS/ds = -A(gamma(s))[gamma'(s)] S on s in [0,1], S(0) = Id.
// The result maps the fibre at gamma(0) to the fibre at gamma(1).
template <class Path, class Velocity>
CMat transport_along(const HiggsData& d, Path gamma, Velocity dgamma, const OdeOptions& o = {}) {
  namespace odeint = boost::numeric::odeint;
  const int N = d.rank();
  using State = std::vector<double>;
  State x(2 * N * N, 0.0);
  for (int k = 0; k < N; ++k) x[2 * (k * N + k)] = 1.0;
  auto rhs = [&](const State& s, State& ds, double t) {
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> S(
        reinterpret_cast<const cplx*>(s.data()), N, N);
    const CMat A = conn_along(d, gamma(t), dgamma(t));
    const CMat D = -A * S;
    Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        reinterpret_cast<cplx*>(ds.data()), N, N) = D;
  };
  odeint::integrate_adaptive(
      odeint::make_controlled(o.abs_tol, o.rel_tol, odeint::runge_kutta_dopri5<State>()), rhs, x, 0.0,
      1.0, 1e-3);
  CMat S(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) S(i, j) = cplx(x[2 * (i * N + j)], x[2 * (i * N + j) + 1]);
  return S;
}

// straight segment in the (x,y) chart
inline CMat transport_segment(const HiggsData& d, const UHPoint& from, const UHPoint& to,
                              const OdeOptions& o = {}) {
  const cplx a = from.z(), b = to.z();
  return transport_along(
      d, [&](double s) { return a + s * (b - a); }, [&](double) { return b - a; }, o);
}

inline CMat loop_holonomy(const HiggsData& d, const UHPoint& c, double radius, const OdeOptions& o = {}) {
  if (radius >= c.y) throw DomainError("loop_holonomy: loop leaves the half plane");
  const cplx z0 = c.z();
  return transport_along(
      d, [&](double s) { return z0 + radius * std::exp(kI * (2 * kPi * s)); },
      [&](double s) { return 2 * kPi * radius * kI * std::exp(kI * (2 * kPi * s)); }, o);
}

inline double flatness_residual(const HiggsData& d, const UHPoint& c, double radius, const OdeOptions& o = {}) {
  if (radius < 0.0) throw DomainError("flatness_residual: negative radius");
  if (radius == 0.0) return 0.0;
  const CMat hol = loop_holonomy(d, c, radius, o);
  return (hol - CMat::Identity(d.rank(), d.rank())).norm();
}

// ---------------------------------------------------------------------------
// Hitchin equation  c*s * d/dzbar (H^{-1} dH/dz) + [phi, phi^{*H}] = 0

struct HitchinConvention {
  int sign = -1;
  double factor = 1.0;
};

// Frozen result of calibrate_hitchin(); the test suite re-runs the calibration.
inline constexpr HitchinConvention kHitchinConvention{-1, 1.0};

// d/dzbar (H^{-1} dH/dz) = diag(m_k) d2/dzdzbar log h = diag(m_k) / (4 y^2)
inline CMat curvature_term(const HiggsData& d, const UHPoint& z) {
  CMat c = CMat::Zero(d.rank(), d.rank());
  for (int k = 0; k < d.rank(); ++k) c(k, k) = d.m[k] / (4.0 * z.y * z.y);
  return c;
}

// the same by central differences of log H
inline CMat curvature_term_fd(const HiggsData& d, const UHPoint& z, double step = 1e-4) {
  auto logH = [&](double x, double y) {
    RVec H = d.H(y);
    (void)x;
    return RVec(H.array().log());
  };
  // d2/dzdzbar = (1/4) Laplacian
  const RVec lap = (logH(z.x + step, z.y) + logH(z.x - step, z.y) + logH(z.x, z.y + step) +
                    logH(z.x, z.y - step) - 4.0 * logH(z.x, z.y)) /
                   (step * step);
  return CMat((0.25 * lap).cast<cplx>().asDiagonal());
}

inline CMat hitchin_matrix(const HiggsData& d, const UHPoint& z, const HitchinConvention& cv) {
  const ConnSample c = conn_matrices(d, z);
  const CMat phi = d.phi();
  return cv.factor * cv.sign * curvature_term(d, z) + (phi * c.Azbar - c.Azbar * phi);
}

inline double hitchin_residual(const HiggsData& d, const UHPoint& z,
                               const HitchinConvention& cv = kHitchinConvention) {
  return hitchin_matrix(d, z, cv).norm();
}

struct HitchinCalibration {
  HitchinConvention best;
  double best_residual = 0;
  double runner_up = 0;
  std::vector<std::pair<HitchinConvention, double>> table;
};

inline HitchinCalibration calibrate_hitchin(const HiggsData& d, const UHPoint& z) {
  HitchinCalibration cal;
  cal.best_residual = std::numeric_limits<double>::infinity();
  cal.runner_up = std::numeric_limits<double>::infinity();
  for (int s : {1, -1})
    for (double f : {0.25, 0.5, 1.0}) {
      const HitchinConvention cv{s, f};
      const double r = hitchin_residual(d, z, cv);
      cal.table.emplace_back(cv, r);
      if (r < cal.best_residual) {
        cal.runner_up = cal.best_residual;
        cal.best_residual = r;
        cal.best = cv;
      } else {
        cal.runner_up = std::min(cal.runner_up, r);
      }
    }
  return cal;
}

// ---------------------------------------------------------------------------
// real structure tau = H^{-1} Q conj(.):  tau(s)_k = h^{2n+1-2k} conj(s_{2n+1-k})

inline CVec real_structure_tau(const HiggsData& d, const UHPoint& z, const CVec& s) {
  if (s.size() != d.rank()) throw DomainError("real_structure_tau: size mismatch");
  const RVec Hi = d.H(z.y).cwiseInverse();
  return Hi.cast<cplx>().asDiagonal() * (d.Q() * s.conjugate());
}

// a point of E_R: s_k = h^{a_k} t_k with t_i = conj(t_{2n+1-i})
inline CVec real_point(const HiggsData& d, const UHPoint& z, const CVec& t) {
  const double h = h_metric(z.y);
  CVec s(d.rank());
  for (int k = 0; k < d.rank(); ++k) s(k) = std::pow(h, -d.m[k] / 2.0) * t(k);
  return s;
}

// ---------------------------------------------------------------------------
// transversality of the tautological section

struct JacobianReport {
  int dim = 0;
  double min_sv = 0;
  UHPoint z;
  CVec t;
  double reality_defect = 0;  // field R: distance of the derivative columns from Fix(tau0)
};

namespace detail {

// dF(v) for F(t) = sum t_{2j-1} conj(t_{2j})
inline cplx cone_prime_differential(const CVec& t, const CVec& v) {
  cplx s = 0.0;
  for (Eigen::Index j = 0; j + 1 < t.size(); j += 2)
    s += v(j) * std::conj(t(j + 1)) + t(j) * std::conj(v(j + 1));
  return s;
}

// orthonormal basis (columns) of the kernel of a real matrix
inline RMat real_kernel(const RMat& a, double thresh = 1e-10) {
  Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh * std::max(1.0, smax)) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

// orthonormal real basis of Fix(tau0) in C^{2n}
inline CMat fix_tau0_basis(int n) {
  const int N = 2 * n;
  CMat b = CMat::Zero(N, N);
  const double s = std::sqrt(0.5);
  for (int j = 0; j < n; ++j) {
    b(j, 2 * j) = s;
    b(N - 1 - j, 2 * j) = s;
    b(j, 2 * j + 1) = kI * s;
    b(N - 1 - j, 2 * j + 1) = -kI * s;
  }
  return b;
}

inline RVec realify_stack(const CVec& x) {
  RVec r(2 * x.size());
  r << x.real(), x.imag();
  return r;
}

}  // namespace detail

// Real linear map (a, v) -> a grad_z s + conj(a) grad_zbar s + v, written in
// the unitary coordinates t (s_k = h^{a_k} t_k) and multiplied by y, which
// removes all dependence on z for the uniformising data.
inline JacobianReport tautological_jacobian(const HiggsData& d, Field f, const UHPoint& z, const CVec& t0) {
  const int N = d.rank(), n = d.n;
  if (t0.size() != N) throw DomainError("tautological_jacobian: size mismatch");
  const double tn = t0.norm();
  if (tn == 0.0) throw DomainError("tautological_jacobian: zero vector");
  const CVec t = t0 / tn;
  const auto chk = in_cone_prime(t, f, 1e-10);
  if (!chk.member) throw DomainError("tautological_jacobian: t violates the cone equation");

  const ConnSample c = conn_matrices(d, z);
  const double h = h_metric(z.y);
  RVec a(N), S(N);
  for (int k = 0; k < N; ++k) {
    a(k) = -d.m[k] / 2.0;
    S(k) = std::pow(h, a(k));
  }
  const CMat Sd = S.cast<cplx>().asDiagonal(), Si = S.cwiseInverse().cast<cplx>().asDiagonal();
  CMat Dz = c.Az, Dzb = c.Azbar;
  for (int k = 0; k < N; ++k) {
    Dz(k, k) += a(k) * dlogh(z.y);
    Dzb(k, k) += a(k) * std::conj(dlogh(z.y));
  }
  const CVec gz = z.y * (Si * Dz * Sd * t);
  const CVec gzb = z.y * (Si * Dzb * Sd * t);
  const CVec col1 = gz + gzb;             // a = 1
  const CVec coli = kI * gz - kI * gzb;   // a = i

  JacobianReport r;
  r.z = z;
  r.t = t;
  if (f == Field::C) {
    RMat dF(2, 2 * N);
    for (int k = 0; k < N; ++k) {
      const cplx e1 = detail::cone_prime_differential(t, CVec::Unit(N, k));
      const cplx ei = detail::cone_prime_differential(t, kI * CVec::Unit(N, k));
      dF(0, k) = e1.real();
      dF(1, k) = e1.imag();
      dF(0, N + k) = ei.real();
      dF(1, N + k) = ei.imag();
    }
    const RMat K = detail::real_kernel(dF);
    RMat J(2 * N, 2 + K.cols());
    J.col(0) = detail::realify_stack(col1);
    J.col(1) = detail::realify_stack(coli);
    J.rightCols(K.cols()) = K;
    r.dim = static_cast<int>(J.rows());
    if (J.cols() != J.rows()) throw DomainError("tautological_jacobian: singular assembly");
    r.min_sv = Eigen::JacobiSVD<RMat>(J).singularValues().minCoeff();
    return r;
  }
  // field R: coordinates on Fix(tau0)
  const CMat B = detail::fix_tau0_basis(n);
  auto coords = [&](const CVec& x) { return RVec((B.adjoint() * x).real()); };
  auto defect = [&](const CVec& x) { return (x - B * coords(x).cast<cplx>()).norm(); };
  r.reality_defect = std::max(defect(col1), defect(coli));
  RMat dF(2, N);
  for (int k = 0; k < N; ++k) {
    const cplx e = detail::cone_prime_differential(t, B.col(k));
    dF(0, k) = e.real();
    dF(1, k) = e.imag();
  }
  const RMat K = detail::real_kernel(dF);
  RMat J(N, 2 + K.cols());
  J.col(0) = coords(col1);
  J.col(1) = coords(coli);
  J.rightCols(K.cols()) = K;
  r.dim = N;
  if (J.cols() != J.rows()) throw DomainError("tautological_jacobian: singular assembly");
  r.min_sv = Eigen::JacobiSVD<RMat>(J).singularValues().minCoeff();
  return r;
}

// random unit t on C'_K
inline CVec random_cone_prime(Rng& rng, int n, Field f) {
  const int N = 2 * n;
  for (;;) {
    CVec t = rng.cgauss(N);
    if (f == Field::R) {
      if (n == 1) throw DomainError("random_cone_prime: the real cone is {0} for n = 1");
      for (int k = n; k < N; ++k) t(k) = std::conj(t(N - 1 - k));
      // F(t) = 2 t_1 conj(t_2) + (terms free of t_2 and its mirror t_{2n-1});
      // solve for t_2 and restore the mirror.
      if (std::abs(t(0)) < 0.1) continue;
      CVec u = t;
      u(1) = 0.0;
      u(N - 2) = 0.0;
      const cplx s0 = cone_prime_form(u);
      u(1) = 1.0;
      u(N - 2) = 1.0;
      const cplx slope = cone_prime_form(u) - s0;
      t(1) = std::conj(-s0 / slope);
      t(N - 2) = std::conj(t(1));
    } else {
      if (std::abs(t(0)) < 0.1) continue;
      const cplx rest = cone_prime_form(t) - t(0) * std::conj(t(1));
      t(1) = std::conj(-rest / t(0));
    }
    const double nt = t.norm();
    t /= nt;
    if (in_cone_prime(t, f, 1e-12).member) return t;
  }
}

// ---------------------------------------------------------------------------
// 2 r_{2i-1} > r_{2i} + r_{2i-2}, with r_k^2 = k(2n-k)/2 and r_0 = r_{2n} = 0

struct SneReport {
  bool holds = true;
  bool identity = true;  // 4r_{2i-1}^2 - 2(r_{2i}^2 + r_{2i-2}^2) = 2 for every i
  std::vector<exact::Rel> rel;  // 4 r_{2i-1}^2 - (r_{2i}+r_{2i-2})^2 compared with 2
};

inline exact::Rational r_sq(int n, int k) {
  if (k <= 0 || k >= 2 * n) return 0;
  return exact::Rational(k * (2 * n - k), 2);
}

inline SneReport sne_inequality(int n) {
  using exact::Rational;
  SneReport r;
  for (int i = 1; i <= n; ++i) {
    const Rational A = r_sq(n, 2 * i - 1), B = r_sq(n, 2 * i), C = r_sq(n, 2 * i - 2);
    if (4 * A - 2 * (B + C) != 2) r.identity = false;
    // 4A - (sqrt B + sqrt C)^2 >= 2  <=>  sqrt(4A - 2) >= sqrt B + sqrt C;
    // compare the squares with the sign-tracking helper
    const Rational lhs = 4 * A - 2;
    exact::Rel rel;
    if (lhs < 0) {
      rel = exact::Rel::Less;
    } else {
      // x = sqrt(lhs) is not rational in general, so compare x^2 directly:
      // lhs vs B + C + 2 sqrt(BC)
      const Rational L = lhs - B - C;
      rel = L < 0 ? exact::Rel::Less : exact::compare(L * L, 4 * B * C);
    }
    r.rel.push_back(rel);
    if (rel == exact::Rel::Less) r.holds = false;
  }
  r.holds = r.holds && r.identity;
  return r;
}

// the raw integer identity 2(2i-1)(2n-2i+1) - 2i(2n-2i) - (2i-2)(2n-2i+2) = 2
inline bool sne_integer_identity(long n, long i) {
  return 2 * (2 * i - 1) * (2 * n - 2 * i + 1) - 2 * i * (2 * n - 2 * i) - (2 * i - 2) * (2 * n - 2 * i + 2) == 2;
}

}  // namespace hgeo
