#pragma once
// The form q_lam(P,Q) = 1/2 sum lam_k (p_{2k} conj(q_{2k+1}) + q_{2k} conj(p_{2k+1}))
// on ZW coefficients, its null cone C^lam, transversality to g0 and the
// check that C^lam stays away from K.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hgeo/dod.hpp"
#include "hgeo/exact.hpp"

namespace hgeo {

class Lambda {
 public:
  explicit Lambda(std::vector<double> v) : v_(std::move(v)) {
    const int n = size();
    if (n < 1) throw DomainError("Lambda: empty");
    for (int k = 0; k < n; ++k) {
      if (!(v_[k] > 0.0)) throw DomainError("Lambda: entries must be positive");
      if (std::abs(v_[k] - v_[n - 1 - k]) > 1e-12 * std::max(v_[k], v_[n - 1 - k]))
        throw DomainError("Lambda: not palindromic");
    }
  }
  int size() const { return static_cast<int>(v_.size()); }
  double operator[](int k) const { return v_[k]; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> v_;
};

// lam_k = (C(2n-1,2k) C(2n-1,2k+1))^{-1/2}; the product is an exact integer,
// its square root is taken in 50-digit floating point.
inline Lambda default_lambda(int n) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  if (n < 1) throw DomainError("default_lambda: n >= 1");
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) {
    const exact::Int prod = exact::binom(2 * n - 1, 2 * k) * exact::binom(2 * n - 1, 2 * k + 1);
    const Big s = 1 / boost::multiprecision::sqrt(Big(prod));
    v[k] = s.convert_to<double>();
  }
  return Lambda(v);
}

inline cplx q_lambda(const Lambda& lam, const HPoly& P0, const HPoly& Q0) {
  const HPoly P = to_basis(P0, Basis::ZW), Q = to_basis(Q0, Basis::ZW);
  if (P.degree() != Q.degree() || P.n() != lam.size()) throw DomainError("q_lambda: size mismatch");
  cplx s = 0.0;
  for (int k = 0; k < lam.size(); ++k)
    s += lam[k] * (P[2 * k] * std::conj(Q[2 * k + 1]) + Q[2 * k] * std::conj(P[2 * k + 1]));
  return 0.5 * s;
}

// Re q(P, g0 P) without normalisation
inline double transversality_form(const Lambda& lam, const HPoly& P) {
  const HPoly z = to_basis(P, Basis::ZW);
  return q_lambda(lam, z, lie_act_g0(z)).real();
}

// Same value for real P from the expanded expression
//   sum lam_k ((2n-2k-1)|p_{2k}|^2 + (2k+2) p_{2k} conj(p_{2k+2}))
inline cplx transversality_form_real(const Lambda& lam, const HPoly& P0) {
  const HPoly P = to_basis(P0, Basis::ZW);
  const int n = P.n();
  cplx s = 0.0;
  for (int k = 0; k < n; ++k) {
    s += lam[k] * double(2 * n - 2 * k - 1) * std::norm(P[2 * k]);
    if (2 * k + 2 <= 2 * n - 1) s += lam[k] * double(2 * k + 2) * P[2 * k] * std::conj(P[2 * k + 2]);
  }
  return s;
}

inline double transversality_margin(const Lambda& lam, const HPoly& P0) {
  const HPoly P = to_basis(P0, Basis::ZW);
  const double nrm = P.norm();
  if (nrm == 0.0) throw DomainError("transversality_margin: zero polynomial");
  return transversality_form(lam, P * (1.0 / nrm));
}

// Smallest value of Re q(P, g0 P) over unit ZW coefficient vectors: the
// lowest eigenvalue of the real quadratic form on R^{4n}.
inline double transversality_min_eigenvalue(const Lambda& lam) {
  const int n = lam.size(), D = 4 * n;
  auto f = [&](const RVec& x) {
    CVec c(2 * n);
    for (int j = 0; j < 2 * n; ++j) c(j) = cplx(x(j), x(2 * n + j));
    return transversality_form(lam, HPoly(Basis::ZW, c));
  };
  RMat M(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      const RVec ei = RVec::Unit(D, i), ej = RVec::Unit(D, j);
      M(i, j) = 0.5 * (f(ei + ej) - f(ei) - f(ej));
    }
  M = 0.5 * (M + M.transpose()).eval();
  return Eigen::SelfAdjointEigenSolver<RMat>(M).eigenvalues()(0);
}

// ---------------------------------------------------------------------------
// exact certificate for the canonical lambda

struct ExactTransverseReport {
  int n = 0;
  // per k = 0..n-1: 2(2n-1-2k)^2 - (b_k^2 + c_k^2) (closed form 2(2n-2k-1)/(2k+1))
  std::vector<exact::Rational> per_k_gap;
  bool gap_identity = true;
  // per k: (2n-2k-1) compared with (b_k + c_k)/2
  std::vector<exact::Rel> per_k;
  // per k = 0..n-2: lam_{k+1}^2/lam_k^2 compared with (2k+2)^4/(b_{k+1}^2 c_k^2)
  std::vector<exact::Rel> ratio;
  bool per_k_holds = true;         // all Greater or Equal
  bool per_k_strict = true;        // all Greater
  bool ratio_strict = true;        // all Greater
  bool ratio_weak = true;          // all Greater or Equal
  // Strict per_k together with ratio as a non-strict inequality already forces
  // Re q(P, g0 P) > 0 for real P != 0, hence for all P.
  bool certificate() const { return per_k_strict && gap_identity && ratio_weak; }
};

inline exact::Rational b_sq(int n, int k) {
  return exact::Rational(exact::Int((2 * n - 2 * k - 1) * (2 * n - 2 * k) * 2 * k), exact::Int(2 * k + 1));
}
inline exact::Rational c_sq(int n, int k) {
  return exact::Rational(exact::Int((2 * n - 2 * k - 2) * (2 * n - 2 * k - 1) * (2 * k + 2)),
                         exact::Int(2 * k + 1));
}
inline exact::Rational lambda_sq(int n, int k) {
  return exact::Rational(exact::Int(1),
                         exact::binom(2 * n - 1, 2 * k) * exact::binom(2 * n - 1, 2 * k + 1));
}

inline ExactTransverseReport certify_transverse_exact(int n) {
  using exact::Rational;
  using exact::Rel;
  ExactTransverseReport r;
  r.n = n;
  for (int k = 0; k < n; ++k) {
    const Rational B = b_sq(n, k), C = c_sq(n, k);
    const Rational m(2 * n - 2 * k - 1);
    const Rational gap = 2 * m * m - (B + C);
    r.per_k_gap.push_back(gap);
    if (gap != Rational(2 * (2 * n - 2 * k - 1), 2 * k + 1)) r.gap_identity = false;
    const Rel e1 = exact::compare_with_sqrt_sum(2 * m, B, C);
    r.per_k.push_back(e1);
    if (e1 == Rel::Less) r.per_k_holds = false;
    if (e1 != Rel::Greater) r.per_k_strict = false;
  }
  for (int k = 0; k + 1 < n; ++k) {
    const Rational lhs = lambda_sq(n, k + 1) / lambda_sq(n, k);
    const Rational rhs = Rational(exact::Int(2 * k + 2) * (2 * k + 2) * (2 * k + 2) * (2 * k + 2)) /
                         (b_sq(n, k + 1) * c_sq(n, k));
    const Rel e2 = exact::compare(lhs, rhs);
    r.ratio.push_back(e2);
    if (e2 != Rel::Greater) r.ratio_strict = false;
    if (e2 == Rel::Less) r.ratio_weak = false;
  }
  return r;
}

struct TransverseReport {
  ExactTransverseReport exact;
  int samples = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  HPoly argmin;
  double min_eigenvalue = 0;  // exact lower bound over unit P
  bool pass() const { return exact.certificate() && (samples == 0 || min_margin > 0.0); }
};

inline HPoly random_unit_zw(Rng& rng, int n) {
  CVec c = rng.cgauss(2 * n);
  return HPoly(Basis::ZW, c / c.norm());
}

// Statistical part of the certificate: random unit P, minimum margin and
// its witness. The exact part is attached only for the canonical lambda.
inline TransverseReport certify_transverse(const Lambda& lam, int n, int samples, std::uint64_t seed,
                                           bool with_exact = true) {
  TransverseReport r;
  if (with_exact) r.exact = certify_transverse_exact(n);
  r.samples = samples;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const HPoly P = random_unit_zw(rng, n);
    const double m = transversality_margin(lam, P);
    if (m < r.min_margin) {
      r.min_margin = m;
      r.argmin = P;
    }
  }
  r.min_eigenvalue = transversality_min_eigenvalue(lam);
  return r;
}

// ---------------------------------------------------------------------------
// the null cone C^lam

inline cplx q_self(const Lambda& lam, const CVec& p) {
  cplx s = 0.0;
  for (int k = 0; k < lam.size(); ++k) s += lam[k] * p(2 * k) * std::conj(p(2 * k + 1));
  return s;
}

// Gaussian coefficients, then one coordinate is solved from q(P,P) = 0.
// The pivot alternates at random between p1 (needs |p0| >= 0.1) and p0
// (needs |p1| >= 0.1); for n = 2 and field R the two pivots land on the
// two components {p1 = 0} and {p0 = 0} of the real cone.
inline std::vector<HPoly> sample_C_lambda(const Lambda& lam, int n, Field f, int count, std::uint64_t seed) {
  if (lam.size() != n) throw DomainError("sample_C_lambda: size mismatch");
  if (f == Field::R && n == 1) throw DomainError("sample_C_lambda: the real cone is {0} for n = 1");
  Rng rng(seed);
  const int D = 2 * n;
  auto realize = [&](CVec& p) {
    if (f == Field::R)
      for (int k = n; k < D; ++k) p(k) = std::conj(p(D - 1 - k));
  };
  std::vector<HPoly> out;
  while (static_cast<int>(out.size()) < count) {
    CVec p = rng.cgauss(D);
    realize(p);
    const bool pivot1 = rng.uniform(0.0, 1.0) < 0.5;
    const int piv = pivot1 ? 1 : 0, other = pivot1 ? 0 : 1;
    if (std::abs(p(other)) < 0.1) continue;
    // q is affine in conj(p1) (pivot 1) or in p0 (pivot 0) once the other
    // coordinates are fixed, in both fields
    auto with = [&](cplx x) {
      CVec c = p;
      c(piv) = x;
      realize(c);
      return q_self(lam, c);
    };
    const cplx s0 = with(0.0), slope = with(1.0) - s0;
    if (std::abs(slope) == 0.0) continue;
    const cplx x = pivot1 ? std::conj(-s0 / slope) : -s0 / slope;
    p(piv) = x;
    realize(p);
    if (std::abs(q_self(lam, p)) > 1e-12 * p.squaredNorm()) continue;
    out.emplace_back(Basis::ZW, p / p.norm());
  }
  return out;
}

struct FlowReport {
  bool monotone = true;
  bool sign_ok = true;
  double f0 = 0;
  double min_fprime = std::numeric_limits<double>::infinity();
  double max_fd_rel_err = 0;
  bool pass() const { return monotone && sign_ok && min_fprime > 0.0 && max_fd_rel_err <= 1e-6; }
};

inline FlowReport flow_monotone(const Lambda& lam, const HPoly& P0, const std::vector<double>& grid) {
  const HPoly P = to_basis(P0, Basis::ZW);
  if (std::abs(q_lambda(lam, P, P)) > 1e-8 * P.coeffs().squaredNorm())
    throw DomainError("flow_monotone: P is not on the null cone");
  auto moved = [&](double t) { return act(g_t(t), P); };
  auto f = [&](double t) {
    const HPoly q = moved(t);
    return q_lambda(lam, q, q).real();
  };
  auto fp = [&](double t) {
    const HPoly q = moved(t);
    return 2.0 * q_lambda(lam, q, lie_act_g0(q)).real();
  };
  FlowReport r;
  r.f0 = f(0.0);
  double prev = -std::numeric_limits<double>::infinity();
  const double scale = P.coeffs().squaredNorm();
  for (double t : grid) {
    const double ft = f(t);
    if (!(ft > prev)) r.monotone = false;
    prev = ft;
    if (std::abs(t) > 1e-12) {
      if (t < 0 && !(ft < 0)) r.sign_ok = false;
      if (t > 0 && !(ft > 0)) r.sign_ok = false;
    }
    const double d = fp(t);
    r.min_fprime = std::min(r.min_fprime, d / scale);
    const double h = 1e-5;
    const double fd = (f(t + h) - f(t - h)) / (2 * h);
    r.max_fd_rel_err = std::max(r.max_fd_rel_err, std::abs(fd - d) / std::abs(d));
  }
  return r;
}

struct NonIntersectReport {
  int samples = 0;
  int members = 0;
  int ambiguous = 0;        // verdict-relevant ambiguity
  int root_ambiguous = 0;   // any root decision inside the tolerance band
  int min_mult_gap = std::numeric_limits<int>::max();  // min of n - max_real_mult
  double worst_gap = 1.0;   // smallest cluster separation seen
  HPoly witness;            // sample realising min_mult_gap
  bool pass(double allowed_fraction = 0.0) const {
    return members == 0 && ambiguous <= allowed_fraction * samples;
  }
};

inline void merge(NonIntersectReport& a, const NonIntersectReport& b) {
  a.samples += b.samples;
  a.members += b.members;
  a.ambiguous += b.ambiguous;
  a.root_ambiguous += b.root_ambiguous;
  if (b.min_mult_gap < a.min_mult_gap) {
    a.min_mult_gap = b.min_mult_gap;
    a.witness = b.witness;
  }
  a.worst_gap = std::min(a.worst_gap, b.worst_gap);
}

inline NonIntersectReport nonintersect_check(const Lambda& lam, int n, Field f, int samples,
                                             std::uint64_t seed, const RootOptions& opt = {}) {
  NonIntersectReport r;
  for (const HPoly& P : sample_C_lambda(lam, n, f, samples, seed)) {
    const KMembership k = in_K(P, opt);
    ++r.samples;
    r.members += k.member;
    r.ambiguous += k.ambiguous;
    r.root_ambiguous += k.roots.ambiguous;
    if (n - k.mult < r.min_mult_gap) {
      r.min_mult_gap = n - k.mult;
      r.witness = P;
    }
    for (auto& c : k.roots.clusters) r.worst_gap = std::min(r.worst_gap, c.gap);
  }
  return r;
}

// class of g.P (XY coefficients)
inline ProjClass phi_map(const SL2R& g, const HPoly& P) {
  return ProjClass::of(to_basis(act(g, P), Basis::XY).coeffs());
}

// |q(P, g0 P)| > 0 certifies that g0 is not tangent to the cone at P
inline double phi_local_injectivity_witness(const Lambda& lam, const HPoly& P) {
  const HPoly z = to_basis(P, Basis::ZW);
  return std::abs(q_lambda(lam, z, lie_act_g0(z))) / z.coeffs().squaredNorm();
}

}  // namespace hgeo
