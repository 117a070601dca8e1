#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgeo {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

enum class Field { R, C };

inline const char* field_name(Field f) { return f == Field::R ? "r" : "c"; }

// Thrown when an input is outside the domain of an operation.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// splitmix64 finalizer, used to derive independent per-task seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double normal() { return nd_(eng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  cplx cnormal() { return {normal(), normal()}; }

  CVec cgauss(int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = cnormal();
    return v;
  }
  RVec rgauss(int n) {
    RVec v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> nd_{0.0, 1.0};
};

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return std::round(r);
}

// Fubini-Study distance between the complex lines through a and b.
// Computed from the orthogonal component, which stays accurate near 0.
inline double fs_distance(const CVec& a, const CVec& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw DomainError("fs_distance: zero vector");
  const CVec ua = a / na, ub = b / nb;
  const cplx ip = ua.dot(ub);
  const double perp = (ub - ua * ip).norm();
  return std::atan2(perp, std::abs(ip));
}

// Largest principal angle between the column spans of two real matrices.
inline double max_principal_angle(const RMat& a, const RMat& b) {
  Eigen::HouseholderQR<RMat> qa(a), qb(b);
  const RMat Qa = qa.householderQ() * RMat::Identity(a.rows(), a.cols());
  const RMat Qb = qb.householderQ() * RMat::Identity(b.rows(), b.cols());
  // sin of the largest angle = norm of the part of span(b) outside span(a)
  const RMat resid = Qb - Qa * (Qa.transpose() * Qb);
  Eigen::JacobiSVD<RMat> svd(resid);
  const double s = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return std::asin(std::min(1.0, s));
}

// Complex subspaces are compared as real subspaces of twice the dimension.
inline RMat realify_columns(const CMat& m) {
  RMat r(2 * m.rows(), 2 * m.cols());
  r.topLeftCorner(m.rows(), m.cols()) = m.real();
  r.bottomLeftCorner(m.rows(), m.cols()) = m.imag();
  r.topRightCorner(m.rows(), m.cols()) = -m.imag();
  r.bottomRightCorner(m.rows(), m.cols()) = m.real();
  return r;
}

inline double max_principal_angle(const CMat& a, const CMat& b) {
  return max_principal_angle(realify_columns(a), realify_columns(b));
}

// Points of P(K^m): unit norm, the first entry of (near-)largest modulus
// rotated to the positive real axis.
struct ProjClass {
  CVec rep;

  static ProjClass of(const CVec& x) {
    const double nx = x.norm();
    if (nx == 0.0) throw DomainError("ProjClass: zero vector");
    CVec u = x / nx;
    const double mx = u.cwiseAbs().maxCoeff();
    Eigen::Index k = 0;
    while (std::abs(u(k)) < mx * (1.0 - 1e-9)) ++k;
    u *= std::conj(u(k)) / std::abs(u(k));
    return {u};
  }
  double distance(const ProjClass& o) const { return fs_distance(rep, o.rep); }
};

// Points of the sphere S(K^m) = (K^m - 0)/R_{>0}.
struct SphereClass {
  CVec rep;

  static SphereClass of(const CVec& x) {
    const double nx = x.norm();
    if (nx == 0.0) throw DomainError("SphereClass: zero vector");
    return {x / nx};
  }
  double distance(const SphereClass& o) const { return (rep - o.rep).norm(); }
};

}  // namespace hgeo
