#pragma once
// Homogeneous polynomials in two variables, in the real frame (X,Y) or the
// isotropic frame (Z,W) with W = (X+iY)/2, Z = (X-iY)/2.

#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>

#include "hgeo/common.hpp"

namespace hgeo {

enum class Basis { XY, ZW };

// Coefficient k multiplies X^{d-k} Y^k (XY) or Z^k W^{d-k} (ZW).
// Both are "first^{d-k} second^k" with (first, second) = (X, Y) or (W, Z),
// which is what makes products and substitutions basis-agnostic below.
class HPoly {
 public:
  HPoly() = default;
  HPoly(Basis basis, CVec coeffs) : basis_(basis), c_(std::move(coeffs)) {
    if (c_.size() < 1) throw DomainError("HPoly: need at least one coefficient");
  }

  static HPoly zero(Basis basis, int degree) {
    return HPoly(basis, CVec::Zero(degree + 1));
  }
  static HPoly monomial(Basis basis, int degree, int k, cplx c = 1.0) {
    HPoly p = zero(basis, degree);
    p.c_(k) = c;
    return p;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  // half-rank n for odd degree 2n-1
  int n() const {
    if (degree() % 2 == 0) throw DomainError("HPoly: even degree has no half-rank");
    return (degree() + 1) / 2;
  }
  Basis basis() const { return basis_; }
  const CVec& coeffs() const { return c_; }
  CVec& coeffs() { return c_; }
  cplx operator[](int k) const { return c_(k); }

  double norm() const { return c_.norm(); }
  bool is_zero() const { return c_.cwiseAbs().maxCoeff() == 0.0; }

  HPoly operator+(const HPoly& o) const {
    check_same(o);
    return HPoly(basis_, c_ + o.c_);
  }
  HPoly operator-(const HPoly& o) const {
    check_same(o);
    return HPoly(basis_, c_ - o.c_);
  }
  HPoly operator*(cplx s) const { return HPoly(basis_, c_ * s); }

  void check_same(const HPoly& o) const {
    if (o.basis_ != basis_) throw DomainError("HPoly: basis mismatch");
    if (o.c_.size() != c_.size()) throw DomainError("HPoly: degree mismatch");
  }

 private:
  Basis basis_ = Basis::XY;
  CVec c_;
};

namespace detail {

inline CVec conv(const CVec& a, const CVec& b) {
  CVec r = CVec::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) r(i + j) += a(i) * b(j);
  return r;
}

}  // namespace detail

// Linear change of variables. Input coefficients c_k of U^{d-k} V^k; returns
// the coefficients of A^{d-j} B^j after U -> a A + b B, V -> g A + h B.
inline CVec substitute(const CVec& c, cplx a, cplx b, cplx g, cplx h) {
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<CVec> pu(d + 1), pv(d + 1);
  pu[0] = CVec::Ones(1);
  pv[0] = CVec::Ones(1);
  CVec lu(2), lv(2);
  lu << a, b;
  lv << g, h;
  for (int k = 1; k <= d; ++k) {
    pu[k] = detail::conv(pu[k - 1], lu);
    pv[k] = detail::conv(pv[k - 1], lv);
  }
  CVec out = CVec::Zero(d + 1);
  for (int k = 0; k <= d; ++k) {
    if (c(k) == 0.0) continue;
    out += c(k) * detail::conv(pu[d - k], pv[k]);
  }
  return out;
}

inline HPoly to_basis(const HPoly& p, Basis target) {
  if (p.basis() == target) return p;
  if (target == Basis::ZW) {
    // X = W + Z, Y = -iW + iZ  (first = W, second = Z)
    return HPoly(Basis::ZW, substitute(p.coeffs(), 1.0, 1.0, -kI, kI));
  }
  // W = X/2 + iY/2, Z = X/2 - iY/2
  return HPoly(Basis::XY, substitute(p.coeffs(), 0.5, 0.5 * kI, 0.5, -0.5 * kI));
}

// Value at (x, y) read in the polynomial's own variables: (X,Y) or (Z,W).
inline cplx evaluate(const HPoly& p, cplx x, cplx y) {
  const int d = p.degree();
  // first/second variable values
  const cplx f = p.basis() == Basis::XY ? x : y;
  const cplx s = p.basis() == Basis::XY ? y : x;
  cplx acc = 0.0;
  for (int k = 0; k <= d; ++k) acc += p[k] * std::pow(f, d - k) * std::pow(s, k);
  return acc;
}

inline HPoly poly_mul(const HPoly& p, const HPoly& q) {
  if (p.basis() != q.basis()) throw DomainError("poly_mul: basis mismatch");
  return HPoly(p.basis(), detail::conv(p.coeffs(), q.coeffs()));
}

// Bombieri norm; invariant under unitary changes of variables.
inline double bombieri_norm(const CVec& c) {
  const int d = static_cast<int>(c.size()) - 1;
  double s = 0.0;
  for (int k = 0; k <= d; ++k) s += std::norm(c(k)) / binom(d, k);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Real projective line and roots

// [a:b] with a^2+b^2 = 1 and the first nonzero entry positive.
struct RP1Point {
  double a = 1.0, b = 0.0;

  static RP1Point make(double a, double b) {
    const double r = std::hypot(a, b);
    if (r == 0.0) throw DomainError("RP1Point: zero vector");
    a /= r;
    b /= r;
    if (a < 0.0 || (a == 0.0 && b < 0.0)) {
      a = -a;
      b = -b;
    }
    return {a, b};
  }
  // the point [x : 1], or [1 : 0] for infinite x
  static RP1Point affine(double x) {
    if (std::isinf(x)) return {1.0, 0.0};
    return make(x, 1.0);
  }
  bool is_infinite(double tol = 0.0) const { return std::abs(b) <= tol; }
  double value() const {
    return b == 0.0 ? std::numeric_limits<double>::infinity() : a / b;
  }
  // chordal distance
  double distance(const RP1Point& o) const { return std::abs(a * o.b - b * o.a); }
};

using CP1 = Eigen::Vector2cd;

// chordal distance on C u {inf}, for unit representatives
inline double chordal(const CP1& u, const CP1& v) {
  return std::abs(u(0) * v(1) - u(1) * v(0)) / (u.norm() * v.norm());
}

// chordal distance from [u] to the real circle R u {inf}
inline double real_distance(const CP1& u0) {
  const CP1 u = u0 / u0.norm();
  const double s = std::imag(u(0) * std::conj(u(1)));
  const double x = 4.0 * s * s;
  const double lam = 0.5 * x / (1.0 + std::sqrt(std::max(0.0, 1.0 - x)));
  return std::sqrt(lam);
}

// Phase-aligned mean of unit representatives, weighted.
inline CP1 projective_centroid(const std::vector<CP1>& pts, const std::vector<double>& w) {
  CP1 acc = CP1::Zero();
  const CP1 ref = pts.front() / pts.front().norm();
  for (size_t j = 0; j < pts.size(); ++j) {
    CP1 u = pts[j] / pts[j].norm();
    const cplx ip = ref.dot(u);
    if (std::abs(ip) > 0.0) u *= std::conj(ip) / std::abs(ip);
    acc += w[j] * u;
  }
  return acc / acc.norm();
}

struct RootCluster {
  CP1 center;            // unit representative of [X:Y] with P(center) = 0
  int size = 0;
  bool is_real = false;
  double real_dist = 0;  // chordal distance of the center to R u {inf}
  double gap = 1.0;      // chordal distance to the nearest other cluster
  double backward = 0;   // relative Bombieri distance to a polynomial with a size-fold root here

  bool at_infinity(double tol = 1e-12) const { return std::abs(center(1)) <= tol; }
  // affine coordinate X/Y
  cplx value() const {
    if (center(1) == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
    return center(0) / center(1);
  }
};

struct RootOptions {
  double tol_cluster = 1e-6;
  double tol_real = 1e-6;
  // A group of m nearby computed roots is treated as one m-fold root when the
  // polynomial is within this relative Bombieri distance of one that has an
  // m-fold root at the group's centroid. Floating-point data only pins an
  // m-fold root to about eps^(1/m), so plain distance clustering cannot
  // recognise multiplicity 3 and up at 1e-6.
  double tol_backward = 1e-10;
};

struct RootReport {
  std::vector<RootCluster> clusters;
  int max_real_mult = 0;
  // max_real_mult with every tolerance divided / multiplied by 10
  int max_real_mult_lo = 0;
  int max_real_mult_hi = 0;
  bool ambiguous = false;
  int total() const {
    int s = 0;
    for (auto& c : clusters) s += c.size;
    return s;
  }
};

namespace detail {

// Relative Bombieri distance from p (XY coefficients) to the nearest
// polynomial with an m-fold root at the unit point c.
inline double multiple_root_backward(const CVec& p, const CP1& c0, int m, double pnorm) {
  const CP1 c = c0 / c0.norm();
  const int d = static_cast<int>(p.size()) - 1;
  // unitary M with M(0,1)^T = c; in the new variables the root sits at X' = 0
  const CVec q = substitute(p, std::conj(c(1)), c(0), -std::conj(c(0)), c(1));
  double s = 0.0;
  for (int k = d - m + 1; k <= d; ++k) s += std::norm(q(k)) / binom(d, k);
  return std::sqrt(s) / pnorm;
}

// Newton on the (m-1)-th derivative, which has a simple root at an m-fold
// root. Works in the chart where c sits at the origin. Cluster centroids
// are only good to ~eps^(1/m); this brings them to ~eps.
inline CP1 refine_multiple_root(const CVec& p, const CP1& c0, int m) {
  const CP1 c = c0 / c0.norm();
  const int d = static_cast<int>(p.size()) - 1;
  if (m < 2 || m > d) return c;
  const cplx a = std::conj(c(1)), b = c(0), g = -std::conj(c(0)), h = c(1);
  const CVec q = substitute(p, a, b, g, h);
  // f(x) = sum_j q(d-j) x^j; D = f^(m-1)
  const int k = d - m + 1;
  std::vector<cplx> dc(k + 1);
  for (int j = m - 1; j <= d; ++j) {
    double f = 1.0;
    for (int i = 0; i < m - 1; ++i) f *= j - i;
    dc[j - m + 1] = q(d - j) * f;
  }
  cplx x = 0.0;
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 8; ++it) {
    cplx v = 0.0, dv = 0.0;
    for (int j = k; j >= 0; --j) {
      dv = dv * x + v;
      v = v * x + dc[j];
    }
    if (std::abs(dv) == 0.0) break;
    const cplx step = v / dv;
    if (!(std::abs(step) < last) || std::abs(x - step) > 0.3) break;
    x -= step;
    last = std::abs(step);
    if (last < 1e-17) break;
  }
  CP1 u(a * x + b, g * x + h);
  return u / u.norm();
}

// All roots of an XY polynomial as unit vectors of C^2.
inline std::vector<CP1> projective_roots(const CVec& c) {
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<CP1> roots;
  if (d == 0) return roots;
  // Real rotation of the chart so that the leading coefficient is large.
  // Rotations are chordal isometries and preserve the real circle.
  double best = -1.0, phi = 0.0;
  for (int j = 0; j < 16; ++j) {
    const double t = j * kPi / 16.0;
    cplx v = 0.0;
    for (int k = 0; k <= d; ++k) v += c(k) * std::pow(std::cos(t), d - k) * std::pow(std::sin(t), k);
    if (std::abs(v) > best) {
      best = std::abs(v);
      phi = t;
    }
  }
  const double cs = std::cos(phi), sn = std::sin(phi);
  const CVec r = substitute(c, cs, -sn, sn, cs);
  Eigen::VectorXcd poly(d + 1);
  for (int j = 0; j <= d; ++j) poly(j) = r(d - j);
  Eigen::PolynomialSolver<cplx, Eigen::Dynamic> solver(poly);
  for (Eigen::Index j = 0; j < solver.roots().size(); ++j) {
    const cplx x = solver.roots()(j);
    CP1 u(cs * x - sn, sn * x + cs);
    roots.push_back(u / u.norm());
  }
  return roots;
}

struct Item {
  CP1 c;
  int size;
  double backward;
};

inline RootReport cluster_roots(const CVec& p, const std::vector<CP1>& roots, double tc, double tr,
                                double tb) {
  const int d = static_cast<int>(roots.size());
  const double pn = bombieri_norm(p);
  std::vector<Item> items;
  std::vector<int> left(d);
  std::iota(left.begin(), left.end(), 0);

  // stage 1: recognise numerically multiple roots, largest groups first
  for (int m = d; m >= 2; --m) {
    bool again = true;
    while (again && static_cast<int>(left.size()) >= m) {
      again = false;
      for (int i : left) {
        std::vector<int> nb = left;
        std::sort(nb.begin(), nb.end(), [&](int a, int b) {
          return chordal(roots[i], roots[a]) < chordal(roots[i], roots[b]);
        });
        nb.resize(m);
        std::vector<CP1> pts;
        for (int j : nb) pts.push_back(roots[j]);
        const CP1 c = projective_centroid(pts, std::vector<double>(m, 1.0));
        double rad = 0.0;
        for (auto& q : pts) rad = std::max(rad, chordal(c, q));
        if (rad > 0.3) continue;  // far from any multiple root
        const CP1 cr = refine_multiple_root(p, c, m);
        const double be0 = multiple_root_backward(p, c, m, pn);
        // Newton may wander to a multiple root owned by another group: trust
        // the refined point only if this group is still its m nearest roots
        double inner = 0.0, outer = 1.0;
        for (int j = 0; j < d; ++j) {
          const double dj = chordal(cr, roots[j]);
          if (std::find(nb.begin(), nb.end(), j) != nb.end()) inner = std::max(inner, dj);
          else outer = std::min(outer, dj);
        }
        const double be1 = inner < outer ? multiple_root_backward(p, cr, m, pn) : be0;
        const double be = std::min(be0, be1);
        const CP1& cbest = be1 <= be0 ? cr : c;
        if (be <= tb) {
          items.push_back({cbest, m, be});
          std::vector<int> rest;
          for (int j : left)
            if (std::find(nb.begin(), nb.end(), j) == nb.end()) rest.push_back(j);
          left = rest;
          again = true;
          break;
        }
      }
    }
  }
  for (int j : left) items.push_back({roots[j], 1, 0.0});

  // stage 2: single-linkage merge at chordal distance tc
  const int m = static_cast<int>(items.size());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (chordal(items[i].c, items[j].c) < tc) parent[find(i)] = find(j);

  RootReport rep;
  std::vector<int> roots_of;
  for (int i = 0; i < m; ++i) {
    if (find(i) != i) continue;
    std::vector<CP1> pts;
    std::vector<double> w;
    RootCluster cl;
    for (int j = 0; j < m; ++j)
      if (find(j) == i) {
        pts.push_back(items[j].c);
        w.push_back(items[j].size);
        cl.size += items[j].size;
        cl.backward = std::max(cl.backward, items[j].backward);
      }
    cl.center = projective_centroid(pts, w);
    cl.real_dist = real_distance(cl.center);
    cl.is_real = cl.real_dist < tr;
    rep.clusters.push_back(cl);
  }
  for (size_t i = 0; i < rep.clusters.size(); ++i) {
    double g = 1.0;
    for (size_t j = 0; j < rep.clusters.size(); ++j)
      if (i != j) g = std::min(g, chordal(rep.clusters[i].center, rep.clusters[j].center));
    rep.clusters[i].gap = g;
  }
  std::sort(rep.clusters.begin(), rep.clusters.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.size != b.size) return a.size > b.size;
    return std::arg(a.value()) < std::arg(b.value());
  });
  for (auto& cl : rep.clusters)
    if (cl.is_real) rep.max_real_mult = std::max(rep.max_real_mult, cl.size);
  return rep;
}

inline std::vector<std::pair<int, bool>> signature(const RootReport& r) {
  std::vector<std::pair<int, bool>> s;
  for (auto& c : r.clusters) s.emplace_back(c.size, c.is_real);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace detail

inline RootReport real_root_multiplicity(const HPoly& p0, const RootOptions& opt = {}) {
  const HPoly p = to_basis(p0, Basis::XY);
  if (p.is_zero()) throw DomainError("real_root_multiplicity: zero polynomial");
  const auto roots = detail::projective_roots(p.coeffs());
  RootReport rep =
      detail::cluster_roots(p.coeffs(), roots, opt.tol_cluster, opt.tol_real, opt.tol_backward);
  // Re-run with all tolerances shrunk and grown by 10x: any decision inside
  // that band changes the cluster signature and marks the report ambiguous.
  const RootReport lo = detail::cluster_roots(p.coeffs(), roots, opt.tol_cluster / 10,
                                              opt.tol_real / 10, opt.tol_backward / 10);
  const RootReport hi = detail::cluster_roots(p.coeffs(), roots, opt.tol_cluster * 10,
                                              opt.tol_real * 10, opt.tol_backward * 10);
  rep.max_real_mult_lo = lo.max_real_mult;
  rep.max_real_mult_hi = hi.max_real_mult;
  rep.ambiguous = detail::signature(lo) != detail::signature(hi);
  return rep;
}

inline RootReport real_root_multiplicity(const HPoly& p, double tol_cluster, double tol_real) {
  RootOptions o;
  o.tol_cluster = tol_cluster;
  o.tol_real = tol_real;
  return real_root_multiplicity(p, o);
}

}  // namespace hgeo
