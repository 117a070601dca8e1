#pragma once
// Exact rational comparisons involving square roots.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace hgeo::exact {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Rel { Less = -1, Equal = 0, Greater = 1 };

inline const char* rel_name(Rel r) {
  switch (r) {
    case Rel::Less: return "less";
    case Rel::Equal: return "equal";
    default: return "greater";
  }
}

inline Rel compare(const Rational& a, const Rational& b) {
  if (a < b) return Rel::Less;
  if (a > b) return Rel::Greater;
  return Rel::Equal;
}

inline Int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// Compares x with sqrt(B) + sqrt(C) for rationals x >= 0, B, C >= 0, by
// squaring twice while tracking the sign of the intermediate difference.
inline Rel compare_with_sqrt_sum(const Rational& x, const Rational& B, const Rational& C) {
  // x >= 0, so x vs sqrt(B)+sqrt(C)  <=>  x^2 - B - C vs 2 sqrt(BC)
  const Rational L = x * x - B - C;
  if (L < 0) return Rel::Less;
  return compare(L * L, 4 * B * C);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace hgeo::exact
