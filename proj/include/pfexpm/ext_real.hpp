#pragma once

// Double-double arithmetic: a value is the unevaluated sum hi + lo of two
// binary64 numbers, giving roughly 32 significant decimal digits.

#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>

#include "pfexpm/detail/inv_factorial_table.hpp"

namespace pfexpm {

namespace detail {

inline double two_sum(double a, double b, double& err) {
  const double s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

inline double quick_two_sum(double a, double b, double& err) {
  const double s = a + b;
  err = b - (s - a);
  return s;
}

inline double two_prod(double a, double b, double& err) {
  const double p = a * b;
  err = std::fma(a, b, -p);
  return p;
}

}  // namespace detail

struct ExtReal {
  double hi = 0.0;
  double lo = 0.0;

  constexpr ExtReal() = default;
  constexpr ExtReal(double h) : hi(h), lo(0.0) {}  // NOLINT(google-explicit-constructor)

  /// Builds a normalized value from an arbitrary (hi, lo) pair.
  static ExtReal from_parts(double h, double l) {
    ExtReal r;
    r.hi = detail::quick_two_sum(h, l, r.lo);
    return r;
  }

  /// Takes (hi, lo) verbatim; used when reading back a stored value.
  static constexpr ExtReal raw(double h, double l) {
    ExtReal r;
    r.hi = h;
    r.lo = l;
    return r;
  }

  explicit operator double() const { return hi + lo; }
  explicit operator long double() const {
    return static_cast<long double>(hi) + static_cast<long double>(lo);
  }

  ExtReal operator-() const { return raw(-hi, -lo); }

  ExtReal& operator+=(const ExtReal& b);
  ExtReal& operator-=(const ExtReal& b) { return *this += -b; }
  ExtReal& operator*=(const ExtReal& b);
  ExtReal& operator/=(const ExtReal& b);
};

inline ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  double s2, t2;
  double s1 = detail::two_sum(a.hi, b.hi, s2);
  const double t1 = detail::two_sum(a.lo, b.lo, t2);
  s2 += t1;
  s1 = detail::quick_two_sum(s1, s2, s2);
  s2 += t2;
  return ExtReal::from_parts(s1, s2);
}

inline ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }

inline ExtReal operator*(const ExtReal& a, const ExtReal& b) {
  double p2;
  const double p1 = detail::two_prod(a.hi, b.hi, p2);
  p2 += a.hi * b.lo + a.lo * b.hi;
  return ExtReal::from_parts(p1, p2);
}

inline ExtReal operator/(const ExtReal& a, const ExtReal& b) {
  const double q1 = a.hi / b.hi;
  ExtReal r = a - ExtReal(q1) * b;
  const double q2 = r.hi / b.hi;
  r -= ExtReal(q2) * b;
  const double q3 = r.hi / b.hi;
  return ExtReal::from_parts(q1, q2) + ExtReal(q3);
}

inline ExtReal& ExtReal::operator+=(const ExtReal& b) { return *this = *this + b; }
inline ExtReal& ExtReal::operator*=(const ExtReal& b) { return *this = *this * b; }
inline ExtReal& ExtReal::operator/=(const ExtReal& b) { return *this = *this / b; }

inline bool operator==(const ExtReal& a, const ExtReal& b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }
inline bool operator<(const ExtReal& a, const ExtReal& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
inline bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
inline bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }

inline ExtReal abs(const ExtReal& a) { return a.hi < 0.0 ? -a : a; }

inline ExtReal sqrt(const ExtReal& a) {
  if (a.hi <= 0.0) return ExtReal(a.hi == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN());
  const double x = 1.0 / std::sqrt(a.hi);
  const double ax = a.hi * x;
  const ExtReal corr = a - ExtReal(ax) * ExtReal(ax);
  return ExtReal(ax) + ExtReal(corr.hi * x * 0.5);
}

inline double to_double(const ExtReal& a) { return a.hi + a.lo; }

/// Exponential, sine and cosine accurate to a few double-double ulps for
/// moderate arguments (|x| up to a few hundred).
ExtReal exp(const ExtReal& x);
ExtReal sin(const ExtReal& x);
ExtReal cos(const ExtReal& x);

/// Complex number with double-double components. std::complex is only
/// specified for the built-in floating types, hence the separate type.
struct ExtComplex {
  ExtReal re;
  ExtReal im;

  constexpr ExtComplex() = default;
  constexpr ExtComplex(ExtReal r) : re(r) {}  // NOLINT(google-explicit-constructor)
  constexpr ExtComplex(double r) : re(r) {}   // NOLINT(google-explicit-constructor)
  constexpr ExtComplex(ExtReal r, ExtReal i) : re(r), im(i) {}
  explicit ExtComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  ExtComplex operator-() const { return {-re, -im}; }
  ExtComplex& operator+=(const ExtComplex& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  ExtComplex& operator-=(const ExtComplex& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
};

inline ExtComplex operator+(const ExtComplex& a, const ExtComplex& b) { return {a.re + b.re, a.im + b.im}; }
inline ExtComplex operator-(const ExtComplex& a, const ExtComplex& b) { return {a.re - b.re, a.im - b.im}; }
inline ExtComplex operator*(const ExtComplex& a, const ExtComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ExtComplex operator*(const ExtReal& s, const ExtComplex& b) { return {s * b.re, s * b.im}; }
inline ExtComplex operator/(const ExtComplex& a, const ExtComplex& b) {
  const ExtReal den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline bool operator==(const ExtComplex& a, const ExtComplex& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const ExtComplex& a, const ExtComplex& b) { return !(a == b); }

inline ExtReal real(const ExtComplex& z) { return z.re; }
inline ExtReal imag(const ExtComplex& z) { return z.im; }
inline ExtComplex conj(const ExtComplex& z) { return {z.re, -z.im}; }
inline ExtReal norm(const ExtComplex& z) { return z.re * z.re + z.im * z.im; }
inline ExtReal abs(const ExtComplex& z) { return sqrt(norm(z)); }

/// e^z = e^x (cos y + i sin y).
ExtComplex exp(const ExtComplex& z);

inline std::complex<double> to_complex_double(const ExtComplex& z) {
  return {to_double(z.re), to_double(z.im)};
}

// Scalar traits used by the templated scalar kernels.

template <class Real>
struct complex_of {
  using type = std::complex<Real>;
};
template <>
struct complex_of<ExtReal> {
  using type = ExtComplex;
};
template <class Real>
using complex_t = typename complex_of<Real>::type;

template <class Real>
Real round_to(const ExtReal& x) {
  if constexpr (std::is_same_v<Real, ExtReal>) {
    return x;
  } else {
    return static_cast<Real>(static_cast<long double>(x));
  }
}

template <class Real>
complex_t<Real> round_to(const ExtComplex& z) {
  return complex_t<Real>(round_to<Real>(z.re), round_to<Real>(z.im));
}

/// 1/k! in the requested precision. Correctly rounded for k < 71; larger k
/// extend the table by double-double division.
template <class Real>
Real inv_factorial(int k) {
  if (k < detail::kInvFactorialCount) {
    const auto& e = detail::kInvFactorial[static_cast<std::size_t>(k)];
    return round_to<Real>(ExtReal::raw(e[0], e[1]));
  }
  const auto& last = detail::kInvFactorial[detail::kInvFactorialCount - 1];
  ExtReal v = ExtReal::raw(last[0], last[1]);
  for (int j = detail::kInvFactorialCount; j <= k; ++j) v /= ExtReal(static_cast<double>(j));
  return round_to<Real>(v);
}

template <class Real>
constexpr double unit_roundoff() {
  if constexpr (std::is_same_v<Real, ExtReal>) {
    return 0x1p-104;
  } else {
    return std::numeric_limits<Real>::epsilon() / 2;
  }
}

}  // namespace pfexpm
