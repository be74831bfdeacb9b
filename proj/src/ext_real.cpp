#include <cmath>

#include "pfexpm/ext_real.hpp"

namespace pfexpm {

namespace {

constexpr ExtReal kLn2 = ExtReal::raw(0.6931471805599453, 2.3190468138462996e-17);
constexpr ExtReal kHalfPi = ExtReal::raw(1.5707963267948966, 6.123233995736766e-17);

ExtReal ldexp(const ExtReal& a, int e) { return ExtReal::raw(std::ldexp(a.hi, e), std::ldexp(a.lo, e)); }

// Taylor series of sin and cos for |r| <= pi/4.
void sin_cos_reduced(const ExtReal& r, ExtReal& s, ExtReal& c) {
  const ExtReal r2 = r * r;
  ExtReal term = r;
  s = r;
  for (int k = 1; k < 30; ++k) {
    term = -(term * r2) / ExtReal(static_cast<double>((2 * k) * (2 * k + 1)));
    s += term;
    if (std::abs(term.hi) < 1e-34) break;
  }
  term = ExtReal(1.0);
  c = ExtReal(1.0);
  for (int k = 1; k < 30; ++k) {
    term = -(term * r2) / ExtReal(static_cast<double>((2 * k - 1) * (2 * k)));
    c += term;
    if (std::abs(term.hi) < 1e-34) break;
  }
}

void sin_cos(const ExtReal& x, ExtReal& s, ExtReal& c) {
  const double q = std::nearbyint(x.hi / kHalfPi.hi);
  const ExtReal r = x - ExtReal(q) * kHalfPi;
  ExtReal sr, cr;
  sin_cos_reduced(r, sr, cr);
  const long quadrant = static_cast<long>(q) & 3;
  switch (quadrant) {
    case 0:
      s = sr;
      c = cr;
      break;
    case 1:
      s = cr;
      c = -sr;
      break;
    case 2:
      s = -sr;
      c = -cr;
      break;
    default:
      s = -cr;
      c = sr;
      break;
  }
}

}  // namespace

ExtReal exp(const ExtReal& x) {
  if (x.hi > 709.0) return ExtReal(std::numeric_limits<double>::infinity());
  if (x.hi < -745.0) return ExtReal(0.0);
  const double k = std::nearbyint(x.hi / kLn2.hi);
  // r = (x - k ln2) / 2^10, |r| <= ln2 / 2048.
  const ExtReal r = ldexp(x - ExtReal(k) * kLn2, -10);
  // Squaring in expm1 form, s -> s (s + 2), keeps the relative error from doubling.
  ExtReal term = r, s = r;
  for (int j = 2; j < 20; ++j) {
    term = term * r / ExtReal(static_cast<double>(j));
    s += term;
    if (std::abs(term.hi) < 1e-36) break;
  }
  for (int j = 0; j < 10; ++j) s = s * (s + ExtReal(2.0));
  const ExtReal sum = s + ExtReal(1.0);
  return ldexp(sum, static_cast<int>(k));
}

ExtReal sin(const ExtReal& x) {
  ExtReal s, c;
  sin_cos(x, s, c);
  return s;
}

ExtReal cos(const ExtReal& x) {
  ExtReal s, c;
  sin_cos(x, s, c);
  return c;
}

ExtComplex exp(const ExtComplex& z) {
  const ExtReal m = exp(z.re);
  ExtReal s, c;
  sin_cos(z.im, s, c);
  return {m * c, m * s};
}

}  // namespace pfexpm
