#pragma once

#include <complex>
#include <type_traits>

#include "pfexpm/ext_real.hpp"

namespace pfexpm {

template <class T>
struct real_of {
  using type = T;
};
template <class R>
struct real_of<std::complex<R>> {
  using type = R;
};
template <>
struct real_of<ExtComplex> {
  using type = ExtReal;
};
template <class T>
using real_of_t = typename real_of<T>::type;

/// Taylor polynomial exp_n(z) = sum_{k=0}^{n} z^k / k!, evaluated by Horner's
/// scheme. Works for real or complex arguments in double, long double or
/// double-double precision.
template <class Number>
Number exp_trunc(int n, const Number& z) {
  using Real = real_of_t<Number>;
  Number acc = Number(inv_factorial<Real>(n));
  for (int k = n - 1; k >= 0; --k) acc = acc * z + Number(inv_factorial<Real>(k));
  return acc;
}

}  // namespace pfexpm
