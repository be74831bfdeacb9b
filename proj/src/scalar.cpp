#include "pfexpm/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pfexpm {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

template <class Real>
double as_double(const Real& x) {
  return static_cast<double>(x);
}

// Neumaier summation when enabled; plain left-to-right otherwise.
template <class T>
class Accumulator {
 public:
  explicit Accumulator(bool compensated) : compensated_(compensated) {}

  void add(const T& v) {
    if (!compensated_) {
      s_ += v;
      return;
    }
    using std::abs;
    const T t = s_ + v;
    if (abs(s_) >= abs(v)) {
      c_ += (s_ - t) + v;
    } else {
      c_ += (v - t) + s_;
    }
    s_ = t;
  }

  T value() const { return compensated_ ? s_ + c_ : s_; }

 private:
  bool compensated_;
  T s_{};
  T c_{};
};

// Re(a / w) without forming the imaginary part.
template <class Real, class Complex>
Real real_quotient(const Complex& a, const Complex& w) {
  using std::imag;
  using std::real;
  const Real wr = real(w), wi = imag(w);
  const Real den = wr * wr + wi * wi;
  if (!(as_double(den) >= kTiny)) throw PoleHit("evaluation point coincides with a pole");
  return (real(a) * wr + imag(a) * wi) / den;
}

}  // namespace

template <class Real>
PartialFraction<Real>::PartialFraction(const RootTable& table) : n_(table.order()) {
  using std::abs;
  roots_.reserve(static_cast<std::size_t>(n_));
  coeffs_.reserve(static_cast<std::size_t>(n_));
  for (const auto& z : table.roots()) roots_.push_back(round_to<Real>(z));
  for (const auto& a : table.coeffs()) {
    coeffs_.push_back(round_to<Real>(a));
    sum_abs_ += abs(coeffs_.back());
  }
  for (int l = 0; l < n_ / 2; ++l) pairs_.push_back(2 * l);
}

template <class Real>
PartialFraction<Real>::PartialFraction(int n) : PartialFraction(cached_table(n)) {}

template class PartialFraction<double>;
template class PartialFraction<long double>;
template class PartialFraction<ExtReal>;

template <class Real>
complex_t<Real> eval_reciprocal(int n, const complex_t<Real>& z) {
  using std::abs;
  const complex_t<Real> den = exp_trunc(n, -z);
  if (!(as_double(abs(den)) >= kTiny)) throw PoleHit("exp_n(-z) vanishes at the evaluation point");
  return complex_t<Real>(Real(1)) / den;
}

template <class Real>
Real eval_reciprocal(int n, const Real& x) {
  using std::abs;
  const Real den = exp_trunc(n, -x);
  if (!(as_double(abs(den)) >= kTiny)) throw PoleHit("exp_n(-x) vanishes at the evaluation point");
  return Real(1) / den;
}

template <class Real>
Real eval_pf_real(const PartialFraction<Real>& pf, const Real& x, Summation sum) {
  using Complex = complex_t<Real>;
  const auto roots = pf.roots();
  const auto coeffs = pf.coeffs();
  Accumulator<Real> acc(sum == Summation::Compensated);
  for (const int k : pf.pairs()) {
    const Complex w = Complex(x) + roots[static_cast<std::size_t>(k)];
    const Real t = real_quotient<Real>(coeffs[static_cast<std::size_t>(k)], w);
    acc.add(t + t);
  }
  return acc.value();
}

template <class Real>
complex_t<Real> eval_pf(const PartialFraction<Real>& pf, const complex_t<Real>& z, Summation sum) {
  using Complex = complex_t<Real>;
  using std::abs;
  using std::imag;
  using std::real;
  if (imag(z) == Real(0)) return Complex(eval_pf_real(pf, Real(real(z)), sum));

  const auto roots = pf.roots();
  const auto coeffs = pf.coeffs();
  Accumulator<Real> re(sum == Summation::Compensated), im(sum == Summation::Compensated);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const Complex w = z + roots[k];
    if (!(as_double(abs(w)) >= kTiny)) throw PoleHit("evaluation point coincides with a pole");
    const Complex t = coeffs[k] / w;
    re.add(real(t));
    im.add(imag(t));
  }
  return Complex(re.value(), im.value());
}

#define PFEXPM_INSTANTIATE(R)                                                               \
  template complex_t<R> eval_reciprocal<R>(int, const complex_t<R>&);                      \
  template R eval_reciprocal<R>(int, const R&);                                             \
  template R eval_pf_real<R>(const PartialFraction<R>&, const R&, Summation);               \
  template complex_t<R> eval_pf<R>(const PartialFraction<R>&, const complex_t<R>&, Summation);

PFEXPM_INSTANTIATE(double)
PFEXPM_INSTANTIATE(long double)
PFEXPM_INSTANTIATE(ExtReal)

#undef PFEXPM_INSTANTIATE

double DigitModel::unit() const { return std::pow(10.0, 1 - digits); }

bool DigitModel::admits(std::int64_t n) const { return gamma > static_cast<double>(n) * unit(); }

double bound_m1(int n) { return std::ldexp(1.0, -n); }

double c1(const DigitModel& model) {
  const double u = model.unit();
  return 2.0 * u / (model.gamma * (1.0 - u));
}

double c2(std::int64_t n, const DigitModel& model) {
  if (!model.admits(n)) {
    throw ConditionViolated("gamma <= n 10^(1-D) for n=" + std::to_string(n) +
                            ", D=" + std::to_string(model.digits));
  }
  const double nu = static_cast<double>(n) * model.unit();
  return 4.0 * nu / (model.gamma * (model.gamma - nu));
}

double bound_m2(const PartialFraction<double>& pf, int digits) {
  const DigitModel model{digits};
  const double k2 = c2(pf.order(), model);
  return (c1(model) + k2) * pf.sum_abs_coeffs();
}

double bound_m2(std::int64_t n, int digits) {
  const DigitModel model{digits};
  c2(n, model);
  if (n < kMinOrder || n > kMaxOrder) throw OrderOutOfRange("order " + std::to_string(n) + " outside [2, 64]");
  return bound_m2(PartialFraction<double>(static_cast<int>(n)), digits);
}

ErrorBudget error_budget(const PartialFraction<double>& pf, double x, int digits) {
  ErrorBudget b;
  b.n = pf.order();
  b.x = x;
  b.m2 = bound_m2(pf, digits);
  b.m1 = bound_m1(b.n);
  const double ex = std::exp(x);
  const double pfx = eval_pf_real(pf, x);
  const double rec = eval_reciprocal(b.n, x);
  b.e1 = std::abs(ex - pfx);
  b.e2 = std::abs(ex - rec);
  b.e3 = std::abs(rec - pfx);
  return b;
}

ErrorBudget error_budget(int n, double x, int digits) {
  check_order(n);
  return error_budget(PartialFraction<double>(n), x, digits);
}

template <class Real>
Real truncation_error(int n, Real x) {
  using std::exp;
  if (x > 0) return eval_reciprocal<Real>(n, x) - exp(x);
  if (x == 0) return Real(0);
  const Real y = -x;
  const Real expn = exp_trunc(n, y);
  const Real e = exp(-y);
  if (e == 0) return Real(1) / expn;  // head probability underflows as well

  Real tail = 0;
  if (y < n + 1) {
    Real t = e;
    for (int k = 1; k <= n + 1; ++k) t *= y / k;
    for (int k = n + 1; t > tail * std::numeric_limits<Real>::epsilon() / 4; ++k) {
      tail += t;
      t *= y / (k + 1);
    }
  } else {
    Real head = 0, t = e;
    for (int k = 0; k <= n; ++k) {
      head += t;
      t *= y / (k + 1);
    }
    tail = Real(1) - head;
  }
  return tail / expn;
}

template double truncation_error<double>(int, double);
template long double truncation_error<long double>(int, long double);

SeriesCoefficients series_coefficients(int n, int K) {
  if (n < 0 || K < 0) throw BadSpec("series_coefficients needs n >= 0 and K >= 0");
  // lambda_m = -sum_{j=1}^{min(m,n)} (-1)^j C(m,j) lambda_{m-j}, lambda_0 = 1.
  // Integer valued; long double holds them exactly below 2^64.
  std::vector<long double> lambda(static_cast<std::size_t>(K) + 1, 0.0L);
  lambda[0] = 1.0L;
  for (int m = 1; m <= K; ++m) {
    long double binom = 1.0L, s = 0.0L;
    for (int j = 1; j <= std::min(m, n); ++j) {
      binom = binom * (m - j + 1) / j;
      const long double term = binom * lambda[static_cast<std::size_t>(m - j)];
      s += (j % 2 == 1) ? -term : term;
    }
    lambda[static_cast<std::size_t>(m)] = -s;
  }
  SeriesCoefficients out;
  for (int m = 0; m <= K; ++m) {
    const long double l = lambda[static_cast<std::size_t>(m)];
    if (m <= n && l != 1.0L) {
      throw InvariantViolation("Pade property: m! c_m != 1 at m=" + std::to_string(m));
    }
    out.lambda.push_back(static_cast<double>(l));
    out.c.push_back(static_cast<double>(l * inv_factorial<long double>(m)));
  }
  return out;
}

Extremum err_max_location(int n, double tol) {
  check_order(n);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -(n + 2.0), b = -n / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = truncation_error(n, x1), f2 = truncation_error(n, x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = truncation_error(n, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = truncation_error(n, x1);
    }
  }
  const double xi = 0.5 * (a + b);
  return {xi, truncation_error(n, xi)};
}

double f_n(int n, double x) {
  if (x < 0) return exp_trunc(n, x) * std::exp(-x);
  if (x == 0) return 1.0;
  double s = 0.0;
  const double e = std::exp(-x);
  if (e > 0) {
    double t = e;
    for (int k = 0; k <= n; ++k) {
      s += t;
      t *= x / (k + 1);
    }
    return s;
  }
  const double lx = std::log(x);
  for (int k = 0; k <= n; ++k) s += std::exp(-x + k * lx - std::lgamma(k + 1.0));
  return s;
}

FnReport check_fn_inequalities(int n, std::span<const double> xs) {
  if (n < 1) throw BadSpec("check_fn_inequalities needs n >= 1");
  FnReport r;
  r.f_at_n_plus_1 = f_n(n, n + 1.0);
  r.half_ok = r.f_at_n_plus_1 < 0.5;
  r.worst_margin = std::numeric_limits<double>::infinity();
  const double k = (n + 1.0) / n;
  for (const double x : xs) {
    const double lhs = f_n(n, x) * f_n(n, x);
    const double rhs = k * f_n(n - 1, x) * f_n(n + 1, x);
    double margin;
    if (rhs > 0) {
      margin = (rhs - lhs) / rhs;
    } else {
      margin = lhs > 0 ? -std::numeric_limits<double>::infinity() : 0.0;
    }
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_x = x;
    }
  }
  if (xs.empty()) r.worst_margin = 0.0;
  r.cauchy_schwarz_ok = r.worst_margin >= 0.0;
  return r;
}

}  // namespace pfexpm
