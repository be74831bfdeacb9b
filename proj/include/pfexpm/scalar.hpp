#pragma once

// Scalar evaluation of R_n(z) = 1/exp_n(-z), both as a reciprocal and as a
// sum of simple fractions, plus error budgets, a priori bounds and the
// series/extremum diagnostics.

#include <cstdint>
#include <span>
#include <vector>

#include "pfexpm/ext_real.hpp"
#include "pfexpm/rootgen.hpp"
#include "pfexpm/truncated_exp.hpp"

namespace pfexpm {

enum class Summation { Plain, Compensated };

/// Working-precision copy of a RootTable. pairs() lists the index 2l of one
/// member of each conjugate pair; its partner sits at 2l+1.
template <class Real>
class PartialFraction {
 public:
  using Complex = complex_t<Real>;

  explicit PartialFraction(const RootTable& table);
  /// Uses the process-wide product-formula table of order n.
  explicit PartialFraction(int n);

  int order() const { return n_; }
  std::span<const Complex> roots() const { return roots_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<const int> pairs() const { return pairs_; }
  /// sum_k |a_k| over all n coefficients, in working precision.
  Real sum_abs_coeffs() const { return sum_abs_; }

 private:
  int n_ = 0;
  std::vector<Complex> roots_;
  std::vector<Complex> coeffs_;
  std::vector<int> pairs_;
  Real sum_abs_{};
};

extern template class PartialFraction<double>;
extern template class PartialFraction<long double>;
extern template class PartialFraction<ExtReal>;

/// 1 / exp_n(-z). Throws PoleHit if exp_n(-z) underflows.
template <class Real>
complex_t<Real> eval_reciprocal(int n, const complex_t<Real>& z);
template <class Real>
Real eval_reciprocal(int n, const Real& x);

/// sum_k a_k / (z + theta_k) in ascending k. For real z the conjugate pairs are
/// folded as 2 Re(a_{2l} / (z + theta_{2l})) and the imaginary part is exactly 0.
/// Throws PoleHit if some |z + theta_k| underflows.
template <class Real>
complex_t<Real> eval_pf(const PartialFraction<Real>& pf, const complex_t<Real>& z,
                        Summation sum = Summation::Plain);
/// Real argument, pair-folded.
template <class Real>
Real eval_pf_real(const PartialFraction<Real>& pf, const Real& x, Summation sum = Summation::Plain);

/// Decimal-digit model for perturbed coefficients: admits order n when
/// gamma > n 10^(1-D).
struct DigitModel {
  int digits = 16;
  double gamma = kRootSeparation;

  double unit() const;  // 10^(1-D)
  bool admits(std::int64_t n) const;
};

double bound_m1(int n);
double c1(const DigitModel& model);
/// Throws ConditionViolated unless model.admits(n).
double c2(std::int64_t n, const DigitModel& model);
/// (C1 + C2) sum_k |a_k| with the binary64 table of order n. The condition on
/// (n, D) is checked before the order, so a huge n reports ConditionViolated.
double bound_m2(std::int64_t n, int digits = 16);
double bound_m2(const PartialFraction<double>& pf, int digits = 16);

struct ErrorBudget {
  int n = 0;
  double x = 0.0;
  double e1 = 0.0;  // |exp(x) - partial fractions|
  double e2 = 0.0;  // |exp(x) - reciprocal|
  double e3 = 0.0;  // |reciprocal - partial fractions|
  double m1 = 0.0;
  double m2 = 0.0;
};

/// Binary64 error components at x <= 0. Throws ConditionViolated when (n, D)
/// breaks the digit condition.
ErrorBudget error_budget(const PartialFraction<double>& pf, double x, int digits = 16);
ErrorBudget error_budget(int n, double x, int digits = 16);

/// err_n(x) = R_n(x) - e^x. For x <= 0 evaluated without cancellation as
/// P(N > n) / exp_n(-x), N ~ Poisson(-x).
template <class Real>
Real truncation_error(int n, Real x);
extern template double truncation_error<double>(int, double);
extern template long double truncation_error<long double>(int, long double);

struct SeriesCoefficients {
  std::vector<double> c;       // Taylor coefficients of 1/exp_n(-z), c_0..c_K
  std::vector<double> lambda;  // m! c_m, computed by an exact integer recurrence
};

/// Throws InvariantViolation if m! c_m != 1 for some m <= min(n, K).
SeriesCoefficients series_coefficients(int n, int K);

struct Extremum {
  double xi = 0.0;
  double err = 0.0;
};

/// Golden-section search for the maximizer of err_n on [-(n+2), -n/2].
Extremum err_max_location(int n, double tol = 1e-10);

/// f_n(x) = exp_n(x) e^{-x}.
double f_n(int n, double x);

struct FnReport {
  double f_at_n_plus_1 = 0.0;
  bool half_ok = false;
  /// min over xs of ((n+1)/n f_{n-1} f_{n+1} - f_n^2) / ((n+1)/n f_{n-1} f_{n+1}).
  double worst_margin = 0.0;
  double worst_x = 0.0;
  bool cauchy_schwarz_ok = false;
};

FnReport check_fn_inequalities(int n, std::span<const double> xs);

}  // namespace pfexpm
