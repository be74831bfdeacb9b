#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "pfexpm/scalar.hpp"
#include "test_support.hpp"

using namespace pfexpm;
using Cd = std::complex<double>;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<double> grid(double lo, double hi, int count) {
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) xs.push_back(lo + (hi - lo) * i / (count - 1));
  return xs;
}

}  // namespace

TEST_CASE("exp_trunc examples") {
  CHECK(exp_trunc(0, 0.0) == 1.0);
  CHECK(exp_trunc(7, Cd(0.0)) == Cd(1.0));
  CHECK(exp_trunc(2, -1.0) == 0.5);
  CHECK(exp_trunc(2, Cd(-1.0, 1.0)) == Cd(0.0));
}

TEST_CASE("eval_reciprocal examples") {
  CHECK(eval_reciprocal(4, 0.0) == 1.0);
  CHECK(eval_reciprocal(4, -1.0) == doctest::Approx(24.0 / 65.0).epsilon(1e-15));
  CHECK_THROWS_AS(eval_reciprocal<double>(2, Cd(1.0, -1.0)), PoleHit);
}

TEST_CASE("PartialFraction invariants") {
  for (int n = 2; n <= kMaxOrder; n += 2) {
    const PartialFraction<double> pf(n);
    REQUIRE(pf.pairs().size() == static_cast<std::size_t>(n / 2));
    for (const int k : pf.pairs()) {
      CHECK(pf.roots()[static_cast<std::size_t>(k + 1)] == std::conj(pf.roots()[static_cast<std::size_t>(k)]));
      CHECK(pf.coeffs()[static_cast<std::size_t>(k + 1)] == std::conj(pf.coeffs()[static_cast<std::size_t>(k)]));
    }
    CAPTURE(n);
    CHECK(std::abs(eval_pf_real(pf, 0.0) - 1.0) <= bound_m2(pf, 16));
  }
}

TEST_CASE("eval_pf examples") {
  const PartialFraction<double> pf2(2);
  CHECK(std::abs(eval_pf(pf2, Cd(0.0)) - 1.0) < 4 * kEps);

  const PartialFraction<double> pf16(16);
  const Cd v = eval_pf(pf16, Cd(-5.0));
  CHECK(v.imag() == 0.0);
  CHECK(std::abs(v.real() - eval_reciprocal(16, -5.0)) <= bound_m2(16, 16));

  // Off the real axis the full sum is used; compare with the reciprocal.
  const Cd z(-3.0, 0.5);
  CHECK(std::abs(eval_pf(pf16, z) - eval_reciprocal<double>(16, z)) < 1e-12);
  CHECK(std::abs(eval_pf(pf16, z, Summation::Compensated) - eval_reciprocal<double>(16, z)) < 1e-12);
  CHECK_THROWS_AS(eval_pf(pf2, Cd(1.0, -1.0)), PoleHit);
}

TEST_CASE("real arguments give exactly real results") {
  for (int n : {2, 8, 32, 64}) {
    const PartialFraction<double> pf(n);
    for (double x : grid(-100.0, 0.0, 101)) CHECK(eval_pf(pf, Cd(x)).imag() == 0.0);
  }
}

TEST_CASE("compensated summation agrees with plain summation to rounding") {
  const PartialFraction<double> pf(32);
  for (double x : grid(-60.0, 0.0, 61)) {
    const double plain = eval_pf_real(pf, x);
    const double comp = eval_pf_real(pf, x, Summation::Compensated);
    CHECK(std::abs(plain - comp) <= 64 * kEps * pf.sum_abs_coeffs());
  }
}

TEST_CASE("M1 and M2") {
  CHECK(bound_m1(8) == 0.00390625);
  CHECK(bound_m1(1) == 0.5);
  CHECK(bound_m1(32) == std::ldexp(1.0, -32));
  CHECK(c1(DigitModel{16}) == doctest::Approx(6.886103842445951e-15).epsilon(1e-12));
  CHECK_THROWS_AS(bound_m2(10'000'000'000'000'000LL, 16), ConditionViolated);
  CHECK_THROWS_AS(error_budget(32, -1.0, 2), ConditionViolated);
  CHECK(std::isfinite(bound_m2(32, 16)));
  CHECK(DigitModel{16}.admits(64));
}

TEST_CASE("error_budget examples") {
  const auto b0 = error_budget(8, 0.0, 16);
  CHECK(b0.e2 <= support::ulp(1.0));
  CHECK(b0.m1 == std::ldexp(1.0, -8));

  const auto b = error_budget(4, -1.0, 16);
  // 24/65 - e^{-1} from a 40-digit evaluation.
  CHECK(b.e2 == doctest::Approx(0.001351328059326909173707).epsilon(1e-12));
  CHECK(b.e2 <= b.m1);

  double worst_e3 = 0.0;
  const PartialFraction<double> pf(32);
  for (double x : grid(-100.0, 0.0, 10000)) {
    const auto e = error_budget(pf, x, 16);
    worst_e3 = std::max(worst_e3, e.e3);
    CHECK(e.e1 <= e.e2 + e.e3 + 4 * kEps);
  }
  CHECK(worst_e3 <= bound_m2(32, 16));
}

TEST_CASE("bound M1 and M2 over the [-100, 0] grid") {
  for (int n : {4, 8, 16, 32}) {
    const PartialFraction<double> pf(n);
    const double m2 = bound_m2(pf, 16);
    for (double x : grid(-100.0, 0.0, 10000)) {
      const auto e = error_budget(pf, x, 16);
      CHECK(e.e2 <= std::ldexp(1.0, -n));
      CHECK(e.e3 <= m2);
    }
  }
}

TEST_CASE("extended-precision partial fractions reproduce the reciprocal") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-50.0, 0.0);
  for (int n = 2; n <= 20; n += 2) {
    const PartialFraction<ExtReal> pf(n);
    for (int i = 0; i < 100; ++i) {
      const ExtReal x(unif(rng));
      const double diff = to_double(abs(eval_pf_real(pf, x) - eval_reciprocal(n, x)));
      CAPTURE(n);
      CHECK(diff <= 1e-20);
    }
  }
}

TEST_CASE("series coefficients") {
  const auto s2 = series_coefficients(2, 4);
  REQUIRE(s2.c.size() == 5);
  CHECK(s2.c[0] == 1.0);
  CHECK(s2.c[1] == 1.0);
  CHECK(s2.c[2] == 0.5);
  CHECK(s2.c[3] == 0.0);
  CHECK(s2.c[4] == -0.25);
  CHECK(s2.lambda[4] == -6.0);

  const auto s4 = series_coefficients(4, 6);
  CHECK(s4.lambda[5] == 0.0);
  CHECK(s4.lambda[6] == -10.0);

  const auto s8 = series_coefficients(8, 8);
  for (int m = 0; m <= 8; ++m) CHECK(s8.c[static_cast<std::size_t>(m)] == doctest::Approx(inv_factorial<double>(m)).epsilon(1e-15));

  for (int n = 2; n <= 32; n += 2) {
    const auto s = series_coefficients(n, n + 2);
    for (int m = 0; m <= n; ++m) CHECK(s.lambda[static_cast<std::size_t>(m)] == 1.0);
    CHECK(s.lambda[static_cast<std::size_t>(n + 1)] == 0.0);
    CHECK(s.lambda[static_cast<std::size_t>(n + 2)] == -2.0 * (n + 1));
  }
}

TEST_CASE("truncation error without cancellation") {
  // 40-digit references of R_n(x) - e^x.
  CHECK(truncation_error(10, -3.0) == doctest::Approx(1.455885583985294959688750511587e-5).epsilon(1e-13));
  CHECK(truncation_error(4, -50.0) == doctest::Approx(3.539184076503002804813928001652e-6).epsilon(1e-13));
  CHECK(truncation_error(64, -100.0) == doctest::Approx(4.766274915326881534367856299238e-40).epsilon(1e-12));
  CHECK(truncation_error(16, -1.0) == doctest::Approx(4.027986056908893514714818442442e-16).epsilon(1e-13));
  CHECK(truncation_error(32, -4.0) == doctest::Approx(3.229079131284363365654130238822e-21).epsilon(1e-13));
  CHECK(truncation_error(8, 0.0) == 0.0);
  CHECK(truncation_error(16, -1.0L) == doctest::Approx(4.027986056908893514714818442442e-16).epsilon(1e-15));
}

TEST_CASE("err_n is positive and unimodal on [-4n, 0]") {
  for (int n : {2, 4, 8, 16}) {
    const auto xs = grid(-4.0 * n, 0.0, 10000);
    int sign_changes = 0;
    double prev = truncation_error(n, xs[0]);
    int prev_sign = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double e = truncation_error(n, xs[i]);
      if (xs[i] < 0) CHECK(e > 0.0);
      const int sign = e > prev ? 1 : (e < prev ? -1 : 0);
      if (sign != 0 && prev_sign != 0 && sign != prev_sign) ++sign_changes;
      if (sign != 0) prev_sign = sign;
      prev = e;
    }
    CAPTURE(n);
    CHECK(sign_changes == 1);
  }
}

TEST_CASE("location of the maximum of err_n") {
  const auto m4 = err_max_location(4, 1e-10);
  CHECK(m4.xi >= -6.0);
  CHECK(m4.xi <= -2.0);
  CHECK(m4.xi == doctest::Approx(-3.3210880026382707194).epsilon(1e-8));
  CHECK(m4.err == doctest::Approx(0.011483271173035216649).epsilon(1e-12));

  const auto m8 = err_max_location(8, 1e-10);
  CHECK(m8.xi == doctest::Approx(-5.0992448572640401811).epsilon(1e-8));
  CHECK(m8.err == doctest::Approx(0.00049303172793554335539).epsilon(1e-12));

  const auto m32 = err_max_location(32, 1e-10);
  CHECK(m32.xi >= -34.0);
  CHECK(m32.xi <= -16.0);
  CHECK(m32.xi == doctest::Approx(-16.95619005336924087).epsilon(1e-8));
}

TEST_CASE("grid argmax of err_n lies within one spacing of xi_n") {
  for (int n : {4, 8, 16, 32}) {
    const double lo = -(n + 2.0), hi = -n / 2.0;
    const auto xs = grid(lo, hi, 100000);
    const double h = (hi - lo) / (xs.size() - 1);
    double best = 0.0, at = 0.0;
    for (double x : xs) {
      const double e = truncation_error(n, x);
      if (e > best) best = e, at = x;
    }
    const auto m = err_max_location(n, 1e-10);
    CAPTURE(n);
    CHECK(std::abs(at - m.xi) <= h);
    CHECK(best <= m.err * (1 + 1e-12));
  }
}

TEST_CASE("err_4 at xi_4 against a 10^5-point grid on [-20, 0] to 1e-12" * doctest::may_fail()) {
  // The grid spacing is 2e-4 and the curvature at xi_4 is about -3.6e-3, so
  // the grid maximum sits about 5.4e-12 below the true maximum.
  const auto m4 = err_max_location(4, 1e-10);
  double best = 0.0;
  for (double x : grid(-20.0, 0.0, 100000)) best = std::max(best, truncation_error(4, x));
  CHECK(std::abs(best - m4.err) <= 1e-12);
}

TEST_CASE("f_n inequalities") {
  CHECK(f_n(4, 5.0) == doctest::Approx(0.4404932850652124114).epsilon(1e-14));
  CHECK(f_n(2, 0.0) == 1.0);
  const double x0[] = {0.0};
  const auto r0 = check_fn_inequalities(2, x0);
  CHECK(r0.half_ok);
  CHECK(r0.cauchy_schwarz_ok);
  CHECK(r0.worst_margin == doctest::Approx(1.0 / 3.0));

  const auto xs = grid(0.0, 30.0, 100);
  const auto r = check_fn_inequalities(10, xs);
  CHECK(r.half_ok);
  CHECK(r.cauchy_schwarz_ok);
  CHECK(f_n(3, -2.0) == doctest::Approx(exp_trunc(3, -2.0) * std::exp(2.0)));
  CHECK(f_n(5, 800.0) >= 0.0);
}
