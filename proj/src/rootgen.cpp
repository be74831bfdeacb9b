#include "pfexpm/rootgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <sstream>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "pfexpm/truncated_exp.hpp"

namespace pfexpm {

namespace {

constexpr int kMaxAberthIterations = 200;

std::string fmt_order(int n) { return "n=" + std::to_string(n); }

// Parlett-Reinsch balancing with power-of-two scalings.
void balance(Eigen::MatrixXd& m) {
  const Eigen::Index d = m.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double r = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
      double c = m.col(i).cwiseAbs().sum() - std::abs(m(i, i));
      if (r == 0.0 || c == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / 2) {
        f *= 2;
        c *= 4;
      }
      while (c > r * 2) {
        f /= 2;
        c /= 4;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

// Initial guesses from the balanced companion matrix of the monic polynomial
// exp_n(n w) * n! / n^n, whose roots lie in the closed unit disk. In binary64
// the leftmost roots are poorly conditioned, so guesses are only rough; the
// double-double Aberth sweeps do the real work.
std::vector<std::complex<double>> initial_upper_roots(int n) {
  Eigen::VectorXd c(n + 1);
  const double log_n = std::log(static_cast<double>(n));
  const double log_nfact = std::lgamma(n + 1.0);
  for (int k = 0; k <= n; ++k) c[k] = std::exp(log_nfact - std::lgamma(k + 1.0) + (k - n) * log_n);

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[n];
  balance(companion);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<std::complex<double>> all(solver.eigenvalues().begin(), solver.eigenvalues().end());
  if (solver.info() != Eigen::Success) {
    // Fall back to points on a circle; Aberth converges from there too.
    for (int k = 0; k < n; ++k) all[k] = std::polar(0.7, 3.14159265358979 * (k + 0.5) / n);
  }
  std::sort(all.begin(), all.end(), [](auto a, auto b) { return a.imag() > b.imag(); });
  all.resize(static_cast<std::size_t>(n / 2));
  for (std::size_t k = 0; k < all.size(); ++k) {
    auto& w = all[k];
    w *= static_cast<double>(n);
    // Keep every guess off the real axis and apart from the others so the
    // implicit conjugates and the Aberth sums stay well defined.
    if (w.imag() < 0.5) w.imag(0.5);
    for (std::size_t j = 0; j < k; ++j) {
      if (std::abs(w - all[j]) < 1e-6) w += std::complex<double>(0.0, 0.1 * static_cast<double>(k + 1));
    }
  }
  return all;
}

struct SeriesValue {
  ExtComplex value;       // exp_n(z)
  ExtComplex derivative;  // exp_{n-1}(z)
};

// Evaluates exp_n and exp_{n-1} at z by whichever route loses less to
// cancellation. Horner's rounding noise scales with exp_n(|z|); the route
// e^z - sum_{k>n} z^k/k! scales with e^{Re z} plus the tail at |z|, which is
// far smaller for roots in the left half-plane.
SeriesValue eval_series(int n, const ExtComplex& z) {
  const double r = to_double(abs(z));
  double head = 0.0, tail = 0.0, term = 1.0;
  for (int k = 0; k <= n + 400; ++k) {
    if (k > 0) term *= r / k;
    (k <= n ? head : tail) += term;
    if (k > n && k > r && term < 1e-20 * tail) break;
  }
  const double tail_route = std::exp(to_double(z.re)) + tail;
  if (!(tail_route < head)) return {exp_trunc(n, z), exp_trunc(n - 1, z)};

  ExtComplex t_n(inv_factorial<ExtReal>(n));
  for (int k = 0; k < n; ++k) t_n = t_n * z;
  ExtComplex rest;
  ExtComplex t = t_n;
  for (int k = n + 1; k <= n + 400; ++k) {
    t = t * z / ExtComplex(static_cast<double>(k));
    rest += t;
    if (k > r && to_double(abs(t)) < 1e-36 * std::max(1e-300, to_double(abs(rest)))) break;
  }
  const ExtComplex ez = exp(z);
  return {ez - rest, ez - (rest + t_n)};
}

// One Jacobi sweep of the Aberth-Ehrlich iteration on the upper half-plane
// roots; the lower half is represented implicitly by conjugation. Returns
// the largest relative correction.
double aberth_sweep(int n, std::vector<ExtComplex>& upper) {
  const std::size_t m = upper.size();
  std::vector<ExtComplex> corr(m);
  double max_rel = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const ExtComplex& z = upper[k];
    const auto [p, dp] = eval_series(n, z);
    const ExtComplex ratio = p / dp;
    ExtComplex s;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != k) s += ExtComplex(1.0) / (z - upper[j]);
      s += ExtComplex(1.0) / (z - conj(upper[j]));
    }
    corr[k] = ratio / (ExtComplex(1.0) - ratio * s);
    max_rel = std::max(max_rel, to_double(abs(corr[k])) / to_double(abs(z)));
  }
  for (std::size_t k = 0; k < m; ++k) upper[k] -= corr[k];
  return max_rel;
}

void require(bool ok, const std::string& check, const std::string& detail) {
  if (!ok) throw InvariantViolation("root table check '" + check + "' failed: " + detail);
}

}  // namespace

std::string_view to_string(CoeffMethod method) {
  switch (method) {
    case CoeffMethod::ProductFormula:
      return "product";
    case CoeffMethod::DerivativeFormula:
      return "derivative";
    case CoeffMethod::PowerFormula:
      return "power";
  }
  return "unknown";
}

CoeffMethod parse_coeff_method(std::string_view name) {
  for (auto m : {CoeffMethod::ProductFormula, CoeffMethod::DerivativeFormula, CoeffMethod::PowerFormula}) {
    if (to_string(m) == name) return m;
  }
  throw ParseError("unknown coefficient method '" + std::string(name) + "'");
}

void check_order(int n) {
  if (n < kMinOrder || n > kMaxOrder || n % 2 != 0) {
    throw OrderOutOfRange("order must be even and within [2, 64], got " + std::to_string(n));
  }
}

double relative_residual(int n, const ExtComplex& z) {
  const auto [p, dp] = eval_series(n, z);
  return to_double(abs(p)) / std::max(1.0, to_double(abs(dp)));
}

std::vector<ExtComplex> compute_roots(int n) {
  check_order(n);

  std::vector<ExtComplex> upper;
  for (auto w : initial_upper_roots(n)) upper.emplace_back(w);

  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kMaxAberthIterations; ++it) {
    const double rel = aberth_sweep(n, upper);
    if (rel < 1e-31) break;
    // Once the corrections are at rounding level they stop shrinking.
    if (rel < 1e-22 && rel > 0.25 * prev) break;
    prev = rel;
  }

  for (const auto& z : upper) {
    const double res = relative_residual(n, z);
    if (!(res <= kResidualTarget) || !(z.im > ExtReal(0.0))) {
      throw IterationLimitExceeded("root refinement did not reach the residual target for " + fmt_order(n));
    }
  }

  std::sort(upper.begin(), upper.end(), [](const ExtComplex& a, const ExtComplex& b) {
    if (a.re != b.re) return a.re < b.re;
    return abs(a.im) < abs(b.im);
  });

  std::vector<ExtComplex> roots;
  roots.reserve(static_cast<std::size_t>(n));
  for (const auto& z : upper) {
    roots.push_back(z);
    roots.push_back(conj(z));
  }
  return roots;
}

std::vector<ExtComplex> compute_coeffs(std::span<const ExtComplex> roots, CoeffMethod method) {
  const int n = static_cast<int>(roots.size());
  check_order(n);
  for (int k = 0; k < n; k += 2) {
    if (roots[k + 1] != conj(roots[k])) {
      throw InvariantViolation("roots are not laid out as conjugate pairs");
    }
  }

  const ExtReal inv_nfact = inv_factorial<ExtReal>(n);
  std::vector<ExtComplex> coeffs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; k += 2) {
    const ExtComplex& t = roots[k];
    ExtComplex a;
    switch (method) {
      case CoeffMethod::ProductFormula: {
        ExtComplex prod(1.0);
        for (int j = 0; j < n; ++j) {
          if (j != k) prod = prod * (t - roots[j]);
        }
        a = ExtComplex(-1.0) / (inv_nfact * prod);
        break;
      }
      case CoeffMethod::DerivativeFormula:
        a = ExtComplex(-1.0) / eval_series(n, t).derivative;
        break;
      case CoeffMethod::PowerFormula: {
        ExtComplex pw(1.0);
        for (int j = 0; j < n; ++j) pw = pw * t;
        a = ExtComplex(1.0) / (inv_nfact * pw);
        break;
      }
    }
    coeffs[k] = a;
    coeffs[k + 1] = conj(a);
  }
  return coeffs;
}

RootTable RootTable::validated(int n, std::vector<ExtComplex> roots, std::vector<ExtComplex> coeffs,
                               CoeffMethod method) {
  require(n >= kMinOrder && n <= kMaxOrder && n % 2 == 0, "order", "n=" + std::to_string(n));
  require(roots.size() == static_cast<std::size_t>(n) && coeffs.size() == static_cast<std::size_t>(n), "count",
          "expected " + std::to_string(n) + " roots and coefficients");

  double residual = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto z = to_complex_double(roots[k]);
    const auto a = to_complex_double(coeffs[k]);
    const std::string at = "k=" + std::to_string(k);
    require(std::isfinite(z.real()) && std::isfinite(z.imag()) && std::isfinite(a.real()) &&
                std::isfinite(a.imag()),
            "finite", at);
    require(z.imag() != 0.0, "non-real", at);
    const double mod = std::abs(z);
    require(mod >= 1.0 && mod <= n, "modulus", at + " |theta|=" + std::to_string(mod));
    require(z.imag() * z.imag() >= 4.0 * (z.real() + 1.0), "parabola", at);
    require(relative_residual(n, roots[k]) <= kResidualTarget, "residual", at);
    residual = std::max(residual, to_double(abs(exp_trunc(n, roots[k]))));
  }
  for (int k = 0; k < n; k += 2) {
    const std::string at = "pair " + std::to_string(k / 2);
    require(roots[k].im > ExtReal(0.0) && roots[k + 1] == conj(roots[k]), "conjugate-pairs", at);
    require(coeffs[k + 1] == conj(coeffs[k]), "coefficient-pairs", at);
    if (k >= 2) {
      const auto& prev = roots[k - 2];
      const bool ordered = prev.re < roots[k].re || (prev.re == roots[k].re && prev.im <= roots[k].im);
      require(ordered, "ordering", at);
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double dist = to_double(abs(roots[j] - roots[k]));
      require(dist >= kRootSeparation, "separation",
              "j=" + std::to_string(j) + " k=" + std::to_string(k) + " distance " + std::to_string(dist));
    }
  }

  RootTable t;
  t.n_ = n;
  t.method_ = method;
  t.roots_ = std::move(roots);
  t.coeffs_ = std::move(coeffs);
  t.residual_ = residual;
  return t;
}

RootTable build_table(int n, CoeffMethod method) {
  check_order(n);
  auto roots = compute_roots(n);
  auto coeffs = compute_coeffs(roots, method);
  return RootTable::validated(n, std::move(roots), std::move(coeffs), method);
}

const RootTable& cached_table(int n) {
  check_order(n);
  static std::array<std::once_flag, kMaxOrder + 1> flags;
  static std::array<std::unique_ptr<RootTable>, kMaxOrder + 1> tables;
  std::call_once(flags[static_cast<std::size_t>(n)],
                 [n] { tables[static_cast<std::size_t>(n)] = std::make_unique<RootTable>(build_table(n)); });
  return *tables[static_cast<std::size_t>(n)];
}

ExclusionReport check_exclusion_regions(const RootTable& table) {
  ExclusionReport r;
  r.parabola_margin = std::numeric_limits<double>::infinity();
  r.szego_min_deviation = std::numeric_limits<double>::infinity();
  const double n = table.order();
  for (const auto& root : table.roots()) {
    const auto z = to_complex_double(root);
    r.parabola_margin = std::min(r.parabola_margin, z.imag() * z.imag() - 4.0 * (z.real() + 1.0));
    const auto w = z / n;
    const double dev = std::abs(std::abs(w) * std::exp(1.0 - w.real()) - 1.0);
    r.szego_max_deviation = std::max(r.szego_max_deviation, dev);
    r.szego_min_deviation = std::min(r.szego_min_deviation, dev);
  }
  r.parabola_ok = r.parabola_margin >= 0.0;
  return r;
}

}  // namespace pfexpm
