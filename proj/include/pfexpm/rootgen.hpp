#pragma once

// Roots of the truncated exponential series exp_n and the coefficients of
// the partial fraction expansion of 1/exp_n(-z), computed and stored in
// double-double precision.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfexpm/errors.hpp"
#include "pfexpm/ext_real.hpp"

namespace pfexpm {

inline constexpr int kMinOrder = 2;
inline constexpr int kMaxOrder = 64;

/// Lower bound on the distance between two roots of exp_n, uniform in n.
inline constexpr double kRootSeparation = 0.29044;

/// Acceptance threshold for |exp_n(theta)| relative to max(1, |exp_n'(theta)|).
inline constexpr double kResidualTarget = 1e-10;

enum class CoeffMethod {
  ProductFormula,     // a_k = -n! / prod_{j != k} (theta_k - theta_j)
  DerivativeFormula,  // a_k = -1 / exp_n'(theta_k)
  PowerFormula,       // a_k = n! / theta_k^n
};

std::string_view to_string(CoeffMethod method);
CoeffMethod parse_coeff_method(std::string_view name);

/// Throws OrderOutOfRange unless n is even and 2 <= n <= 64.
void check_order(int n);

/// Roots of exp_n ordered as conjugate pairs: index 2l holds the root with
/// positive imaginary part, index 2l+1 its exact conjugate; pairs ascend by
/// real part, then by |imaginary part|.
std::vector<ExtComplex> compute_roots(int n);

/// Partial fraction coefficients for roots laid out as returned by
/// compute_roots. Coefficient 2l+1 is the exact conjugate of coefficient 2l.
std::vector<ExtComplex> compute_coeffs(std::span<const ExtComplex> roots, CoeffMethod method);

/// |exp_n(z)| / max(1, |exp_n'(z)|) evaluated in double-double.
double relative_residual(int n, const ExtComplex& z);

/// Immutable, validated set of roots and coefficients for one order n.
class RootTable {
 public:
  /// Checks every table invariant; throws InvariantViolation naming the
  /// first failed check.
  static RootTable validated(int n, std::vector<ExtComplex> roots, std::vector<ExtComplex> coeffs,
                             CoeffMethod method);

  int order() const { return n_; }
  CoeffMethod method() const { return method_; }
  std::span<const ExtComplex> roots() const { return roots_; }
  std::span<const ExtComplex> coeffs() const { return coeffs_; }
  /// max_k |exp_n(theta_k)|.
  double residual() const { return residual_; }

  friend bool operator==(const RootTable& a, const RootTable& b) {
    return a.n_ == b.n_ && a.method_ == b.method_ && a.roots_ == b.roots_ && a.coeffs_ == b.coeffs_;
  }

 private:
  RootTable() = default;

  int n_ = 0;
  CoeffMethod method_ = CoeffMethod::ProductFormula;
  std::vector<ExtComplex> roots_;
  std::vector<ExtComplex> coeffs_;
  double residual_ = 0.0;
};

RootTable build_table(int n, CoeffMethod method = CoeffMethod::ProductFormula);

/// Process-wide table for order n built with the product formula. Built on
/// first use; safe to call from several threads.
const RootTable& cached_table(int n);

// Text format: "pfexpm-table v1", "n=<int>", "method=<name>", n lines
// "theta re_hi re_lo im_hi im_lo", n lines "a re_hi re_lo im_hi im_lo".
std::string format_table(const RootTable& table);
RootTable parse_table(std::string_view text);
void save_table(const RootTable& table, const std::filesystem::path& path);
RootTable load_table(const std::filesystem::path& path);

struct ExclusionReport {
  /// No root satisfies Im^2 < 4 (Re + 1).
  bool parabola_ok = false;
  /// min_k Im(theta_k)^2 - 4 (Re(theta_k) + 1); non-negative when parabola_ok.
  double parabola_margin = 0.0;
  /// | |w e^{1-w}| - 1 | over the normalized roots w = theta / n.
  double szego_max_deviation = 0.0;
  double szego_min_deviation = 0.0;
};

ExclusionReport check_exclusion_regions(const RootTable& table);

}  // namespace pfexpm
