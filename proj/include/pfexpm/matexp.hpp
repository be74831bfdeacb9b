#pragma once

// exp(A) and exp(A) v for Hermitian A through R_n(A) = sum_k a_k (A + theta_k I)^{-1}.
// One task per conjugate pair; tasks run on a small thread pool and their
// results are summed in ascending pair order, so the output does not depend on
// the thread count.

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pfexpm/linalg.hpp"

namespace pfexpm {

enum class Mode { Full, Action };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct Shift {
  enum class Kind { None, Auto, Fixed };
  Kind kind = Kind::None;
  double c = 0.0;

  static Shift none() { return {}; }
  static Shift automatic() { return {Kind::Auto, 0.0}; }
  static Shift fixed(double c) { return {Kind::Fixed, c}; }
};

/// "none", "auto" or "c=<real>".
std::string to_string(const Shift& shift);
Shift parse_shift(std::string_view text);

struct ExpOptions {
  int n = 16;
  Mode mode = Mode::Full;
  Shift shift;
  bool parallel = true;
  int threads = 0;  // 0: hardware concurrency

  /// Throws OrderOutOfRange or BadSpec.
  void validate() const;
};

using Seconds = std::chrono::duration<double>;

template <class Real>
struct ExpResult {
  CMatrix<Real> matrix;  // Full mode
  CVector<Real> vector;  // Action mode
  /// Absolute bound without shift; relative to ||exp(A)||_2 with a shift.
  std::optional<double> error_bound;
  bool bound_is_relative = false;
  double shift = 0.0;
  std::vector<Seconds> per_term_times;
  Seconds t_para{};   // max of per_term_times
  Seconds t_total{};  // wall time of the call
  std::vector<std::string> warnings;
};

/// Largest value of c for which e^c is finite in binary64.
double max_shift();

/// R_n(A). A shift in opts is honoured as in matexp_shifted.
template <class Real>
ExpResult<Real> matexp_full(const HermitianMatrix<Real>& A, const ExpOptions& opts);

/// R_n(A) v.
template <class Real>
ExpResult<Real> matexp_action(const HermitianMatrix<Real>& A, const CVector<Real>& v, const ExpOptions& opts);

/// e^c R_n(A - cI) (or its action on v). Auto takes c from exact bounds on A when
/// present and from Gershgorin discs otherwise. Throws Overflow when e^c is not
/// representable, BadSpec when opts.shift is None.
template <class Real>
ExpResult<Real> matexp_shifted(const HermitianMatrix<Real>& A, const ExpOptions& opts);
template <class Real>
ExpResult<Real> matexp_shifted(const HermitianMatrix<Real>& A, const CVector<Real>& v, const ExpOptions& opts);

/// R_n(-rho) - e^{-rho} with rho the spectral radius of the enclosure. Needs the
/// enclosure inside (-inf, 0] up to rounding (BadSpec otherwise) and n > 2 rho
/// (OrderTooSmall otherwise).
double apriori_bound(const SpectralBounds& bounds, int n);

}  // namespace pfexpm
