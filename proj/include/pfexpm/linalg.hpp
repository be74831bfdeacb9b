#pragma once

// Dense linear algebra for the engine: shifted LU solves, the Hermitian
// eigendecomposition used as the exp oracle, norms and spectral enclosures.
// Everything is templated on the real scalar and instantiated for double and
// long double.

#include <algorithm>
#include <complex>
#include <optional>

#include <Eigen/Dense>

#include "pfexpm/errors.hpp"

namespace pfexpm {

template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Enclosure [lo, hi] of the spectrum. exact: taken from an eigendecomposition
/// (up to rounding) rather than from Gershgorin discs.
struct SpectralBounds {
  double lo = 0.0;
  double hi = 0.0;
  bool exact = false;

  /// max |lambda| over the enclosure.
  double radius() const { return std::max(-lo, hi); }
};

/// Dense square matrix checked to be Hermitian on construction:
/// max |A_ij - conj(A_ji)| <= tol max(1, max |A_ij|). Throws InvariantViolation.
template <class Real>
class HermitianMatrix {
 public:
  static constexpr double kDefaultTolerance = 1e-12;

  explicit HermitianMatrix(CMatrix<Real> entries, double tol = kDefaultTolerance);
  explicit HermitianMatrix(const RMatrix<Real>& entries, double tol = kDefaultTolerance);

  Eigen::Index dim() const { return a_.rows(); }
  const CMatrix<Real>& entries() const { return a_; }
  /// True when every imaginary part is exactly zero.
  bool is_real() const { return real_; }
  RMatrix<Real> real_part() const { return a_.real(); }

  const std::optional<SpectralBounds>& bounds() const { return bounds_; }
  void set_bounds(const SpectralBounds& b) { bounds_ = b; }

  /// A - cI; known bounds move with it.
  HermitianMatrix shifted(Real c) const;

 private:
  HermitianMatrix() = default;
  void check(double tol) const;

  CMatrix<Real> a_;
  bool real_ = false;
  std::optional<SpectralBounds> bounds_;
};

/// LU factorization with partial pivoting of A + theta I. Because A is
/// Hermitian, (A + conj(theta) I) is the adjoint and reuses the same factors.
template <class Real>
class ShiftedFactorization {
 public:
  /// Throws SingularSystem if a pivot underflows.
  ShiftedFactorization(const HermitianMatrix<Real>& A, std::complex<Real> theta);

  CMatrix<Real> solve(const CMatrix<Real>& rhs) const;
  /// Solves with A + conj(theta) I.
  CMatrix<Real> solve_conjugate(const CMatrix<Real>& rhs) const;
  CMatrix<Real> inverse() const;

 private:
  Eigen::PartialPivLU<CMatrix<Real>> lu_;
};

template <class Real>
CMatrix<Real> shifted_solve(const HermitianMatrix<Real>& A, std::complex<Real> theta, const CMatrix<Real>& V);
template <class Real>
CMatrix<Real> shifted_inverse(const HermitianMatrix<Real>& A, std::complex<Real> theta);

/// A = U diag(values) U^H, values ascending. For real input the vectors are
/// real and kept in real_vectors; vectors holds the complex form otherwise.
template <class Real>
struct HermitianEigen {
  RVector<Real> values;
  CMatrix<Real> vectors;
  RMatrix<Real> real_vectors;
  bool real = false;

  CMatrix<Real> unitary() const;
  SpectralBounds bounds() const;
};

/// Householder tridiagonalization followed by implicit QR. Throws
/// ConvergenceFailure if the iteration does not converge.
template <class Real>
HermitianEigen<Real> eig_hermitian(const HermitianMatrix<Real>& A);

/// U diag(exp(values)) U^H.
template <class Real>
CMatrix<Real> exp_oracle(const HermitianEigen<Real>& eig);
template <class Real>
CMatrix<Real> exp_oracle(const HermitianMatrix<Real>& A);
/// U diag(exp(values)) U^H v.
template <class Real>
CVector<Real> exp_oracle_action(const HermitianEigen<Real>& eig, const CVector<Real>& v);
template <class Real>
CVector<Real> exp_oracle_action(const HermitianMatrix<Real>& A, const CVector<Real>& v);

/// Largest singular value.
template <class Real>
Real norm2(const CMatrix<Real>& M);
/// ||M||_2 for a Hermitian M as max |eigenvalue|; cheaper than an SVD.
template <class Real>
Real hermitian_norm2(const CMatrix<Real>& M);

/// [min_i (A_ii - r_i), max_i (A_ii + r_i)], r_i = sum_{j != i} |A_ij|.
template <class Real>
SpectralBounds gershgorin_bounds(const HermitianMatrix<Real>& A);

}  // namespace pfexpm
