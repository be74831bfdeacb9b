#include "pfexpm/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pfexpm {

template <class Real>
HermitianMatrix<Real>::HermitianMatrix(CMatrix<Real> entries, double tol) : a_(std::move(entries)) {
  check(tol);
  real_ = (a_.imag().array() == Real(0)).all();
}

template <class Real>
HermitianMatrix<Real>::HermitianMatrix(const RMatrix<Real>& entries, double tol)
    : a_(entries.template cast<std::complex<Real>>()), real_(true) {
  check(tol);
}

template <class Real>
void HermitianMatrix<Real>::check(double tol) const {
  if (a_.rows() != a_.cols()) {
    throw InvariantViolation("matrix is " + std::to_string(a_.rows()) + "x" + std::to_string(a_.cols()) +
                             ", expected square");
  }
  if (a_.rows() == 0) throw InvariantViolation("matrix is empty");
  if (!a_.allFinite()) throw InvariantViolation("matrix has non-finite entries");
  const double scale = std::max(1.0, static_cast<double>(a_.cwiseAbs().maxCoeff()));
  const double skew = static_cast<double>((a_ - a_.adjoint()).cwiseAbs().maxCoeff());
  if (skew > tol * scale) {
    throw InvariantViolation("matrix is not Hermitian: max |A - A^H| = " + std::to_string(skew));
  }
}

template <class Real>
HermitianMatrix<Real> HermitianMatrix<Real>::shifted(Real c) const {
  HermitianMatrix out;
  out.a_ = a_;
  out.a_.diagonal().array() -= std::complex<Real>(c);
  out.real_ = real_;
  if (bounds_) {
    const double cd = static_cast<double>(c);
    out.bounds_ = SpectralBounds{bounds_->lo - cd, bounds_->hi - cd, bounds_->exact};
  }
  return out;
}

template <class Real>
ShiftedFactorization<Real>::ShiftedFactorization(const HermitianMatrix<Real>& A, std::complex<Real> theta) {
  CMatrix<Real> m = A.entries();
  m.diagonal().array() += theta;
  lu_.compute(m);
  const auto pivots = lu_.matrixLU().diagonal().cwiseAbs();
  if (!(pivots.minCoeff() >= std::numeric_limits<Real>::min()) || !pivots.allFinite()) {
    throw SingularSystem("A + theta I has a vanishing pivot");
  }
}

template <class Real>
CMatrix<Real> ShiftedFactorization<Real>::solve(const CMatrix<Real>& rhs) const {
  return lu_.solve(rhs);
}

template <class Real>
CMatrix<Real> ShiftedFactorization<Real>::solve_conjugate(const CMatrix<Real>& rhs) const {
  return lu_.adjoint().solve(rhs);
}

template <class Real>
CMatrix<Real> ShiftedFactorization<Real>::inverse() const {
  return lu_.inverse();
}

template <class Real>
CMatrix<Real> shifted_solve(const HermitianMatrix<Real>& A, std::complex<Real> theta, const CMatrix<Real>& V) {
  return ShiftedFactorization<Real>(A, theta).solve(V);
}

template <class Real>
CMatrix<Real> shifted_inverse(const HermitianMatrix<Real>& A, std::complex<Real> theta) {
  return ShiftedFactorization<Real>(A, theta).inverse();
}

template <class Real>
CMatrix<Real> HermitianEigen<Real>::unitary() const {
  return real ? CMatrix<Real>(real_vectors.template cast<std::complex<Real>>()) : vectors;
}

template <class Real>
SpectralBounds HermitianEigen<Real>::bounds() const {
  return {static_cast<double>(values.minCoeff()), static_cast<double>(values.maxCoeff()), true};
}

template <class Real>
HermitianEigen<Real> eig_hermitian(const HermitianMatrix<Real>& A) {
  HermitianEigen<Real> out;
  out.real = A.is_real();
  if (out.real) {
    Eigen::SelfAdjointEigenSolver<RMatrix<Real>> es(A.real_part());
    if (es.info() != Eigen::Success) throw ConvergenceFailure("symmetric eigensolver did not converge");
    out.values = es.eigenvalues();
    out.real_vectors = es.eigenvectors();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(A.entries());
    if (es.info() != Eigen::Success) throw ConvergenceFailure("Hermitian eigensolver did not converge");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  }
  return out;
}

template <class Real>
CMatrix<Real> exp_oracle(const HermitianEigen<Real>& eig) {
  const RVector<Real> e = eig.values.array().exp();
  if (eig.real) {
    const RMatrix<Real> w = eig.real_vectors * e.asDiagonal();
    const RMatrix<Real> r = w * eig.real_vectors.transpose();
    return r.template cast<std::complex<Real>>();
  }
  const CMatrix<Real> w = eig.vectors * e.template cast<std::complex<Real>>().asDiagonal();
  return w * eig.vectors.adjoint();
}

template <class Real>
CMatrix<Real> exp_oracle(const HermitianMatrix<Real>& A) {
  return exp_oracle(eig_hermitian(A));
}

template <class Real>
CVector<Real> exp_oracle_action(const HermitianEigen<Real>& eig, const CVector<Real>& v) {
  const RVector<Real> e = eig.values.array().exp();
  if (eig.real) {
    const CVector<Real> c = eig.real_vectors.transpose().template cast<std::complex<Real>>() * v;
    return eig.real_vectors.template cast<std::complex<Real>>() *
           (e.template cast<std::complex<Real>>().array() * c.array()).matrix();
  }
  const CVector<Real> c = eig.vectors.adjoint() * v;
  return eig.vectors * (e.template cast<std::complex<Real>>().array() * c.array()).matrix();
}

template <class Real>
CVector<Real> exp_oracle_action(const HermitianMatrix<Real>& A, const CVector<Real>& v) {
  return exp_oracle_action(eig_hermitian(A), v);
}

template <class Real>
Real norm2(const CMatrix<Real>& M) {
  if (M.size() == 0) return Real(0);
  if ((M.imag().array() == Real(0)).all()) {
    Eigen::BDCSVD<RMatrix<Real>> svd(M.real());
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<CMatrix<Real>> svd(M);
  return svd.singularValues()(0);
}

template <class Real>
Real hermitian_norm2(const CMatrix<Real>& M) {
  if (M.size() == 0) return Real(0);
  if ((M.imag().array() == Real(0)).all()) {
    const RMatrix<Real> r = M.real();
    Eigen::SelfAdjointEigenSolver<RMatrix<Real>> es(r, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceFailure("symmetric eigensolver did not converge");
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("Hermitian eigensolver did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

template <class Real>
SpectralBounds gershgorin_bounds(const HermitianMatrix<Real>& A) {
  const auto& a = A.entries();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Real r = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
    if (r < 0) r = 0;
    const Real c = a(i, i).real();
    lo = std::min(lo, static_cast<double>(c - r));
    hi = std::max(hi, static_cast<double>(c + r));
  }
  return {lo, hi, false};
}

#define PFEXPM_INSTANTIATE(R)                                                                          \
  template class HermitianMatrix<R>;                                                                   \
  template class ShiftedFactorization<R>;                                                              \
  template struct HermitianEigen<R>;                                                                   \
  template CMatrix<R> shifted_solve<R>(const HermitianMatrix<R>&, std::complex<R>, const CMatrix<R>&); \
  template CMatrix<R> shifted_inverse<R>(const HermitianMatrix<R>&, std::complex<R>);                  \
  template HermitianEigen<R> eig_hermitian<R>(const HermitianMatrix<R>&);                              \
  template CMatrix<R> exp_oracle<R>(const HermitianEigen<R>&);                                         \
  template CMatrix<R> exp_oracle<R>(const HermitianMatrix<R>&);                                        \
  template CVector<R> exp_oracle_action<R>(const HermitianEigen<R>&, const CVector<R>&);               \
  template CVector<R> exp_oracle_action<R>(const HermitianMatrix<R>&, const CVector<R>&);              \
  template R norm2<R>(const CMatrix<R>&);                                                              \
  template R hermitian_norm2<R>(const CMatrix<R>&);                                                    \
  template SpectralBounds gershgorin_bounds<R>(const HermitianMatrix<R>&);

PFEXPM_INSTANTIATE(double)
PFEXPM_INSTANTIATE(long double)

#undef PFEXPM_INSTANTIATE

}  // namespace pfexpm
