#include "phs/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace phs::linalg {

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix skew = m - m.adjoint();
  return spectral_norm(skew) <= tol * std::max(1.0, spectral_norm(m));
}

SqrtPair hermitian_sqrt(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const RealVector d = es.eigenvalues();
  const ComplexMatrix& u = es.eigenvectors();
  const RealVector root = d.cwiseMax(0.0).cwiseSqrt();
  SqrtPair out;
  out.sqrt = u * root.cast<Complex>().asDiagonal() * u.adjoint();
  out.inv_sqrt = u * root.cwiseInverse().cast<Complex>().asDiagonal() * u.adjoint();
  return out;
}

ComplexMatrix orthonormal_columns(const ComplexMatrix& m, double tol_rank) {
  if (m.cols() == 0) return ComplexMatrix(m.rows(), 0);
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(m);
  qr.setThreshold(tol_rank);
  const Eigen::Index r = qr.rank();
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m.rows(), r);
  fix_column_phases(q);
  return q;
}

void fix_column_phases(ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double norm = m.col(j).norm();
    if (norm == 0.0) continue;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex v = m(i, j);
      if (std::abs(v) > 1e-8 * norm) {
        m.col(j) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  }
}

}  // namespace phs::linalg
