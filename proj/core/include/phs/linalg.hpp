#pragma once

#include <complex>

#include <Eigen/Dense>

namespace phs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds shared by validation, classification and the oracle.
///
/// `herm`, `inv`, `rank` and `eig` are relative to the magnitude of the matrix
/// being tested; `pd` is absolute (H is dimensionless). `psd` is applied to
/// witnesses normalized by their natural scale, see classifier.hpp.
struct Tolerances {
  double herm = 1e-10;
  double pd = 1e-8;
  double inv = 1e-10;
  double psd = 1e-9;
  double rank = 1e-10;
  double eig = 1e-9;
};

namespace linalg {

/// Spectral norm (largest singular value); 0 for empty matrices.
double spectral_norm(const ComplexMatrix& m);

/// Singular values in descending order.
RealVector singular_values(const ComplexMatrix& m);

/// Eigenvalues of a Hermitian matrix in ascending order. Only the lower
/// triangle is read, so callers must symmetrize first if needed.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

/// ‖m − m*‖ ≤ tol·max(1, ‖m‖).
bool is_hermitian(const ComplexMatrix& m, double tol);

/// H^{1/2} and H^{-1/2} for a Hermitian positive definite matrix.
struct SqrtPair {
  ComplexMatrix sqrt;
  ComplexMatrix inv_sqrt;
};
SqrtPair hermitian_sqrt(const ComplexMatrix& h);

/// Orthonormal basis of the column space (thin Q of a column-pivoted QR,
/// truncated at the numerical rank).
ComplexMatrix orthonormal_columns(const ComplexMatrix& m, double tol_rank);

/// Rotates every column so that its first entry with modulus above
/// 1e-8·‖column‖ is real and positive.
void fix_column_phases(ComplexMatrix& m);

}  // namespace linalg
}  // namespace phs
