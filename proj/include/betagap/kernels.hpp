#pragma once

// Dense self-adjoint kernels: Householder tridiagonalisation, implicit-shift QL,
// and Bunch-Kaufman inertia. General (nonsymmetric) problems go through Eigen.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace betagap {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

}  // namespace betagap

namespace betagap::kernels {

/// Symmetric tridiagonal; off[i] couples rows i and i+1 (off.size() == n-1).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// Householder reduction of a real symmetric matrix (both triangles valid).
/// When q is non-null it receives Q with A = Q T Q^T.
Tridiagonal tridiagonalize(RealMatrix a, RealMatrix* q = nullptr);

/// Householder reduction of a complex Hermitian matrix to a real tridiagonal;
/// the phases of the sub-diagonal are absorbed into q so that A = Q T Q^*.
Tridiagonal tridiagonalize(ComplexMatrix a, ComplexMatrix* q = nullptr);

/// Implicit-shift QL. Eigenvalues overwrite t.diag (unsorted). Columns of z
/// are rotated along; pass the Q from tridiagonalize() to get eigenvectors.
void ql_implicit(Tridiagonal& t, RealMatrix* z = nullptr);
void ql_implicit(Tridiagonal& t, ComplexMatrix* z);

/// Ascending eigenvalues of a symmetric tridiagonal.
std::vector<double> tridiagonal_eigenvalues(Tridiagonal t);

std::vector<double> symmetric_eigenvalues(const RealMatrix& a);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

struct RealEigen {
  std::vector<double> values;  // ascending
  RealMatrix vectors;          // column j pairs with values[j]
};

struct ComplexEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

RealEigen symmetric_eigen(const RealMatrix& a);
ComplexEigen hermitian_eigen(const ComplexMatrix& a);

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

/// Sylvester inertia from a Bunch-Kaufman LDL^T factorisation. Only the lower
/// triangle is read. 1x1 pivots with |d| <= zero_tol count as zero.
Inertia symmetric_inertia(RealMatrix a, double zero_tol = 0.0);

}  // namespace betagap::kernels
