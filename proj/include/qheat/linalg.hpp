#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace qheat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// exp(-i H dt) for Hermitian H, exactly unitary up to rounding.
Matrix unitary_exp(const Matrix& hermitian, double dt);

/// Matrix logarithm of a positive definite Hermitian matrix.
Matrix hermitian_log(const Matrix& positive);

/// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
ComplexVector vectorize(const Matrix& m);
Matrix unvectorize(const ComplexVector& v, std::size_t dimension);

/// Superoperator of X -> A X B in the column-stacking convention.
Matrix sandwich(const Matrix& left, const Matrix& right);

Matrix hermitian_part(const Matrix& m);

/// Trace norm distance 0.5 ||a - b||_1 for Hermitian arguments.
double trace_distance(const Matrix& a, const Matrix& b);

/// Von Neumann entropy -Tr(rho ln rho); zero eigenvalues contribute nothing.
double von_neumann_entropy(const Matrix& rho);

}  // namespace qheat
