#include "qheat/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qheat {

Matrix unitary_exp(const Matrix& hermitian, double dt) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(hermitian));
  ComplexVector phases(eig.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::polar(1.0, -eig.eigenvalues()(k) * dt);
  }
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

Matrix hermitian_log(const Matrix& positive) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(positive));
  RealVector logs = eig.eigenvalues().array().log().matrix();
  return eig.eigenvectors() * logs.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
}

ComplexVector vectorize(const Matrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

Matrix unvectorize(const ComplexVector& v, std::size_t dimension) {
  const auto d = static_cast<Eigen::Index>(dimension);
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

Matrix sandwich(const Matrix& left, const Matrix& right) {
  const Matrix rt = right.transpose();
  const Eigen::Index d = left.rows();
  Matrix out(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      out.block(i * d, j * d, d, d) = rt(i, j) * left;
    }
  }
  return out;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(a - b), Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

double von_neumann_entropy(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(rho), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    const double p = eig.eigenvalues()(k);
    if (p > 0.0) {
      s -= p * std::log(p);
    }
  }
  return s;
}

}  // namespace qheat
