#include "skewless/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <stdexcept>

namespace skewless {

VectorXcd eigenvalues(const MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("eigenvalues(): matrix must be square");
  }
  if (m.size() == 0) return VectorXcd();
  Eigen::EigenSolver<MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalues(): eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double spectral_radius(const MatrixXd& m) {
  const VectorXcd ev = eigenvalues(m);
  return ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
}

int numerical_rank(const MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

MatrixXd pseudo_inverse(const MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return MatrixXd(m.cols(), m.rows());
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& sv = svd.singularValues();
  VectorXd inv = VectorXd::Zero(sv.size());
  if (sv.size() > 0 && sv(0) > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > rel_tol * sv(0)) inv(i) = 1.0 / sv(i);
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::Vector3cd cubic_roots(std::complex<double> a2, std::complex<double> a1,
                             std::complex<double> a0) {
  Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
  companion(0, 0) = -a2;
  companion(0, 1) = -a1;
  companion(0, 2) = -a0;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(companion, false);
  return solver.eigenvalues();
}

}  // namespace skewless
