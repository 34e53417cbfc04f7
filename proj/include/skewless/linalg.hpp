#pragma once

#include <Eigen/Dense>

namespace skewless {

using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Eigenvalues of a general real square matrix. Empty input gives an empty vector.
VectorXcd eigenvalues(const MatrixXd& m);

/// Largest eigenvalue modulus; 0 for an empty matrix.
double spectral_radius(const MatrixXd& m);

/// Numerical rank with singular values compared against rel_tol * sigma_max.
int numerical_rank(const MatrixXd& m, double rel_tol);

/// Moore-Penrose inverse through an SVD, dropping singular values below
/// rel_tol * sigma_max.
MatrixXd pseudo_inverse(const MatrixXd& m, double rel_tol);

/// Roots of the monic cubic x^3 + a2 x^2 + a1 x + a0 via its companion matrix.
Eigen::Vector3cd cubic_roots(std::complex<double> a2, std::complex<double> a1,
                             std::complex<double> a0);

}  // namespace skewless
