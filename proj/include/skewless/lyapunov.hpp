#pragma once

#include "skewless/linalg.hpp"

namespace skewless {

/// Solves X = A^T X A + Q for a Schur-stable A by the doubling iteration
/// S <- S + M^T S M, M <- M^2, stopping once the update falls below
/// 1e-14 * ||S||. Throws std::domain_error if rho(A) >= 1 or the iteration
/// fails to settle.
MatrixXd discrete_lyapunov_observability(const MatrixXd& a, const MatrixXd& q);

/// Solves Y = A Y A^T + Q.
MatrixXd discrete_lyapunov_controllability(const MatrixXd& a, const MatrixXd& q);

}  // namespace skewless
