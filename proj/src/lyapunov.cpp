#include "skewless/lyapunov.hpp"

#include <stdexcept>

namespace skewless {
namespace {

constexpr double kRelTolerance = 1e-14;
constexpr int kMaxDoublings = 200;

// Sum_k (M^T)^k Q M^k.
MatrixXd doubling(MatrixXd m, const MatrixXd& q) {
  if (m.rows() != m.cols() || q.rows() != m.rows() || q.cols() != m.cols()) {
    throw std::invalid_argument("lyapunov: A and Q must be square and of equal size");
  }
  if (m.size() == 0) return q;
  if (spectral_radius(m) >= 1.0) throw std::domain_error("lyapunov: A is not Schur stable");
  MatrixXd s = q;
  for (int it = 0; it < kMaxDoublings; ++it) {
    const MatrixXd update = m.transpose() * s * m;
    s += update;
    const double scale = s.norm();
    if (update.norm() <= kRelTolerance * scale || scale == 0.0) {
      return 0.5 * (s + s.transpose());
    }
    m = m * m;
  }
  throw std::domain_error("lyapunov: doubling iteration did not converge");
}

}  // namespace

MatrixXd discrete_lyapunov_observability(const MatrixXd& a, const MatrixXd& q) {
  return doubling(a, q);
}

MatrixXd discrete_lyapunov_controllability(const MatrixXd& a, const MatrixXd& q) {
  return doubling(a.transpose(), q);
}

}  // namespace skewless
