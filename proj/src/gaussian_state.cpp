#include "covrec/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace covrec {

Mat4 symplectic_form() {
  Mat4 omega = Mat4::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

std::array<double, 2> symplectic_eigenvalues(const Mat4& sigma) {
  if (!sigma.allFinite()) {
    throw std::invalid_argument("symplectic_eigenvalues: non-finite matrix");
  }
  if (std::abs(sigma.determinant()) < 1e-250) {
    throw std::invalid_argument("symplectic_eigenvalues: singular matrix");
  }
  // Eigenvalues of Omega*sigma come in pairs +-i*nu; the moduli collapse the
  // pairs onto (nu1, nu1, nu2, nu2).
  Eigen::EigenSolver<Mat4> solver(symplectic_form() * sigma, false);
  Eigen::Vector4d moduli = solver.eigenvalues().cwiseAbs();
  std::sort(moduli.data(), moduli.data() + 4);
  return {0.5 * (moduli[0] + moduli[1]), 0.5 * (moduli[2] + moduli[3])};
}

bool is_physical(const Mat4& sigma, double tol) {
  if (!sigma.allFinite()) return false;
  // A covariance matrix must be positive as well: the modulus-based
  // symplectic spectrum alone cannot see a negative-definite direction.
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (sigma + sigma.transpose()));
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -tol * scale) return false;
  Eigen::EigenSolver<Mat4> solver(symplectic_form() * sigma, false);
  return solver.eigenvalues().cwiseAbs().minCoeff() >= 0.5 - tol;
}

TwoModeGaussianState::TwoModeGaussianState(const MeanVector& mean,
                                           const Mat4& cov, double physical_tol)
    : mean_(mean) {
  if (!mean.allFinite()) {
    throw std::invalid_argument("TwoModeGaussianState: non-finite mean");
  }
  if (!cov.allFinite()) {
    throw std::invalid_argument("TwoModeGaussianState: non-finite covariance");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("TwoModeGaussianState: covariance not symmetric");
  }
  cov_ = 0.5 * (cov + cov.transpose());
  if (!is_physical(cov_, physical_tol)) {
    throw std::invalid_argument(
        "TwoModeGaussianState: covariance violates the uncertainty bound "
        "(min symplectic eigenvalue < 1/2)");
  }
}

TwoModeGaussianState vacuum_state() {
  return TwoModeGaussianState(Vec4::Zero(), 0.5 * Mat4::Identity());
}

TwoModeGaussianState two_mode_squeezed_state(double r) {
  if (!std::isfinite(r)) {
    throw std::invalid_argument("two_mode_squeezed_state: non-finite r");
  }
  const double c = 0.5 * std::cosh(2.0 * r);
  const double s = 0.5 * std::sinh(2.0 * r);
  Mat4 cov = Mat4::Zero();
  cov.diagonal() << c, c, c, c;
  cov(0, 2) = cov(2, 0) = s;
  cov(1, 3) = cov(3, 1) = -s;
  return TwoModeGaussianState(Vec4::Zero(), cov);
}

TwoModeGaussianState displace(const TwoModeGaussianState& state, const Vec4& d) {
  if (!d.allFinite()) {
    throw std::invalid_argument("displace: non-finite displacement");
  }
  return TwoModeGaussianState(state.mean() + d, state.cov());
}

TwoModeGaussianState add_thermal_noise(const TwoModeGaussianState& state,
                                       double nbar_a, double nbar_b) {
  if (!(nbar_a >= 0.0) || !(nbar_b >= 0.0)) {
    throw std::invalid_argument("add_thermal_noise: mean photon numbers must be >= 0");
  }
  Mat4 cov = state.cov();
  cov(0, 0) += nbar_a;
  cov(1, 1) += nbar_a;
  cov(2, 2) += nbar_b;
  cov(3, 3) += nbar_b;
  return TwoModeGaussianState(state.mean(), cov);
}

std::complex<double> char_function(const TwoModeGaussianState& state,
                                   const Vec4& lambda) {
  if (!lambda.allFinite()) {
    throw std::invalid_argument("char_function: non-finite lambda");
  }
  const double quad = lambda.dot(state.cov() * lambda);
  const double phase = lambda.dot(state.mean());
  return std::exp(std::complex<double>(-0.5 * quad, -phase));
}

QuadratureMoments quadrature_moments(const TwoModeGaussianState& state,
                                     const QuadratureVector& v) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("quadrature_moments: v must have unit norm");
  }
  return {v.dot(state.mean()), v.dot(state.cov() * v)};
}

}  // namespace covrec
