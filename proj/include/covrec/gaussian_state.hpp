#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

// Two-mode Gaussian states in Cartesian quadrature ordering (q_a, p_a, q_b, p_b).
//
// Conventions: [q, p] = i, so the vacuum covariance matrix is (1/2)*I and a
// quadrature at local-oscillator phase phi is x_{k,phi} = (k^dag e^{i phi} +
// k e^{-i phi})/sqrt(2). A state is fully described by its mean vector X and
// its 4x4 symmetrized covariance matrix sigma.

namespace covrec {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Mean values of (q_a, p_a, q_b, p_b).
using MeanVector = Vec4;

/// Coefficients of a quadrature observable as a linear form on
/// (q_a, p_a, q_b, p_b). Proper modes give unit Euclidean norm.
using QuadratureVector = Vec4;

/// Symplectic form Omega on (q_a, p_a, q_b, p_b): block-diagonal [[0,1],[-1,0]].
Mat4 symplectic_form();

/// Symplectic spectrum of a symmetric 4x4 matrix: the moduli of the
/// eigenvalue pairs of i*Omega*sigma, sorted ascending. Throws
/// std::invalid_argument for non-finite or singular input.
std::array<double, 2> symplectic_eigenvalues(const Mat4& sigma);

/// Uncertainty-principle check: min symplectic eigenvalue >= 1/2 - tol.
bool is_physical(const Mat4& sigma, double tol = 1e-9);

struct QuadratureMoments {
  double mean = 0.0;
  double variance = 0.0;
};

class TwoModeGaussianState {
 public:
  /// Validates that `cov` is finite, symmetric (to 1e-12; stored exactly
  /// symmetrized) and physical within `physical_tol`.
  TwoModeGaussianState(const MeanVector& mean, const Mat4& cov,
                       double physical_tol = 1e-9);

  const MeanVector& mean() const { return mean_; }
  const Mat4& cov() const { return cov_; }

 private:
  MeanVector mean_;
  Mat4 cov_;
};

/// X = 0, sigma = (1/2)*I.
TwoModeGaussianState vacuum_state();

/// Two-mode squeezed vacuum with squeezing parameter r: q-q correlated,
/// p-p anticorrelated, i.e. sigma = (1/2)[[cosh(2r) I, sinh(2r) Z],
/// [sinh(2r) Z, cosh(2r) I]] with Z = diag(1,-1). r = 0 gives vacuum.
TwoModeGaussianState two_mode_squeezed_state(double r);

/// Shift the mean by d; covariance unchanged.
TwoModeGaussianState displace(const TwoModeGaussianState& state, const Vec4& d);

/// Add nbar mean thermal photons per mode: sigma += diag(na, na, nb, nb).
/// Rejects negative nbar.
TwoModeGaussianState add_thermal_noise(const TwoModeGaussianState& state,
                                       double nbar_a, double nbar_b);

/// Characteristic function chi(lambda) = exp(-1/2 lambda^T sigma lambda
/// - i lambda^T X) at real phase-space point lambda.
std::complex<double> char_function(const TwoModeGaussianState& state,
                                   const Vec4& lambda);

/// Exact marginal moments of the quadrature v.(q_a,p_a,q_b,p_b):
/// mean = v.X, variance = v^T sigma v. Rejects non-unit-norm v.
QuadratureMoments quadrature_moments(const TwoModeGaussianState& state,
                                     const QuadratureVector& v);

}  // namespace covrec
