#include "covrec/random_states.hpp"

#include <cmath>

namespace covrec {

Mat4 rotation_symplectic(double phi_a, double phi_b) {
  Mat4 s = Mat4::Zero();
  s(0, 0) = std::cos(phi_a);
  s(0, 1) = std::sin(phi_a);
  s(1, 0) = -std::sin(phi_a);
  s(1, 1) = std::cos(phi_a);
  s(2, 2) = std::cos(phi_b);
  s(2, 3) = std::sin(phi_b);
  s(3, 2) = -std::sin(phi_b);
  s(3, 3) = std::cos(phi_b);
  return s;
}

Mat4 squeeze_symplectic(double r_a, double r_b) {
  Mat4 s = Mat4::Zero();
  s.diagonal() << std::exp(r_a), std::exp(-r_a), std::exp(r_b), std::exp(-r_b);
  return s;
}

Mat4 two_mode_squeeze_symplectic(double r) {
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  Mat4 m = Mat4::Zero();
  m.diagonal() << c, c, c, c;
  m(0, 2) = m(2, 0) = s;
  m(1, 3) = m(3, 1) = -s;
  return m;
}

Mat4 beam_splitter_symplectic(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = c;
  m(2, 2) = m(3, 3) = c;
  m(0, 2) = m(1, 3) = s;
  m(2, 0) = m(3, 1) = -s;
  return m;
}

Mat4 random_symplectic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> squeeze(-0.8, 0.8);
  return rotation_symplectic(angle(rng), angle(rng)) *
         beam_splitter_symplectic(angle(rng)) *
         squeeze_symplectic(squeeze(rng), squeeze(rng)) *
         two_mode_squeeze_symplectic(squeeze(rng)) *
         rotation_symplectic(angle(rng), angle(rng));
}

TwoModeGaussianState random_physical_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> nu(0.5, 2.0);
  std::uniform_real_distribution<double> mean(-2.0, 2.0);
  const double nu1 = nu(rng);
  const double nu2 = nu(rng);
  Vec4 d(nu1, nu1, nu2, nu2);
  const Mat4 s = random_symplectic(rng);
  Mat4 cov = s.transpose() * d.asDiagonal() * s;
  cov = 0.5 * (cov + cov.transpose());
  Vec4 x(mean(rng), mean(rng), mean(rng), mean(rng));
  // the spectrum sits on or above 1/2 by construction; loosen the tolerance
  // to absorb conjugation roundoff
  return TwoModeGaussianState(x, cov, 1e-7);
}

}  // namespace covrec
