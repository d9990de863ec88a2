#include <doctest.h>

#include <cmath>
#include <random>

#include "covrec/diagnostics.hpp"
#include "covrec/gaussian_state.hpp"
#include "covrec/random_states.hpp"

using namespace covrec;

namespace {

// Oracle for the two-mode squeezed covariance, independent of the closed
// form used by the implementation: conjugate the vacuum with the squeezer
// S = [[cosh r I, sinh r Z], [sinh r Z, cosh r I]], Z = diag(1,-1).
Mat4 tmss_cov_oracle(double r) {
  Mat4 s = Mat4::Zero();
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  s.diagonal() << ch, ch, ch, ch;
  s(0, 2) = s(2, 0) = sh;
  s(1, 3) = s(3, 1) = -sh;
  return s * (0.5 * Mat4::Identity()) * s.transpose();
}

Vec4 random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec4 v(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  return v / v.norm();
}

}  // namespace

TEST_CASE("vacuum state") {
  const auto vac = vacuum_state();
  CHECK(vac.mean() == Vec4::Zero());
  CHECK(vac.cov() == 0.5 * Mat4::Identity());
  const auto nu = symplectic_eigenvalues(vac.cov());
  CHECK(nu[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(nu[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(purity(vac.cov()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-mode squeezed state matches the squeezer-conjugation oracle") {
  const double r = 0.5;
  const auto state = two_mode_squeezed_state(r);
  const Mat4 expected = tmss_cov_oracle(r);
  CHECK((state.cov() - expected).cwiseAbs().maxCoeff() < 1e-14);

  // frozen entries from the oracle: cosh(1)/2 and sinh(1)/2
  CHECK(state.cov()(0, 0) == doctest::Approx(0.7715403174076219).epsilon(1e-12));
  CHECK(state.cov()(0, 2) == doctest::Approx(0.5876005968219007).epsilon(1e-12));
  CHECK(state.cov()(1, 3) == doctest::Approx(-0.5876005968219007).epsilon(1e-12));
  CHECK(state.cov().determinant() == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(purity(state.cov()) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(two_mode_squeezed_state(0.0).cov() == vacuum_state().cov());
  CHECK_THROWS_AS(two_mode_squeezed_state(std::nan("")), std::invalid_argument);
}

TEST_CASE("displacement shifts means and leaves the covariance alone") {
  const auto vac = vacuum_state();
  const auto shifted = displace(vac, Vec4(1, 0, 0, 0));
  CHECK(shifted.mean() == Vec4(1, 0, 0, 0));
  CHECK(shifted.cov() == vac.cov());

  const auto state = two_mode_squeezed_state(0.5);
  CHECK(displace(state, Vec4::Zero()).mean() == state.mean());
  const auto moved = displace(state, Vec4(0, 2, 0, 0));
  CHECK(moved.mean()(1) == 2.0);
  CHECK(moved.cov() == state.cov());
}

TEST_CASE("thermal noise") {
  const auto vac = vacuum_state();
  const auto warm = add_thermal_noise(vac, 0.5, 0.5);
  CHECK(warm.cov() == Mat4::Identity());
  CHECK(purity(warm.cov()) == doctest::Approx(0.25).epsilon(1e-12));

  const auto state = two_mode_squeezed_state(0.5);
  CHECK(add_thermal_noise(state, 0.0, 0.0).cov() == state.cov());
  const auto noisy = add_thermal_noise(state, 1.0, 1.0);
  CHECK(log_negativity(noisy.cov()) < log_negativity(state.cov()));

  CHECK_THROWS_AS(add_thermal_noise(vac, -0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(add_thermal_noise(vac, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("characteristic function values") {
  const auto vac = vacuum_state();
  CHECK(char_function(vac, Vec4::Zero()) == std::complex<double>(1.0, 0.0));

  const auto chi = char_function(vac, Vec4(1, 0, 0, 0));
  CHECK(chi.real() == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));
  CHECK(chi.imag() == doctest::Approx(0.0));

  const auto shifted = displace(vac, Vec4(1, 0, 0, 0));
  // lambda orthogonal to the mean: no phase
  const auto chi_perp = char_function(shifted, Vec4(0, 1, 0, 0));
  CHECK(chi_perp.real() == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));
  CHECK(chi_perp.imag() == doctest::Approx(0.0));
  // lambda along the mean: exp(-1/4 - i)
  const auto chi_par = char_function(shifted, Vec4(1, 0, 0, 0));
  CHECK(chi_par.real() == doctest::Approx(std::exp(-0.25) * std::cos(1.0)).epsilon(1e-12));
  CHECK(chi_par.imag() == doctest::Approx(-std::exp(-0.25) * std::sin(1.0)).epsilon(1e-12));
}

TEST_CASE("quadrature moments") {
  const auto vac = vacuum_state();
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10; ++k) {
    const auto m = quadrature_moments(vac, random_unit_vector(rng));
    CHECK(m.mean == doctest::Approx(0.0));
    CHECK(m.variance == doctest::Approx(0.5).epsilon(1e-12));
  }

  const auto state = two_mode_squeezed_state(0.5);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Vec4 xc(inv_sqrt2, 0, inv_sqrt2, 0);
  const auto mc = quadrature_moments(state, xc);
  CHECK(mc.mean == doctest::Approx(0.0));
  CHECK(mc.variance == doctest::Approx(xc.dot(tmss_cov_oracle(0.5) * xc)).epsilon(1e-13));
  CHECK(mc.variance == doctest::Approx(1.3591409142295226).epsilon(1e-12));

  const auto shifted = displace(vac, Vec4(1, 0, 0, 0));
  const auto ms = quadrature_moments(shifted, Vec4(1, 0, 0, 0));
  CHECK(ms.mean == doctest::Approx(1.0));
  CHECK(ms.variance == doctest::Approx(0.5));

  CHECK_THROWS_AS(quadrature_moments(vac, Vec4(1, 1, 0, 0)), std::invalid_argument);
}

TEST_CASE("symplectic eigenvalues and physicality") {
  const auto nu_vac = symplectic_eigenvalues(0.5 * Mat4::Identity());
  CHECK(nu_vac[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(nu_vac[1] == doctest::Approx(0.5).epsilon(1e-12));

  const auto nu_sub = symplectic_eigenvalues(0.4 * Mat4::Identity());
  CHECK(nu_sub[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(nu_sub[1] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK_FALSE(is_physical(0.4 * Mat4::Identity(), 1e-9));

  CHECK(is_physical(0.5 * Mat4::Identity(), 1e-9));
  CHECK(is_physical(two_mode_squeezed_state(1.0).cov(), 1e-9));

  // pure states sit exactly on the bound
  const auto nu_tmss = symplectic_eigenvalues(two_mode_squeezed_state(0.5).cov());
  CHECK(std::abs(nu_tmss[0] - 0.5) < 1e-9);
  CHECK(std::abs(nu_tmss[1] - 0.5) < 1e-9);

  CHECK_THROWS_AS(symplectic_eigenvalues(Mat4::Zero()), std::invalid_argument);
  Mat4 bad = Mat4::Identity();
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(symplectic_eigenvalues(bad), std::invalid_argument);

  // indefinite matrices are not covariances, whatever their moduli say
  Mat4 indefinite = Mat4::Identity();
  indefinite(0, 0) = -1.0;
  CHECK_FALSE(is_physical(indefinite, 1e-9));
}

TEST_CASE("state constructor validation") {
  Mat4 asym = 0.5 * Mat4::Identity();
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(TwoModeGaussianState(Vec4::Zero(), asym), std::invalid_argument);
  CHECK_THROWS_AS(TwoModeGaussianState(Vec4::Zero(), 0.4 * Mat4::Identity()),
                  std::invalid_argument);
  CHECK_NOTHROW(TwoModeGaussianState(Vec4::Zero(), 0.4 * Mat4::Identity(), 0.2));
  Vec4 bad_mean(0, 0, 0, std::nan(""));
  CHECK_THROWS_AS(TwoModeGaussianState(bad_mean, 0.5 * Mat4::Identity()),
                  std::invalid_argument);
}

TEST_CASE("random states satisfy the construction invariants") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 100; ++k) {
    const auto state = random_physical_state(rng);
    CHECK((state.cov() - state.cov().transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(symplectic_eigenvalues(state.cov())[0] >= 0.5 - 1e-9);
    CHECK(purity(state.cov()) <= 1.0 + 1e-9);
  }
}

TEST_CASE("characteristic function is normalized and bounded") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> amp(-3.0, 3.0);
  for (int s = 0; s < 10; ++s) {
    const auto state = random_physical_state(rng);
    CHECK(char_function(state, Vec4::Zero()) == std::complex<double>(1.0, 0.0));
    for (int k = 0; k < 100; ++k) {
      const Vec4 lambda(amp(rng), amp(rng), amp(rng), amp(rng));
      CHECK(std::abs(char_function(state, lambda)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("quadrature variance agrees with the log-characteristic curvature") {
  std::mt19937_64 rng(13);
  const double h = 1e-3;
  for (int k = 0; k < 50; ++k) {
    const auto state = random_physical_state(rng);
    const Vec4 v = random_unit_vector(rng);
    const auto f = [&](double t) { return -std::log(std::abs(char_function(state, t * v))); };
    const double curvature = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
    const double variance = quadrature_moments(state, v).variance;
    CHECK(std::abs(curvature - variance) / variance < 1e-4);
  }
}

TEST_CASE("symplectic spectrum is invariant under symplectic conjugation") {
  std::mt19937_64 rng(17);
  const Mat4 omega = symplectic_form();
  for (int k = 0; k < 100; ++k) {
    const Mat4 s = random_symplectic(rng);
    CHECK((s.transpose() * omega * s - omega).cwiseAbs().maxCoeff() < 1e-12);

    const auto state = random_physical_state(rng);
    const auto nu = symplectic_eigenvalues(state.cov());
    const Mat4 conjugated = s.transpose() * state.cov() * s;
    const auto nu2 = symplectic_eigenvalues(0.5 * (conjugated + conjugated.transpose()));
    CHECK(std::abs(nu[0] - nu2[0]) < 1e-9);
    CHECK(std::abs(nu[1] - nu2[1]) < 1e-9);
  }
}

TEST_CASE("purity is 1 exactly when the symplectic spectrum sits at 1/2") {
  for (double r : {0.0, 0.3, 0.7, 1.5}) {
    const auto state = two_mode_squeezed_state(r);
    const auto nu = symplectic_eigenvalues(state.cov());
    CHECK(purity(state.cov()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(nu[0] - 0.5) < 1e-9);
    CHECK(std::abs(nu[1] - 0.5) < 1e-9);
  }
  std::mt19937_64 rng(19);
  for (int k = 0; k < 20; ++k) {
    const auto state = add_thermal_noise(random_physical_state(rng), 0.2, 0.1);
    const auto nu = symplectic_eigenvalues(state.cov());
    CHECK(nu[0] > 0.5 + 1e-9);
    CHECK(purity(state.cov()) < 1.0 - 1e-9);
  }
}
