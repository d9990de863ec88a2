#include <doctest.h>

#include <cmath>
#include <random>

#include "covrec/diagnostics.hpp"
#include "covrec/random_states.hpp"

using namespace covrec;

TEST_CASE("purity") {
  CHECK(purity(0.5 * Mat4::Identity()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity(two_mode_squeezed_state(0.5).cov()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(purity(Mat4::Identity()) == doctest::Approx(0.25).epsilon(1e-12));

  Mat4 negdet = Mat4::Identity();
  negdet(0, 0) = -1.0;
  CHECK_THROWS_AS(purity(negdet), std::invalid_argument);
}

TEST_CASE("PPT spectrum") {
  CHECK(ppt_min_symplectic_eig(0.5 * Mat4::Identity()) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // nu~_- of the squeezed state is e^{-2r}/2
  CHECK(ppt_min_symplectic_eig(two_mode_squeezed_state(0.5).cov()) ==
        doctest::Approx(0.18393972058572117).epsilon(1e-10));
  const double clean = ppt_min_symplectic_eig(two_mode_squeezed_state(0.5).cov());
  const double noisy = ppt_min_symplectic_eig(
      add_thermal_noise(two_mode_squeezed_state(0.5), 1.0, 1.0).cov());
  CHECK(noisy > clean);
}

TEST_CASE("log negativity") {
  CHECK(log_negativity(0.5 * Mat4::Identity()) == 0.0);
  for (double r : {0.1, 0.5, 1.0, 2.0}) {
    CHECK(std::abs(log_negativity(two_mode_squeezed_state(r).cov()) - 2.0 * r) < 1e-10);
  }
}

TEST_CASE("EPR variance") {
  CHECK(epr_variance(0.5 * Mat4::Identity()) == 2.0);
  CHECK(epr_variance(two_mode_squeezed_state(0.5).cov()) ==
        doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
  double previous = epr_variance(two_mode_squeezed_state(1.0).cov());
  for (double r : {2.0, 3.0}) {
    const double current = epr_variance(two_mode_squeezed_state(r).cov());
    CHECK(current < previous);
    previous = current;
  }
  CHECK(epr_variance(two_mode_squeezed_state(3.0).cov()) < 0.01);
}

TEST_CASE("diagnostics depend on the covariance only") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto state = random_physical_state(rng);
    const auto moved = displace(state, Vec4(1.0, -0.5, 0.25, 2.0));
    const StateDiagnostics a = diagnose(state.cov());
    const StateDiagnostics b = diagnose(moved.cov());
    CHECK(a.purity == b.purity);
    CHECK(a.min_ppt_symplectic_eig == b.min_ppt_symplectic_eig);
    CHECK(a.log_negativity == b.log_negativity);
    CHECK(a.epr_variance == b.epr_variance);

    // internal consistency of the block
    CHECK(a.log_negativity ==
          std::max(0.0, -std::log(2.0 * a.min_ppt_symplectic_eig)));
  }
}

TEST_CASE("log negativity is invariant under local phase rotations") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (int k = 0; k < 20; ++k) {
    const Mat4 sigma = random_physical_state(rng).cov();
    const Mat4 s = rotation_symplectic(angle(rng), angle(rng));
    const Mat4 rotated = s.transpose() * sigma * s;
    CHECK(std::abs(log_negativity(rotated) - log_negativity(sigma)) < 1e-9);
  }
}

TEST_CASE("purity never grows under thermal noise") {
  for (double r : {0.0, 0.5, 1.0}) {
    const auto base = two_mode_squeezed_state(r);
    double previous = purity(base.cov());
    for (double nbar : {0.1, 0.5, 1.0, 2.0}) {
      const double current = purity(add_thermal_noise(base, nbar, nbar).cov());
      CHECK(current <= previous + 1e-12);
      previous = current;
    }
  }
}

TEST_CASE("diagnose flags unphysical estimates without refusing them") {
  const StateDiagnostics d = diagnose(0.4 * Mat4::Identity());
  CHECK_FALSE(d.physical);
  CHECK(d.purity == doctest::Approx(1.0 / (4.0 * std::sqrt(0.0256))).epsilon(1e-12));
  CHECK(d.min_ppt_symplectic_eig == doctest::Approx(0.4).epsilon(1e-12));
}
