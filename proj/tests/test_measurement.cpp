#include <doctest.h>

#include <cmath>
#include <numeric>

#include "covrec/measurement.hpp"

using namespace covrec;

namespace {

double sample_mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  const double m = sample_mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size());
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS((HomodyneConfig{0, 1.0, 1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((HomodyneConfig{10, 0.0, 1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((HomodyneConfig{10, 1.5, 1}).validate(), std::invalid_argument);
  CHECK_NOTHROW((HomodyneConfig{1, 1.0, 0}).validate());
}

TEST_CASE("vacuum sampling statistics") {
  const HomodyneConfig config{100000, 1.0, 42};
  const auto samples =
      sample_quadrature(vacuum_state(), Vec4(1, 0, 0, 0), config, 0);
  REQUIRE(samples.size() == config.samples_per_quadrature);
  const double n = static_cast<double>(config.samples_per_quadrature);
  CHECK(std::abs(sample_mean(samples)) < 5.0 * std::sqrt(0.5 / n));
  CHECK(std::abs(sample_variance(samples) - 0.5) < 5.0 * 0.5 * std::sqrt(2.0 / n));
}

TEST_CASE("vacuum is a fixed point of the loss channel") {
  const HomodyneConfig config{100000, 0.5, 9};
  const auto samples =
      sample_quadrature(vacuum_state(), Vec4(0, 1, 0, 0), config, 3);
  const double n = static_cast<double>(config.samples_per_quadrature);
  CHECK(std::abs(sample_variance(samples) - 0.5) < 5.0 * 0.5 * std::sqrt(2.0 / n));
}

TEST_CASE("squeezed-state variance at full efficiency") {
  const auto state = two_mode_squeezed_state(0.5);
  const HomodyneConfig config{1000000, 1.0, 5};
  const auto samples = sample_quadrature(state, Vec4(1, 0, 0, 0), config, 0);
  const double truth = 0.5 * std::cosh(1.0);
  const double n = static_cast<double>(config.samples_per_quadrature);
  CHECK(std::abs(sample_variance(samples) - truth) < 5.0 * truth * std::sqrt(2.0 / n));
}

TEST_CASE("loss model: population variance is eta v'Sv + (1-eta)/2") {
  const auto state = two_mode_squeezed_state(0.5);
  const Vec4 v(1, 0, 0, 0);
  const double pure_var = v.dot(state.cov() * v);
  for (double eta : {0.25, 0.5, 0.9}) {
    const HomodyneConfig config{100000, eta, 77};
    const auto samples = sample_quadrature(state, v, config, 1);
    const double expected = eta * pure_var + 0.5 * (1.0 - eta);
    const double n = static_cast<double>(config.samples_per_quadrature);
    CHECK(std::abs(sample_variance(samples) - expected) <
          5.0 * expected * std::sqrt(2.0 / n));
  }
}

TEST_CASE("run_schedule cardinality and determinism") {
  const auto state = vacuum_state();
  const Schedule schedule = measurement_schedule(false);
  const HomodyneConfig config{1000, 1.0, 123};

  const Dataset d1 = run_schedule(state, schedule, config);
  REQUIRE(d1.records.size() == 14);
  for (const auto& record : d1.records) {
    CHECK(record.samples.size() == 1000);
  }

  // unique record keys
  for (std::size_t i = 0; i < d1.records.size(); ++i) {
    for (std::size_t j = i + 1; j < d1.records.size(); ++j) {
      CHECK(token(d1.records[i].entry) != token(d1.records[j].entry));
    }
  }

  const Dataset d2 = run_schedule(state, schedule, config);
  for (std::size_t i = 0; i < d1.records.size(); ++i) {
    CHECK(d1.records[i].samples == d2.records[i].samples);
  }

  const Dataset d16 = run_schedule(state, measurement_schedule(true), config);
  CHECK(d16.records.size() == 16);
}

TEST_CASE("substreams are uncorrelated across records") {
  const auto state = vacuum_state();
  const HomodyneConfig config{10000, 1.0, 31};
  const Dataset d = run_schedule(state, measurement_schedule(false), config);
  const double n = static_cast<double>(config.samples_per_quadrature);
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    for (std::size_t j = i + 1; j < d.records.size(); ++j) {
      const auto& a = d.records[i].samples;
      const auto& b = d.records[j].samples;
      const double ma = sample_mean(a);
      const double mb = sample_mean(b);
      double cov = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) cov += (a[k] - ma) * (b[k] - mb);
      cov /= n;
      const double corr =
          cov / std::sqrt(sample_variance(a) * sample_variance(b));
      CHECK(std::abs(corr) < 5.0 / std::sqrt(n));
    }
  }
}

TEST_CASE("exact moments") {
  const Schedule schedule = measurement_schedule(true);

  const MomentSet vac = exact_moment_set(vacuum_state(), schedule);
  REQUIRE(vac.second.size() == 16);
  REQUIRE(vac.first.size() == 4);
  for (const auto& [tok, moment] : vac.second) {
    CHECK(moment.estimate == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(moment.std_error == 0.0);
  }
  for (const auto& [tok, moment] : vac.first) {
    CHECK(moment.estimate == 0.0);
  }

  const MomentSet sq = exact_moment_set(two_mode_squeezed_state(0.5), schedule);
  CHECK(sq.second.at("c:x").estimate == doctest::Approx(1.3591409142295226).epsilon(1e-12));
  CHECK(sq.second.at("d:x").estimate == doctest::Approx(0.1839397205857212).epsilon(1e-12));

  const MomentSet shifted =
      exact_moment_set(displace(vacuum_state(), Vec4(1, 0, 0, 0)), schedule);
  CHECK(shifted.first.at("a:x").estimate == doctest::Approx(1.0));
  CHECK(shifted.second.at("a:x").estimate == doctest::Approx(1.5));
}

TEST_CASE("sample moments converge at the Monte Carlo rate") {
  const auto state = two_mode_squeezed_state(0.5);
  const Vec4 v(1, 0, 0, 0);
  const double true_var = v.dot(state.cov() * v);
  const std::vector<std::size_t> sizes = {1000, 10000, 100000};
  std::vector<double> mean_err(sizes.size(), 0.0);
  std::vector<double> var_err(sizes.size(), 0.0);
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const HomodyneConfig config{sizes[k], 1.0, static_cast<std::uint64_t>(s)};
      const auto samples = sample_quadrature(state, v, config, 0);
      mean_err[k] += std::abs(sample_mean(samples)) / seeds;
      var_err[k] += std::abs(sample_variance(samples) - true_var) / seeds;
    }
  }
  const auto slope = [&](const std::vector<double>& err) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const double x = std::log(static_cast<double>(sizes[k]));
      const double y = std::log(err[k]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(sizes.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  CHECK(slope(mean_err) == doctest::Approx(-0.5).epsilon(0.2));
  CHECK(slope(var_err) == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("corrupt covariance input is rejected at sampling time") {
  Mat4 corrupt = Mat4::Identity();
  corrupt(0, 0) = -1.0;
  // huge tolerance lets the broken matrix through construction on purpose
  const TwoModeGaussianState state(Vec4::Zero(), corrupt, 10.0);
  const HomodyneConfig config{100, 1.0, 1};
  CHECK_THROWS_AS(sample_quadrature(state, Vec4(1, 0, 0, 0), config, 0),
                  std::runtime_error);
}
