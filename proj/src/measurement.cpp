#include "covrec/measurement.hpp"

#include <cmath>
#include <future>
#include <random>
#include <stdexcept>

namespace covrec {

void HomodyneConfig::validate() const {
  if (samples_per_quadrature < 1) {
    throw std::invalid_argument("HomodyneConfig: samples_per_quadrature must be >= 1");
  }
  if (!(efficiency > 0.0) || efficiency > 1.0) {
    throw std::invalid_argument("HomodyneConfig: efficiency must be in (0, 1]");
  }
}

namespace {

// Independent substream per (seed, stream): seed_seq mixes the 32-bit limbs,
// so streams share no state and may be drawn in any order.
std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

std::vector<double> sample_quadrature(const TwoModeGaussianState& state,
                                      const QuadratureVector& v,
                                      const HomodyneConfig& config,
                                      std::uint64_t stream) {
  config.validate();
  const QuadratureMoments exact = quadrature_moments(state, v);
  const double eta = config.efficiency;
  const double mean = std::sqrt(eta) * exact.mean;
  const double variance = eta * exact.variance + 0.5 * (1.0 - eta);
  if (!(variance > 0.0)) {
    throw std::runtime_error("sample_quadrature: non-positive marginal variance "
                             "(corrupt covariance input)");
  }
  auto engine = substream_engine(config.seed, stream);
  std::normal_distribution<double> dist(mean, std::sqrt(variance));
  std::vector<double> samples(config.samples_per_quadrature);
  for (double& x : samples) x = dist(engine);
  return samples;
}

Dataset run_schedule(const TwoModeGaussianState& state, const Schedule& schedule,
                     const HomodyneConfig& config, const std::string& provenance) {
  config.validate();
  if (schedule.empty()) {
    throw std::invalid_argument("run_schedule: empty schedule");
  }

  Dataset dataset;
  dataset.config = config;
  dataset.provenance = provenance;
  dataset.records.resize(schedule.size());

  std::vector<std::future<std::vector<double>>> futures;
  futures.reserve(schedule.size());
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      return sample_quadrature(state, quadrature_vector(schedule[i].mode, schedule[i].phase),
                               config, static_cast<std::uint64_t>(i));
    }));
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    dataset.records[i] = {schedule[i], futures[i].get()};
  }
  return dataset;
}

MomentSet exact_moment_set(const TwoModeGaussianState& state, const Schedule& schedule) {
  MomentSet ms;
  for (const auto& entry : schedule) {
    const QuadratureMoments m =
        quadrature_moments(state, quadrature_vector(entry.mode, entry.phase));
    ms.second[token(entry)] = {m.variance + m.mean * m.mean, 0.0, 0, false};
    const bool first_moment_entry =
        (entry.mode == ModeLabel::A || entry.mode == ModeLabel::B) &&
        (entry.phase == QuadraturePhase::X || entry.phase == QuadraturePhase::Y);
    if (first_moment_entry) {
      ms.first[token(entry)] = {m.mean, 0.0, 0, false};
    }
  }
  return ms;
}

}  // namespace covrec
