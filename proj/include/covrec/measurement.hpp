#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covrec/gaussian_state.hpp"
#include "covrec/moments.hpp"
#include "covrec/optics.hpp"

// Homodyne simulation. Each schedule entry is sampled from the exact
// Gaussian marginal of its quadrature; detection loss enters as a single
// scalar efficiency eta applied after mode selection, so the measured
// quadrature has mean sqrt(eta) v.X and variance eta v^T sigma v + (1-eta)/2.

namespace covrec {

struct HomodyneConfig {
  std::size_t samples_per_quadrature = 0;
  double efficiency = 1.0;
  std::uint64_t seed = 0;

  /// N >= 1, 0 < efficiency <= 1. Throws std::invalid_argument.
  void validate() const;
};

struct QuadratureRecord {
  ScheduleEntry entry;
  std::vector<double> samples;
};

struct Dataset {
  std::vector<QuadratureRecord> records;
  HomodyneConfig config;
  std::string provenance = "external";
};

/// Draw N i.i.d. samples of the quadrature v under loss. The stream index
/// keys an independent RNG substream: output depends only on
/// (config.seed, stream), never on call order.
std::vector<double> sample_quadrature(const TwoModeGaussianState& state,
                                      const QuadratureVector& v,
                                      const HomodyneConfig& config,
                                      std::uint64_t stream = 0);

/// One record per schedule entry, substreams keyed by entry index. Records
/// are generated concurrently; the result is bit-identical for fixed inputs
/// regardless of scheduling.
Dataset run_schedule(const TwoModeGaussianState& state, const Schedule& schedule,
                     const HomodyneConfig& config,
                     const std::string& provenance = "simulated");

/// Noise-free oracle: analytic first moments for the (a/b, x/y) entries and
/// analytic raw second moments v^T sigma v + (v.X)^2 for every entry.
/// Standard errors are 0 and counts 0 (analytic).
MomentSet exact_moment_set(const TwoModeGaussianState& state,
                           const Schedule& schedule);

}  // namespace covrec
