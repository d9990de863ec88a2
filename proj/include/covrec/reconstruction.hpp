#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covrec/gaussian_state.hpp"
#include "covrec/measurement.hpp"
#include "covrec/moments.hpp"

// Covariance reconstruction from quadrature statistics: sigma = V - M, where
// M carries the first moments (M_ij = m_i m_j with m = (<x_a>,<y_a>,<x_b>,
// <y_b>)) and V is assembled from the fourteen second moments
//
//   V_11 = <x_a^2>            V_12 = (<z_a^2> - <t_a^2>)/2
//   V_33 = <x_b^2>            V_34 = (<z_b^2> - <t_b^2>)/2
//   V_22 = <y_a^2>            V_13 = (<x_c^2> - <x_d^2>)/2
//   V_44 = <y_b^2>            V_24 = (<y_c^2> - <y_d^2>)/2
//   V_14 = <y_e^2> - (<x_a^2> + <y_b^2>)/2
//   V_23 = (<x_b^2> + <y_a^2>)/2 - <x_e^2>
//
// with the f-quadratures offering the redundant alternatives
// V_14 = (<y_e^2> - <y_f^2>)/2 and V_23 = (<x_f^2> - <x_e^2>)/2.

namespace covrec {

/// Off-diagonal V_14/V_23 source: the minimal 14-quadrature scheme (e_only)
/// or an unweighted average of the e- and f-based forms (average_ef).
enum class FPolicy { e_only, average_ef };

struct ReconstructOptions {
  FPolicy f_policy = FPolicy::e_only;
  /// Invert the loss model: sigma <- (sigma - (1-eta)/2 I)/eta, stderr /= eta.
  bool correct_efficiency = false;
  /// Detection efficiency used by the correction; reconstruct_covariance
  /// fills it from the dataset config.
  double efficiency = 1.0;
  /// Opt-in Williamson projection of unphysical estimates (biases
  /// entanglement toward separability, so off by default).
  bool project = false;
  bool bootstrap = false;
  std::size_t bootstrap_resamples = 200;
  double physical_tol = 1e-9;
};

struct BootstrapSummary {
  Mat4 std_error;
  Mat4 lower;  // 2.5% percentile per entry
  Mat4 upper;  // 97.5% percentile per entry
  std::size_t resamples = 0;
};

struct ReconstructionResult {
  Mat4 mean_matrix;
  Mat4 variance_matrix;
  Mat4 covariance;  // = variance_matrix - mean_matrix, exactly
  Mat4 std_error;
  double min_symplectic_eig = 0.0;
  bool physical = false;
  ReconstructOptions options;
  std::optional<Mat4> projected_covariance;
  std::optional<BootstrapSummary> bootstrap;
  std::vector<std::string> degenerate_settings;
};

/// Sample moments per record: first moments for the (a/b, x/y) records with
/// std error s/sqrt(N); raw second moments with std error
/// sqrt((m4 - m2^2)/N). Requires a schedule-complete dataset and N >= 2.
MomentSet estimate_moment_set(const Dataset& dataset);

/// M_ij = m_i m_j (symmetric, rank <= 1).
Mat4 build_mean_matrix(const MomentSet& ms);

/// Assemble V from the second moments under the given policy. Throws if a
/// required moment is missing (e.g. average_ef without f records).
Mat4 build_variance_matrix(const MomentSet& ms, FPolicy policy = FPolicy::e_only);

/// Full pipeline on a moment set: sigma = V - M with entrywise standard
/// errors propagated to first order treating records as independent,
/// optional efficiency correction, physicality verdict, optional projection.
ReconstructionResult reconstruct_from_moments(const MomentSet& ms,
                                              const ReconstructOptions& options = {});

/// estimate_moment_set + reconstruct_from_moments; efficiency is taken from
/// the dataset config. With options.bootstrap, adds percentile-bootstrap
/// errors over options.bootstrap_resamples resamples of each record.
ReconstructionResult reconstruct_covariance(const Dataset& dataset,
                                            ReconstructOptions options = {});

/// Williamson normal form of a positive-definite sigma:
/// S sigma S^T = diag(nu1, nu1, nu2, nu2) with S symplectic.
struct WilliamsonForm {
  Mat4 S;
  std::array<double, 2> nu;  // in block order, not sorted
};
WilliamsonForm williamson_decompose(const Mat4& sigma);

/// Clamp the symplectic spectrum to >= 1/2 and recompose. Returns the input
/// unchanged when already physical; throws std::invalid_argument when sigma
/// is not positive-definite.
Mat4 project_to_physical(const Mat4& sigma);

/// Exactness oracle: random physical states -> analytic moments ->
/// reconstruction; returns the max-abs entrywise error over all trials.
double verify_exact_reconstruction(std::size_t trials, std::uint64_t seed);

}  // namespace covrec
