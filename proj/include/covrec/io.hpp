#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "covrec/diagnostics.hpp"
#include "covrec/measurement.hpp"
#include "covrec/reconstruction.hpp"

// File formats:
//   dataset CSV    header "setting,value", one row per sample, rows grouped
//                  by setting token in schedule order;
//   meta sidecar   {"samples_per_quadrature", "efficiency", "seed",
//                   "schedule", "provenance", "created_utc"};
//   state JSON     {"mean": [4], "cov": [[4x4]]}, row-major;
//   result JSON    {"M", "V", "sigma", "stderr", "min_symplectic_eig",
//                   "physical", "options", "diagnostics", ...}.

namespace covrec {

/// Filesystem-level failure (open/read/write); schema and content problems
/// throw std::invalid_argument instead.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_dataset_csv(const std::filesystem::path& path, const Dataset& dataset);

/// with_timestamp confines the only non-reproducible field, "created_utc",
/// to the sidecar.
void write_dataset_meta(const std::filesystem::path& path, const Dataset& dataset,
                        bool with_timestamp = true);

/// Reads a dataset; the sidecar is optional so externally produced CSVs
/// reconstruct on their own (efficiency then defaults to 1). Validates that
/// the tokens form a complete 14- or 16-entry schedule and that every
/// record has the same sample count.
Dataset read_dataset(const std::filesystem::path& csv_path,
                     const std::optional<std::filesystem::path>& meta_path = {});

nlohmann::json state_to_json(const TwoModeGaussianState& state);
TwoModeGaussianState state_from_json(const nlohmann::json& j,
                                     double physical_tol = 1e-9);
void write_state_json(const std::filesystem::path& path,
                      const TwoModeGaussianState& state);
TwoModeGaussianState read_state_json(const std::filesystem::path& path,
                                     double physical_tol = 1e-9);

nlohmann::json matrix_to_json(const Mat4& m);
Mat4 matrix_from_json(const nlohmann::json& j);

nlohmann::json diagnostics_to_json(const StateDiagnostics& d);

/// Result plus a "diagnostics" block for sigma (and, when projection was
/// requested, a "projected" block with its own diagnostics).
nlohmann::json result_to_json(const ReconstructionResult& result);
void write_result_json(const std::filesystem::path& path,
                       const ReconstructionResult& result);

/// Plain-text report table: sigma entries with standard errors and the
/// diagnostics summary.
std::string format_report(const ReconstructionResult& result);

/// Whitespace-delimited "i j sigma stderr" table for external plotting.
std::string format_gnuplot_table(const ReconstructionResult& result);

}  // namespace covrec
