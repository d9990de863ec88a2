#include "covrec/io.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace covrec {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open '" + path.string() + "' for reading");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw io_error("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  if (!out) {
    throw io_error("write to '" + path.string() + "' failed");
  }
}

}  // namespace

void write_dataset_csv(const std::filesystem::path& path, const Dataset& dataset) {
  std::string text = "setting,value\n";
  for (const auto& record : dataset.records) {
    const std::string tok = token(record.entry);
    for (double x : record.samples) {
      text += tok;
      text += ',';
      text += format_double(x);
      text += '\n';
    }
  }
  write_text_file(path, text);
}

void write_dataset_meta(const std::filesystem::path& path, const Dataset& dataset,
                        bool with_timestamp) {
  nlohmann::json schedule = nlohmann::json::array();
  for (const auto& record : dataset.records) {
    schedule.push_back(token(record.entry));
  }
  nlohmann::json j = {
      {"samples_per_quadrature", dataset.config.samples_per_quadrature},
      {"efficiency", dataset.config.efficiency},
      {"seed", dataset.config.seed},
      {"schedule", schedule},
      {"provenance", {{"description", dataset.provenance}}},
  };
  if (with_timestamp) {
    j["created_utc"] = utc_now();
  }
  write_text_file(path, j.dump(2) + "\n");
}

Dataset read_dataset(const std::filesystem::path& csv_path,
                     const std::optional<std::filesystem::path>& meta_path) {
  std::ifstream in(csv_path);
  if (!in) {
    throw io_error("cannot open '" + csv_path.string() + "' for reading");
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("'" + csv_path.string() + "' is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "setting,value") {
    throw std::invalid_argument("'" + csv_path.string() +
                                "': expected header 'setting,value', got '" + line + "'");
  }

  Dataset dataset;
  std::size_t line_no = 1;
  std::vector<std::string> order;  // tokens in first-appearance order
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument(csv_path.string() + ":" + std::to_string(line_no) +
                                  ": expected 'setting,value'");
    }
    std::string tok = line.substr(0, comma);
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
      tok = tok.substr(1, tok.size() - 2);
    }
    const std::string value_text = line.substr(comma + 1);
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(value_text, &consumed);
    } catch (const std::exception&) {
      throw std::invalid_argument(csv_path.string() + ":" + std::to_string(line_no) +
                                  ": bad numeric value '" + value_text + "'");
    }
    if (consumed != value_text.size()) {
      throw std::invalid_argument(csv_path.string() + ":" + std::to_string(line_no) +
                                  ": trailing characters after value");
    }

    const ScheduleEntry entry = parse_token(tok);
    auto it = std::find(order.begin(), order.end(), tok);
    if (it == order.end()) {
      order.push_back(tok);
      dataset.records.push_back({entry, {}});
      it = std::prev(order.end());
    }
    dataset.records[static_cast<std::size_t>(it - order.begin())].samples.push_back(value);
  }

  if (dataset.records.empty()) {
    throw std::invalid_argument("'" + csv_path.string() + "' contains no samples");
  }

  bool has_f = false;
  for (const auto& record : dataset.records) {
    if (record.entry.mode == ModeLabel::F) has_f = true;
  }
  for (const auto& entry : measurement_schedule(has_f)) {
    if (std::find(order.begin(), order.end(), token(entry)) == order.end()) {
      throw std::invalid_argument("'" + csv_path.string() + "' is missing setting '" +
                                  token(entry) + "'");
    }
  }

  const std::size_t n = dataset.records.front().samples.size();
  for (const auto& record : dataset.records) {
    if (record.samples.size() != n) {
      throw std::invalid_argument("'" + csv_path.string() +
                                  "': records have unequal sample counts ('" +
                                  token(record.entry) + "')");
    }
  }
  dataset.config.samples_per_quadrature = n;
  dataset.config.efficiency = 1.0;
  dataset.config.seed = 0;
  dataset.provenance = "external";

  if (meta_path) {
    const nlohmann::json meta = read_json_file(*meta_path);
    try {
      dataset.config.samples_per_quadrature = meta.at("samples_per_quadrature").get<std::size_t>();
      dataset.config.efficiency = meta.at("efficiency").get<double>();
      dataset.config.seed = meta.at("seed").get<std::uint64_t>();
      if (meta.contains("provenance")) {
        dataset.provenance = meta["provenance"].value("description", "external");
      }
      const auto schedule_tokens = meta.at("schedule").get<std::vector<std::string>>();
      if (schedule_tokens != order) {
        throw std::invalid_argument("metadata schedule does not match the CSV settings");
      }
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("'" + meta_path->string() + "': bad metadata: " + e.what());
    }
    if (dataset.config.samples_per_quadrature != n) {
      throw std::invalid_argument("metadata sample count does not match the CSV");
    }
    dataset.config.validate();
  }
  return dataset;
}

nlohmann::json matrix_to_json(const Mat4& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat4 matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw std::invalid_argument("expected a 4x4 matrix as an array of 4 rows");
  }
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 4) {
      throw std::invalid_argument("expected a 4x4 matrix: row has wrong length");
    }
    for (int j2 = 0; j2 < 4; ++j2) m(i, j2) = row[static_cast<std::size_t>(j2)].get<double>();
  }
  return m;
}

nlohmann::json state_to_json(const TwoModeGaussianState& state) {
  nlohmann::json mean = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) mean.push_back(state.mean()(i));
  return {{"mean", mean}, {"cov", matrix_to_json(state.cov())}};
}

TwoModeGaussianState state_from_json(const nlohmann::json& j, double physical_tol) {
  if (!j.is_object() || !j.contains("mean") || !j.contains("cov")) {
    throw std::invalid_argument("state JSON must be an object with 'mean' and 'cov'");
  }
  const auto& mean_json = j["mean"];
  if (!mean_json.is_array() || mean_json.size() != 4) {
    throw std::invalid_argument("state JSON: 'mean' must have 4 entries");
  }
  Vec4 mean;
  for (int i = 0; i < 4; ++i) mean(i) = mean_json[static_cast<std::size_t>(i)].get<double>();
  return TwoModeGaussianState(mean, matrix_from_json(j["cov"]), physical_tol);
}

void write_state_json(const std::filesystem::path& path,
                      const TwoModeGaussianState& state) {
  write_text_file(path, state_to_json(state).dump(2) + "\n");
}

TwoModeGaussianState read_state_json(const std::filesystem::path& path,
                                     double physical_tol) {
  return state_from_json(read_json_file(path), physical_tol);
}

nlohmann::json diagnostics_to_json(const StateDiagnostics& d) {
  return {{"purity", d.purity},
          {"min_ppt_symplectic_eig", d.min_ppt_symplectic_eig},
          {"log_negativity", d.log_negativity},
          {"epr_variance", d.epr_variance},
          {"physical", d.physical}};
}

namespace {

// Estimated matrices can be degenerate enough (det <= 0) that the Gaussian
// formulas are undefined; report null rather than refusing the result.
nlohmann::json diagnostics_or_null(const Mat4& sigma, double tol) {
  try {
    return diagnostics_to_json(diagnose(sigma, tol));
  } catch (const std::invalid_argument&) {
    return nullptr;
  }
}

}  // namespace

nlohmann::json result_to_json(const ReconstructionResult& result) {
  const auto& opt = result.options;
  nlohmann::json j = {
      {"M", matrix_to_json(result.mean_matrix)},
      {"V", matrix_to_json(result.variance_matrix)},
      {"sigma", matrix_to_json(result.covariance)},
      {"stderr", matrix_to_json(result.std_error)},
      {"min_symplectic_eig", result.min_symplectic_eig},
      {"physical", result.physical},
      {"options",
       {{"f_policy", opt.f_policy == FPolicy::e_only ? "e_only" : "average_ef"},
        {"correct_efficiency", opt.correct_efficiency},
        {"efficiency", opt.efficiency},
        {"project_to_physical", opt.project},
        {"bootstrap", opt.bootstrap},
        {"physical_tol", opt.physical_tol}}},
      {"degenerate_settings", result.degenerate_settings},
      {"diagnostics", diagnostics_or_null(result.covariance, opt.physical_tol)},
  };
  if (result.projected_covariance) {
    j["projected"] = {
        {"sigma", matrix_to_json(*result.projected_covariance)},
        {"diagnostics", diagnostics_or_null(*result.projected_covariance, opt.physical_tol)}};
  }
  if (result.bootstrap) {
    j["bootstrap"] = {{"stderr", matrix_to_json(result.bootstrap->std_error)},
                      {"lower", matrix_to_json(result.bootstrap->lower)},
                      {"upper", matrix_to_json(result.bootstrap->upper)},
                      {"resamples", result.bootstrap->resamples}};
  }
  return j;
}

void write_result_json(const std::filesystem::path& path,
                       const ReconstructionResult& result) {
  write_text_file(path, result_to_json(result).dump(2) + "\n");
}

std::string format_report(const ReconstructionResult& result) {
  std::ostringstream out;
  out << "covariance estimate sigma = V - M (entry +/- stderr)\n";
  char buf[64];
  for (int i = 0; i < 4; ++i) {
    out << " ";
    for (int j = 0; j < 4; ++j) {
      std::snprintf(buf, sizeof buf, "  %+10.6f +/- %-9.3g", result.covariance(i, j),
                    result.std_error(i, j));
      out << buf;
    }
    out << "\n";
  }
  std::snprintf(buf, sizeof buf, "%.6g", result.min_symplectic_eig);
  out << "min symplectic eigenvalue: " << buf
      << (result.physical ? "  (physical)" : "  (NOT physical)") << "\n";
  try {
    const StateDiagnostics d = diagnose(result.covariance, result.options.physical_tol);
    std::snprintf(buf, sizeof buf, "%.6g", d.purity);
    out << "purity: " << buf;
    std::snprintf(buf, sizeof buf, "%.6g", d.log_negativity);
    out << "  log-negativity: " << buf;
    std::snprintf(buf, sizeof buf, "%.6g", d.min_ppt_symplectic_eig);
    out << "  min PPT eig: " << buf;
    std::snprintf(buf, sizeof buf, "%.6g", d.epr_variance);
    out << "  EPR variance: " << buf << "\n";
  } catch (const std::invalid_argument&) {
    out << "diagnostics: undefined for this estimate\n";
  }
  if (!result.degenerate_settings.empty()) {
    out << "degenerate settings (constant samples):";
    for (const auto& tok : result.degenerate_settings) out << " " << tok;
    out << "\n";
  }
  if (result.projected_covariance) {
    out << "projected covariance (symplectic spectrum clamped to >= 1/2):\n";
    for (int i = 0; i < 4; ++i) {
      out << " ";
      for (int j = 0; j < 4; ++j) {
        std::snprintf(buf, sizeof buf, "  %+10.6f", (*result.projected_covariance)(i, j));
        out << buf;
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string format_gnuplot_table(const ReconstructionResult& result) {
  std::string out = "# i j sigma stderr\n";
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out += std::to_string(i + 1) + " " + std::to_string(j + 1) + " " +
             format_double(result.covariance(i, j)) + " " +
             format_double(result.std_error(i, j)) + "\n";
    }
  }
  return out;
}

}  // namespace covrec
