#include "covrec/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "covrec/random_states.hpp"

namespace covrec {

namespace {

struct Term {
  const char* tok;
  double coeff;
};

// Each upper-triangle V entry is a fixed linear combination of raw second
// moments; the same table drives the value and the first-order error
// propagation (records treated as independent).
std::vector<Term> variance_terms(int i, int j, FPolicy policy) {
  if (i > j) std::swap(i, j);
  const int key = 10 * (i + 1) + (j + 1);  // 1-based row/column
  switch (key) {
    case 11: return {{"a:x", 1.0}};
    case 22: return {{"a:y", 1.0}};
    case 33: return {{"b:x", 1.0}};
    case 44: return {{"b:y", 1.0}};
    case 12: return {{"a:z", 0.5}, {"a:t", -0.5}};
    case 34: return {{"b:z", 0.5}, {"b:t", -0.5}};
    case 13: return {{"c:x", 0.5}, {"d:x", -0.5}};
    case 24: return {{"c:y", 0.5}, {"d:y", -0.5}};
    case 14:
      if (policy == FPolicy::e_only) {
        return {{"e:y", 1.0}, {"a:x", -0.5}, {"b:y", -0.5}};
      }
      // unweighted average of the e- and f-based forms
      return {{"e:y", 0.75}, {"a:x", -0.25}, {"b:y", -0.25}, {"f:y", -0.25}};
    case 23:
      if (policy == FPolicy::e_only) {
        return {{"b:x", 0.5}, {"a:y", 0.5}, {"e:x", -1.0}};
      }
      return {{"b:x", 0.25}, {"a:y", 0.25}, {"e:x", -0.75}, {"f:x", 0.25}};
  }
  throw std::logic_error("variance_terms: bad indices");
}

const Moment& require_second(const MomentSet& ms, const std::string& tok) {
  auto it = ms.second.find(tok);
  if (it == ms.second.end()) {
    throw std::invalid_argument("missing second moment for setting '" + tok + "'");
  }
  return it->second;
}

const Moment& require_first(const MomentSet& ms, const std::string& tok) {
  auto it = ms.first.find(tok);
  if (it == ms.first.end()) {
    throw std::invalid_argument("missing first moment for setting '" + tok + "'");
  }
  return it->second;
}

// value and variance (squared stderr) of one V entry
std::pair<double, double> combine(const MomentSet& ms, const std::vector<Term>& terms) {
  double value = 0.0;
  double var = 0.0;
  for (const Term& t : terms) {
    const Moment& m = require_second(ms, t.tok);
    value += t.coeff * m.estimate;
    var += t.coeff * t.coeff * m.std_error * m.std_error;
  }
  return {value, var};
}

void check_policy_inputs(const MomentSet& ms, FPolicy policy) {
  if (policy == FPolicy::average_ef && !ms.has_f_moments()) {
    throw std::invalid_argument(
        "average_ef policy requires f:x and f:y records, which are missing");
  }
}

// first moments in covariance order m = (<x_a>, <y_a>, <x_b>, <y_b>)
std::array<Moment, 4> first_moment_vector(const MomentSet& ms) {
  return {require_first(ms, "a:x"), require_first(ms, "a:y"),
          require_first(ms, "b:x"), require_first(ms, "b:y")};
}

}  // namespace

MomentSet estimate_moment_set(const Dataset& dataset) {
  // The token set must form a complete schedule; 16 settings when any
  // f record is present, the minimal 14 otherwise.
  bool has_f = false;
  for (const auto& record : dataset.records) {
    if (record.entry.mode == ModeLabel::F) has_f = true;
  }
  const Schedule schedule = measurement_schedule(has_f);
  std::vector<std::string> seen;
  for (const auto& record : dataset.records) {
    const std::string tok = token(record.entry);
    if (std::find(seen.begin(), seen.end(), tok) != seen.end()) {
      throw std::invalid_argument("duplicate record for setting '" + tok + "'");
    }
    seen.push_back(tok);
  }
  for (const auto& entry : schedule) {
    if (std::find(seen.begin(), seen.end(), token(entry)) == seen.end()) {
      throw std::invalid_argument("dataset is missing setting '" + token(entry) + "'");
    }
  }
  if (seen.size() != schedule.size()) {
    throw std::invalid_argument("dataset contains settings outside the schedule");
  }

  MomentSet ms;
  for (const auto& record : dataset.records) {
    const std::size_t n = record.samples.size();
    if (n < 2) {
      throw std::invalid_argument("record '" + token(record.entry) +
                                  "' has fewer than 2 samples; stderr undefined");
    }
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (double x : record.samples) {
      if (!std::isfinite(x)) {
        throw std::invalid_argument("record '" + token(record.entry) +
                                    "' contains a non-finite sample");
      }
      const double x2 = x * x;
      s1 += x;
      s2 += x2;
      s3 += x2 * x;
      s4 += x2 * x2;
    }
    const double nd = static_cast<double>(n);
    const double m1 = s1 / nd;
    const double m2 = s2 / nd;
    const double m4 = s4 / nd;
    const double central2 = std::max(0.0, m2 - m1 * m1);
    const bool degenerate = central2 == 0.0;

    Moment second;
    second.estimate = m2;
    second.std_error = std::sqrt(std::max(0.0, m4 - m2 * m2) / nd);
    second.count = n;
    second.degenerate = degenerate;
    ms.second[token(record.entry)] = second;

    const bool first_moment_entry =
        (record.entry.mode == ModeLabel::A || record.entry.mode == ModeLabel::B) &&
        (record.entry.phase == QuadraturePhase::X ||
         record.entry.phase == QuadraturePhase::Y);
    if (first_moment_entry) {
      Moment first;
      first.estimate = m1;
      first.std_error = std::sqrt(central2 * nd / (nd - 1.0) / nd);
      first.count = n;
      first.degenerate = degenerate;
      ms.first[token(record.entry)] = first;
    }
  }
  return ms;
}

Mat4 build_mean_matrix(const MomentSet& ms) {
  const auto m = first_moment_vector(ms);
  Mat4 mean_matrix;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const double value = m[i].estimate * m[j].estimate;
      mean_matrix(i, j) = value;
      mean_matrix(j, i) = value;
    }
  }
  return mean_matrix;
}

Mat4 build_variance_matrix(const MomentSet& ms, FPolicy policy) {
  check_policy_inputs(ms, policy);
  Mat4 v;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const double value = combine(ms, variance_terms(i, j, policy)).first;
      v(i, j) = value;
      v(j, i) = value;
    }
  }
  return v;
}

ReconstructionResult reconstruct_from_moments(const MomentSet& ms,
                                              const ReconstructOptions& options) {
  check_policy_inputs(ms, options.f_policy);
  const auto m = first_moment_vector(ms);

  ReconstructionResult result;
  result.options = options;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const auto [v_value, v_var] = combine(ms, variance_terms(i, j, options.f_policy));
      const double m_value = m[i].estimate * m[j].estimate;
      // d(m_i m_j) error; the i == j case collapses to 2 m_i se_i
      const double m_var =
          (i == j) ? 4.0 * m_value * m[i].std_error * m[i].std_error
                   : m[j].estimate * m[j].estimate * m[i].std_error * m[i].std_error +
                         m[i].estimate * m[i].estimate * m[j].std_error * m[j].std_error;
      const double sigma_value = v_value - m_value;
      const double err = std::sqrt(v_var + m_var);
      result.variance_matrix(i, j) = result.variance_matrix(j, i) = v_value;
      result.mean_matrix(i, j) = result.mean_matrix(j, i) = m_value;
      result.covariance(i, j) = result.covariance(j, i) = sigma_value;
      result.std_error(i, j) = result.std_error(j, i) = err;
    }
  }

  if (options.correct_efficiency) {
    const double eta = options.efficiency;
    if (!(eta > 0.0) || eta > 1.0) {
      throw std::invalid_argument("efficiency correction needs eta in (0, 1]");
    }
    if (eta != 1.0) {
      result.covariance =
          ((result.covariance - 0.5 * (1.0 - eta) * Mat4::Identity()) / eta).eval();
      result.covariance = (0.5 * (result.covariance + result.covariance.transpose())).eval();
      result.std_error /= eta;
    }
  }

  const auto nu = symplectic_eigenvalues(result.covariance);
  result.min_symplectic_eig = nu[0];
  result.physical = nu[0] >= 0.5 - options.physical_tol;

  for (const auto& [tok, moment] : ms.second) {
    if (moment.degenerate) result.degenerate_settings.push_back(tok);
  }

  if (options.project) {
    result.projected_covariance = project_to_physical(result.covariance);
  }
  return result;
}

namespace {

MomentSet resample_moment_set(const Dataset& dataset, std::mt19937_64& engine) {
  Dataset resampled;
  resampled.config = dataset.config;
  resampled.provenance = dataset.provenance;
  resampled.records.reserve(dataset.records.size());
  for (const auto& record : dataset.records) {
    const std::size_t n = record.samples.size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    QuadratureRecord r;
    r.entry = record.entry;
    r.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.samples[i] = record.samples[pick(engine)];
    resampled.records.push_back(std::move(r));
  }
  return estimate_moment_set(resampled);
}

}  // namespace

ReconstructionResult reconstruct_covariance(const Dataset& dataset,
                                            ReconstructOptions options) {
  options.efficiency = dataset.config.efficiency;
  const MomentSet ms = estimate_moment_set(dataset);

  ReconstructOptions base = options;
  base.bootstrap = false;
  ReconstructionResult result = reconstruct_from_moments(ms, base);
  result.options = options;

  if (options.bootstrap) {
    const std::size_t b = options.bootstrap_resamples;
    if (b < 2) {
      throw std::invalid_argument("bootstrap_resamples must be >= 2");
    }
    ReconstructOptions plain = base;
    plain.project = false;
    std::seed_seq seq{static_cast<std::uint32_t>(dataset.config.seed),
                      static_cast<std::uint32_t>(dataset.config.seed >> 32),
                      0x626f6f74u};  // distinct stream from the sampler
    std::mt19937_64 engine(seq);

    std::vector<Mat4> sigmas;
    sigmas.reserve(b);
    for (std::size_t k = 0; k < b; ++k) {
      sigmas.push_back(
          reconstruct_from_moments(resample_moment_set(dataset, engine), plain).covariance);
    }

    BootstrapSummary summary;
    summary.resamples = b;
    std::vector<double> entry(b);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (std::size_t k = 0; k < b; ++k) entry[k] = sigmas[k](i, j);
        double mean = 0.0;
        for (double x : entry) mean += x;
        mean /= static_cast<double>(b);
        double var = 0.0;
        for (double x : entry) var += (x - mean) * (x - mean);
        summary.std_error(i, j) = std::sqrt(var / static_cast<double>(b - 1));
        std::sort(entry.begin(), entry.end());
        const auto pick = [&](double q) {
          const double pos = q * static_cast<double>(b - 1);
          const std::size_t lo = static_cast<std::size_t>(pos);
          const std::size_t hi = std::min(lo + 1, b - 1);
          const double w = pos - static_cast<double>(lo);
          return (1.0 - w) * entry[lo] + w * entry[hi];
        };
        summary.lower(i, j) = pick(0.025);
        summary.upper(i, j) = pick(0.975);
      }
    }
    result.bootstrap = summary;
  }
  return result;
}

WilliamsonForm williamson_decompose(const Mat4& sigma) {
  if (!sigma.allFinite() ||
      (sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("williamson_decompose: matrix must be finite and symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (sigma + sigma.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("williamson_decompose: matrix is not positive-definite");
  }
  const Mat4 inv_sqrt = es.operatorInverseSqrt();

  // sigma^{-1/2} Omega sigma^{-1/2} is antisymmetric and normal, so its real
  // Schur form is block-diagonal with blocks kappa_j [[0,1],[-1,0]], and the
  // symplectic eigenvalues are nu_j = 1/kappa_j.
  Mat4 a = inv_sqrt * symplectic_form() * inv_sqrt;
  a = 0.5 * (a - a.transpose());
  Eigen::RealSchur<Mat4> schur(a);
  Mat4 u = schur.matrixU();
  Mat4 t = schur.matrixT();
  for (int block = 0; block < 2; ++block) {
    const int i = 2 * block;
    if (t(i, i + 1) < 0.0) {
      u.col(i).swap(u.col(i + 1));
      t(i, i + 1) = -t(i, i + 1);
    }
  }

  WilliamsonForm form;
  form.nu = {1.0 / t(0, 1), 1.0 / t(2, 3)};
  Vec4 d_sqrt(std::sqrt(form.nu[0]), std::sqrt(form.nu[0]),
              std::sqrt(form.nu[1]), std::sqrt(form.nu[1]));
  form.S = d_sqrt.asDiagonal() * u.transpose() * inv_sqrt;
  return form;
}

Mat4 project_to_physical(const Mat4& sigma) {
  const WilliamsonForm form = williamson_decompose(sigma);
  if (std::min(form.nu[0], form.nu[1]) >= 0.5) {
    return sigma;
  }
  Vec4 clamped(std::max(form.nu[0], 0.5), std::max(form.nu[0], 0.5),
               std::max(form.nu[1], 0.5), std::max(form.nu[1], 0.5));
  const Mat4 s_inv = form.S.inverse();
  Mat4 repaired = s_inv * clamped.asDiagonal() * s_inv.transpose();
  return 0.5 * (repaired + repaired.transpose());
}

double verify_exact_reconstruction(std::size_t trials, std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("verify_exact_reconstruction: trials must be >= 1");
  }
  std::mt19937_64 engine(seed);
  const Schedule schedule = measurement_schedule(false);
  double max_error = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    const TwoModeGaussianState state = random_physical_state(engine);
    const ReconstructionResult result =
        reconstruct_from_moments(exact_moment_set(state, schedule));
    max_error =
        std::max(max_error, (result.covariance - state.cov()).cwiseAbs().maxCoeff());
  }
  return max_error;
}

}  // namespace covrec
