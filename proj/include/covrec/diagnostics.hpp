#pragma once

#include "covrec/gaussian_state.hpp"

// Gaussian-state figures of merit computed from the covariance matrix alone.
// Natural-log convention throughout, so E_N of a two-mode squeezed vacuum
// with parameter r is exactly 2r.

namespace covrec {

struct StateDiagnostics {
  double purity = 0.0;
  double min_ppt_symplectic_eig = 0.0;
  double log_negativity = 0.0;
  double epr_variance = 0.0;
  bool physical = false;
};

/// mu = 1/(4 sqrt(det sigma)). Throws for det sigma <= 0.
double purity(const Mat4& sigma);

/// Min symplectic eigenvalue of the partial transpose
/// sigma~ = Lambda sigma Lambda, Lambda = diag(1,1,1,-1). A value < 1/2
/// certifies entanglement for Gaussian states.
double ppt_min_symplectic_eig(const Mat4& sigma);

/// E_N = max(0, -ln(2 nu~_-)).
double log_negativity(const Mat4& sigma);

/// Var(q_a - q_b) + Var(p_a + p_b); below 2 signals nonclassical
/// correlations.
double epr_variance(const Mat4& sigma);

/// All of the above plus the physicality flag. Accepts marginally
/// unphysical estimates: values are computed as defined and flagged.
StateDiagnostics diagnose(const Mat4& sigma, double physical_tol = 1e-9);

}  // namespace covrec
