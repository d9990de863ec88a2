#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covrec/gaussian_state.hpp"

// Mode-selection optics: a removable quarter-wave plate, a polarization
// rotator R_theta and a PBS pick one vertically polarized mode
// k = e^{i phi_w} cos(theta) a + sin(theta) b out of the input pair (a, b),
// and a single homodyne detector then measures x_{k,phi} at LO phase phi.
//
// Derived modes: c = (a+b)/sqrt2, d = (a-b)/sqrt2, e = (ia+b)/sqrt2,
// f = (ia-b)/sqrt2.

namespace covrec {

enum class ModeLabel { A, B, C, D, E, F };

/// LO phase conventions: x -> 0, y -> pi/2, z -> pi/4, t -> -pi/4.
enum class QuadraturePhase { X, Y, Z, T };

double phase_angle(QuadraturePhase phase);

/// Wave-plate flag and rotator angle that select one mode; the LO phase is
/// filled in per schedule entry.
struct OpticalSetting {
  bool quarter_wave = false;
  double theta = 0.0;
  std::optional<double> lo_phase;
};

struct ScheduleEntry {
  ModeLabel mode;
  QuadraturePhase phase;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

using Schedule = std::vector<ScheduleEntry>;

/// Optics settings selecting each mode:
///   a -> (no, 0), b -> (no, +pi/2), c -> (no, +pi/4), d -> (no, -pi/4),
///   e -> (yes, +pi/4), f -> (yes, -pi/4).
OpticalSetting setting_for_mode(ModeLabel label);

/// Setting for a schedule entry, with lo_phase set to the entry's phase.
OpticalSetting setting_for_entry(const ScheduleEntry& entry);

/// (alpha, beta) of the selected mode k = alpha a + beta b, from the optics
/// path: alpha = e^{i phi_w} cos(theta), beta = sin(theta), with
/// phi_w = pi/2 when the quarter-wave plate is inserted and 0 otherwise.
std::pair<std::complex<double>, std::complex<double>> selected_mode_coefficients(
    const OpticalSetting& setting);

/// (alpha, beta) straight from the defining linear combinations of the
/// derived modes (independent of the optics route).
std::pair<std::complex<double>, std::complex<double>> mode_coefficients(
    ModeLabel label);

/// Linear form of x_{k,phi} on (q_a, p_a, q_b, p_b), built from the mode
/// definitions. Unit Euclidean norm.
QuadratureVector quadrature_vector(ModeLabel label, QuadraturePhase phase);

/// Same linear form obtained through the optics expansion
/// x_{k,phi} = cos(theta) x_{a,phi-phi_w} + sin(theta) x_{b,phi}.
/// Requires lo_phase to be set.
QuadratureVector quadrature_vector_from_setting(const OpticalSetting& setting);

/// The measurement schedule, in fixed row-major order:
///   a:(x,y,z,t), b:(x,y,z,t), c:(x,y), d:(x,y), e:(x,y)  -- 14 entries;
/// with include_f, f:(x,y) is appended for 16 entries.
Schedule measurement_schedule(bool include_f);

/// Serialized form "<mode>:<phase>", e.g. "e:y"; the join key across
/// dataset files.
std::string token(const ScheduleEntry& entry);
ScheduleEntry parse_token(const std::string& tok);

std::string to_string(ModeLabel label);
std::string to_string(QuadraturePhase phase);

}  // namespace covrec
