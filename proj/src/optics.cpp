#include "covrec/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace covrec {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

double phase_angle(QuadraturePhase phase) {
  switch (phase) {
    case QuadraturePhase::X: return 0.0;
    case QuadraturePhase::Y: return kPi / 2.0;
    case QuadraturePhase::Z: return kPi / 4.0;
    case QuadraturePhase::T: return -kPi / 4.0;
  }
  throw std::invalid_argument("phase_angle: invalid phase");
}

OpticalSetting setting_for_mode(ModeLabel label) {
  switch (label) {
    case ModeLabel::A: return {false, 0.0, {}};
    case ModeLabel::B: return {false, kPi / 2.0, {}};
    case ModeLabel::C: return {false, kPi / 4.0, {}};
    case ModeLabel::D: return {false, -kPi / 4.0, {}};
    case ModeLabel::E: return {true, kPi / 4.0, {}};
    // f = (ia - b)/sqrt2 is selected, up to the sign convention, by the
    // quarter-wave plate with the rotator at -pi/4.
    case ModeLabel::F: return {true, -kPi / 4.0, {}};
  }
  throw std::invalid_argument("setting_for_mode: invalid mode");
}

OpticalSetting setting_for_entry(const ScheduleEntry& entry) {
  OpticalSetting setting = setting_for_mode(entry.mode);
  setting.lo_phase = phase_angle(entry.phase);
  return setting;
}

std::pair<std::complex<double>, std::complex<double>> selected_mode_coefficients(
    const OpticalSetting& setting) {
  const double phi_w = setting.quarter_wave ? kPi / 2.0 : 0.0;
  const std::complex<double> alpha =
      std::exp(std::complex<double>(0.0, phi_w)) * std::cos(setting.theta);
  return {alpha, std::sin(setting.theta)};
}

std::pair<std::complex<double>, std::complex<double>> mode_coefficients(
    ModeLabel label) {
  using namespace std::complex_literals;
  switch (label) {
    case ModeLabel::A: return {1.0, 0.0};
    case ModeLabel::B: return {0.0, 1.0};
    case ModeLabel::C: return {kInvSqrt2, kInvSqrt2};
    case ModeLabel::D: return {kInvSqrt2, -kInvSqrt2};
    case ModeLabel::E: return {1i * kInvSqrt2, kInvSqrt2};
    case ModeLabel::F: return {1i * kInvSqrt2, -kInvSqrt2};
  }
  throw std::invalid_argument("mode_coefficients: invalid mode");
}

namespace {

// x_{k,phi} for k = alpha a + beta b expands to
//   Re(alpha e^{-i phi}) q_a - Im(alpha e^{-i phi}) p_a
// + Re(beta  e^{-i phi}) q_b - Im(beta  e^{-i phi}) p_b.
QuadratureVector vector_from_coefficients(std::complex<double> alpha,
                                          std::complex<double> beta, double phi) {
  const std::complex<double> rot = std::exp(std::complex<double>(0.0, -phi));
  const std::complex<double> ca = alpha * rot;
  const std::complex<double> cb = beta * rot;
  return QuadratureVector(ca.real(), -ca.imag(), cb.real(), -cb.imag());
}

}  // namespace

QuadratureVector quadrature_vector(ModeLabel label, QuadraturePhase phase) {
  auto [alpha, beta] = mode_coefficients(label);
  return vector_from_coefficients(alpha, beta, phase_angle(phase));
}

QuadratureVector quadrature_vector_from_setting(const OpticalSetting& setting) {
  if (!setting.lo_phase) {
    throw std::invalid_argument("quadrature_vector_from_setting: lo_phase unset");
  }
  const double phi = *setting.lo_phase;
  const double phi_w = setting.quarter_wave ? kPi / 2.0 : 0.0;
  const double ct = std::cos(setting.theta);
  const double st = std::sin(setting.theta);
  // cos(theta) x_{a,phi-phi_w} + sin(theta) x_{b,phi} with
  // x_{m,psi} = cos(psi) q_m + sin(psi) p_m.
  return QuadratureVector(ct * std::cos(phi - phi_w), ct * std::sin(phi - phi_w),
                          st * std::cos(phi), st * std::sin(phi));
}

Schedule measurement_schedule(bool include_f) {
  using enum ModeLabel;
  using enum QuadraturePhase;
  Schedule schedule = {
      {A, X}, {A, Y}, {A, Z}, {A, T},
      {B, X}, {B, Y}, {B, Z}, {B, T},
      {C, X}, {C, Y}, {D, X}, {D, Y},
      {E, X}, {E, Y},
  };
  if (include_f) {
    schedule.push_back({F, X});
    schedule.push_back({F, Y});
  }
  return schedule;
}

std::string to_string(ModeLabel label) {
  switch (label) {
    case ModeLabel::A: return "a";
    case ModeLabel::B: return "b";
    case ModeLabel::C: return "c";
    case ModeLabel::D: return "d";
    case ModeLabel::E: return "e";
    case ModeLabel::F: return "f";
  }
  throw std::invalid_argument("to_string: invalid mode");
}

std::string to_string(QuadraturePhase phase) {
  switch (phase) {
    case QuadraturePhase::X: return "x";
    case QuadraturePhase::Y: return "y";
    case QuadraturePhase::Z: return "z";
    case QuadraturePhase::T: return "t";
  }
  throw std::invalid_argument("to_string: invalid phase");
}

std::string token(const ScheduleEntry& entry) {
  return to_string(entry.mode) + ":" + to_string(entry.phase);
}

ScheduleEntry parse_token(const std::string& tok) {
  if (tok.size() != 3 || tok[1] != ':') {
    throw std::invalid_argument("parse_token: malformed setting token '" + tok + "'");
  }
  ModeLabel mode;
  switch (tok[0]) {
    case 'a': mode = ModeLabel::A; break;
    case 'b': mode = ModeLabel::B; break;
    case 'c': mode = ModeLabel::C; break;
    case 'd': mode = ModeLabel::D; break;
    case 'e': mode = ModeLabel::E; break;
    case 'f': mode = ModeLabel::F; break;
    default:
      throw std::invalid_argument("parse_token: unknown mode in '" + tok + "'");
  }
  QuadraturePhase phase;
  switch (tok[2]) {
    case 'x': phase = QuadraturePhase::X; break;
    case 'y': phase = QuadraturePhase::Y; break;
    case 'z': phase = QuadraturePhase::Z; break;
    case 't': phase = QuadraturePhase::T; break;
    default:
      throw std::invalid_argument("parse_token: unknown phase in '" + tok + "'");
  }
  return {mode, phase};
}

}  // namespace covrec
