#pragma once

#include <random>

#include "covrec/gaussian_state.hpp"

// Symplectic generators and random physical states, used by the exactness
// oracle and by property tests.

namespace covrec {

/// Single-mode phase rotations by phi_a, phi_b (block-diagonal, orthogonal).
Mat4 rotation_symplectic(double phi_a, double phi_b);

/// Single-mode squeezers diag(e^r, e^-r) per mode.
Mat4 squeeze_symplectic(double r_a, double r_b);

/// Two-mode squeezer: [[cosh r I, sinh r Z], [sinh r Z, cosh r I]],
/// Z = diag(1,-1). Applied to vacuum it produces the two-mode squeezed state.
Mat4 two_mode_squeeze_symplectic(double r);

/// Beam splitter mixing the modes: [[cos I, sin I], [-sin I, cos I]].
Mat4 beam_splitter_symplectic(double theta);

/// Random composition of the generators above, with squeezing bounded to
/// keep conditioning sane.
Mat4 random_symplectic(std::mt19937_64& rng);

/// Random physical state: thermal symplectic spectrum nu in [1/2, 2]
/// conjugated by a random symplectic, mean uniform in [-2, 2]^4.
TwoModeGaussianState random_physical_state(std::mt19937_64& rng);

}  // namespace covrec
