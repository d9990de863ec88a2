#include "covrec/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace covrec {

double purity(const Mat4& sigma) {
  const double det = sigma.determinant();
  if (!(det > 0.0)) {
    throw std::invalid_argument("purity: det(sigma) must be positive");
  }
  return 1.0 / (4.0 * std::sqrt(det));
}

double ppt_min_symplectic_eig(const Mat4& sigma) {
  Vec4 lambda(1.0, 1.0, 1.0, -1.0);  // partial transposition flips p_b
  const Mat4 tilde = lambda.asDiagonal() * sigma * lambda.asDiagonal();
  return symplectic_eigenvalues(tilde)[0];
}

double log_negativity(const Mat4& sigma) {
  return std::max(0.0, -std::log(2.0 * ppt_min_symplectic_eig(sigma)));
}

double epr_variance(const Mat4& sigma) {
  return sigma(0, 0) + sigma(2, 2) - 2.0 * sigma(0, 2) +
         sigma(1, 1) + sigma(3, 3) + 2.0 * sigma(1, 3);
}

StateDiagnostics diagnose(const Mat4& sigma, double physical_tol) {
  StateDiagnostics d;
  d.purity = purity(sigma);
  d.min_ppt_symplectic_eig = ppt_min_symplectic_eig(sigma);
  d.log_negativity = std::max(0.0, -std::log(2.0 * d.min_ppt_symplectic_eig));
  d.epr_variance = epr_variance(sigma);
  d.physical = is_physical(sigma, physical_tol);
  return d;
}

}  // namespace covrec
