#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace spinstar {

// 2x2 reduced density matrix of the central spin. Only rho_uu and the upper
// off-diagonal are stored; rho_dd = 1 - rho_uu and rho_du = conj(rho_ud), so
// unit trace and hermiticity hold by construction.
struct QubitState {
  double rho_uu = 1.0;
  std::complex<double> rho_ud = 0.0;

  double rho_dd() const { return 1.0 - rho_uu; }

  // Bloch vector of rho = (I + s.sigma)/2:
  //   s1 = 2 Re rho_ud, s2 = -2 Im rho_ud, s3 = rho_uu - rho_dd.
  std::array<double, 3> bloch() const {
    return {2.0 * rho_ud.real(), -2.0 * rho_ud.imag(), rho_uu - rho_dd()};
  }

  double bloch_norm() const {
    const auto s = bloch();
    return std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
  }

  // Positivity defect rho_uu*rho_dd - |rho_ud|^2; >= -1e-12 for states
  // produced by the evolution paths.
  double positivity() const { return rho_uu * rho_dd() - std::norm(rho_ud); }
};

// Sampled central-spin trajectory on a uniform grid; times are raw.
struct StateSeries {
  std::vector<double> times;
  std::vector<QubitState> states;

  std::size_t size() const { return times.size(); }
};

}  // namespace spinstar
