#pragma once

#include <array>
#include <complex>

#include "spinstar/model.hpp"
#include "spinstar/qubit_state.hpp"
#include "spinstar/thermal_bath.hpp"

namespace spinstar {

// One excitation block of the thermodynamic-limit Hamiltonian, acting on
// span{|up,n>, |down,n+1>} in the rotating frame of H1 = 2g(b'b + S^z):
//   H_block = [[ delta/2, g0 sqrt(n+1) ], [ g0 sqrt(n+1), -delta/2 ]].
struct JcBlock {
  int n;
  double g0;
  double detuning;

  double coupling() const { return g0 * std::sqrt(static_cast<double>(n) + 1.0); }
  double rabi() const { return std::hypot(0.5 * detuning, coupling()); }

  // exp(-i H_block t), row-major {u00, u01, u10, u11}.
  std::array<std::complex<double>, 4> unitary(double t) const;
};

// Closed-form upper-level population at zero detuning for the initial state
// |up>:  rho_uu(t) = sum_n P_n cos^2(g0 t sqrt(n+1)), compensated summation
// in ascending n. Throws std::domain_error when detuning != 0.
double upper_population(double t, const ModelParams& params, const ThermalBathSpec& bath);

// Reduced density matrix at time t. For init = Up at zero detuning this is
// the closed-form path with rho_ud = 0 exactly (the cross terms of the
// evolved product states are off-diagonal in the bath index, so the partial
// trace kills every coherence); otherwise delegates to the block evolution.
QubitState reduced_state(double t, const ModelParams& params, const ThermalBathSpec& bath,
                         const InitialSpinState& init);

// Exact evolution of rho(0) = |psi><psi| x rho_Th in the truncated Fock
// space via per-block 2x2 diagonalization (plus the uncoupled |down,0>),
// followed by the partial trace. Supports arbitrary detuning and initial
// states; reduces to the closed form at delta = 0, init = Up.
StateSeries evolve_general(const TimeGrid& grid, const ModelParams& params,
                           const ThermalBathSpec& bath, const InitialSpinState& init);

// Closed-form population trajectory (init = Up, zero detuning) on a grid.
StateSeries population_series(const TimeGrid& grid, const ModelParams& params,
                              const ThermalBathSpec& bath);

}  // namespace spinstar
