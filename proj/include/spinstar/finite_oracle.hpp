#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "spinstar/model.hpp"
#include "spinstar/qubit_state.hpp"

namespace spinstar {

using BigInt = boost::multiprecision::cpp_int;

// Angular-momentum sector of an N-spin-1/2 bath. Half-integer j is carried
// as twice_j to keep all quantum-number arithmetic exact.
struct SectorLabel {
  int n_bath = 0;
  int twice_j = 0;
  BigInt degeneracy;  // d(N,j) = C(N, N/2-j) - C(N, N/2-j-1)

  double j() const { return 0.5 * twice_j; }
  int multiplet_dim() const { return twice_j + 1; }
};

// d(N,j); twice_j must have the parity of N and lie in [N mod 2, N].
BigInt sector_degeneracy(int n_bath, int twice_j);

// All sectors from j = N/2 down to 0 or 1/2.
std::vector<SectorLabel> sector_list(int n_bath);

// Exact check of sum_j d(N,j) (2j+1) == 2^N.
bool sector_completeness_holds(int n_bath);

// Natural log of a positive big integer (for log-domain Boltzmann weights).
double log_big(const BigInt& value);

// How the finite bath is prepared before the quench:
//  - FullThermal: e^{-H_B/T}/Z on the full 2^N product space, i.e. weights
//    d(N,j) e^{-E_B(j,m)/T} with E_B(j,m) = (2g/N)(j(j+1)-m^2) - g.
//  - CollectiveThermal: the bath is restricted to the maximal j = N/2
//    multiplet and its ladder is occupied geometrically from the all-down
//    end (the thermal state of the effective-mode Hamiltonian 2g b'b
//    truncated to the finite ladder). This is the preparation whose dynamics
//    converges to the thermodynamic-limit series; the full-space thermal
//    state concentrates on j ~ sqrt(N) sectors whose ladder spacing is far
//    detuned from the central-spin splitting, and does not converge.
enum class BathPrep { FullThermal, CollectiveThermal };

struct FiniteBathThermalState {
  struct Entry {
    int twice_j;
    int twice_m;
    double weight;  // normalized, aggregated over the d(N,j) sector copies
  };

  int n_bath = 0;
  BathPrep prep = BathPrep::FullThermal;
  std::vector<Entry> entries;  // ascending (twice_j, twice_m)
  double log_z = 0.0;          // log of the normalizing sum of the raw weights
};

// Full-space thermal weights (spec'd preparation). T = 0 puts equal weight
// on every state of the exact E_B-minimizing (j, m) set.
FiniteBathThermalState finite_thermal_weights(int n_bath, double g, double temperature);

// Maximal-multiplet geometric occupation (see BathPrep).
FiniteBathThermalState collective_thermal_weights(int n_bath, double g, double temperature);

struct OracleOptions {
  int threads = 0;      // 0: hardware concurrency
  int n_cap = 2000;     // refuse larger baths
};

// Exact reduced trajectory of the (N+1)-spin model by sector decomposition:
// within each (j, degeneracy-copy) the conserved excitation splits the
// Hamiltonian into 2x2 blocks over {|up,j,m>, |down,j,m+1>} solved in closed
// form; copies are folded into the (j,m) weights. Blocks are mapped in
// parallel and reduced in fixed (j, m) order, so the output is
// bit-reproducible for any thread count.
StateSeries evolve_finite(int n_bath, const TimeGrid& grid, const ModelParams& params,
                          const InitialSpinState& init, BathPrep prep,
                          const OracleOptions& opts = {});

// Literal product-space reference: builds the full 2^(N+1) Hamiltonian from
// the pairwise flip-flop sums, exponentiates by dense eigendecomposition,
// evolves |psi><psi| x rho_B and partial-traces. N <= 10.
StateSeries brute_force_evolve(int n_bath, const TimeGrid& grid, const ModelParams& params,
                               const InitialSpinState& init,
                               BathPrep prep = BathPrep::FullThermal);

inline constexpr int kBruteForceCap = 10;

struct DeviationRow {
  int n_bath = 0;
  double sup_dev_rho = 0.0;
  double l2_dev_rho = 0.0;      // RMS over grid points
  double sup_dev_entropy = 0.0;
  double wall_seconds = 0.0;
};

// Deviation of the finite-N trajectory (init = Up, zero detuning) from the
// closed-form series, per requested N. CollectiveThermal is the preparation
// that actually converges; FullThermal is accepted for study.
std::vector<DeviationRow> compare_to_limit(const std::vector<int>& n_values,
                                           const TimeGrid& grid, const ModelParams& params,
                                           double eps = 1e-12,
                                           const OracleOptions& opts = {},
                                           BathPrep prep = BathPrep::CollectiveThermal);

}  // namespace spinstar
