#pragma once

#include <cstdint>
#include <vector>

#include "spinstar/model.hpp"

namespace spinstar {

// Thermal statistics of the effective single bosonic mode with spectrum
// E_n = 2 g n: partition function, geometric occupation probabilities
// P_n = e^{-2gn/T} (1 - e^{-2g/T}), and the eps-controlled truncation used by
// every series evaluation downstream.
struct ThermalBathSpec {
  double g = 1.0;
  double temperature = 0.0;
  std::int64_t cutoff = 0;        // largest retained Fock index
  std::vector<double> probs;      // P_0 .. P_cutoff
  double z = 1.0;                 // partition function (limit value 1 at T = 0)
  double tail_bound = 0.0;        // 1 - sum(probs), evaluated in closed form
};

// Z = 1/(1 - e^{-2g/T}), strictly > 1. T = 0 throws: callers must branch to
// the zero-temperature path (Z -> 1, delta distribution on n = 0).
double partition_function(double g, double temperature);

// P_n; at T = 0 returns 1 for n = 0 and 0 otherwise.
double thermal_prob(std::int64_t n, double g, double temperature);

// Mean occupation 1/(e^{2g/T} - 1); 0 at T = 0.
double mean_occupation(double g, double temperature);

// Smallest cutoff with sum_{n<=cutoff} P_n >= 1 - eps. Hard cap 1e7 on the
// cutoff (capacity_error beyond it).
ThermalBathSpec build_bath(const ModelParams& params, double eps);

inline constexpr std::int64_t kMaxBathCutoff = 10'000'000;

}  // namespace spinstar
