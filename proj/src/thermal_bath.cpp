#include "spinstar/thermal_bath.hpp"

#include <cmath>
#include <string>

#include "spinstar/kahan.hpp"

namespace spinstar {

namespace {

void check_gT(double g, double temperature, const char* who) {
  if (!(g > 0.0)) throw std::domain_error(std::string(who) + ": g must be > 0");
  if (!(temperature >= 0.0))
    throw std::domain_error(std::string(who) + ": temperature must be >= 0");
}

}  // namespace

double partition_function(double g, double temperature) {
  check_gT(g, temperature, "partition_function");
  if (temperature == 0.0)
    throw std::domain_error(
        "partition_function: T = 0, use the zero-temperature path (Z -> 1)");
  // 1/(1 - e^{-2g/T}); expm1 keeps precision in the high-T regime where
  // e^{-2g/T} is close to 1.
  return -1.0 / std::expm1(-2.0 * g / temperature);
}

double thermal_prob(std::int64_t n, double g, double temperature) {
  check_gT(g, temperature, "thermal_prob");
  if (n < 0) throw std::domain_error("thermal_prob: n must be >= 0");
  if (temperature == 0.0) return n == 0 ? 1.0 : 0.0;
  const double x = 2.0 * g / temperature;
  return std::exp(-x * static_cast<double>(n)) * (-std::expm1(-x));
}

double mean_occupation(double g, double temperature) {
  check_gT(g, temperature, "mean_occupation");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(2.0 * g / temperature);
}

ThermalBathSpec build_bath(const ModelParams& params, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::domain_error("build_bath: eps must lie in (0, 1)");
  const double g = params.g;
  const double T = params.temperature;
  check_gT(g, T, "build_bath");

  ThermalBathSpec bath;
  bath.g = g;
  bath.temperature = T;

  if (T == 0.0) {
    bath.cutoff = 0;
    bath.probs = {1.0};
    bath.z = 1.0;
    bath.tail_bound = 0.0;
    return bath;
  }

  const double x = 2.0 * g / T;
  // Geometric tail after n_max is e^{-x (n_max+1)}; solve for the smallest
  // cutoff with tail <= eps, then nudge up if rounding left it above.
  double estimate = std::ceil(std::log(1.0 / eps) / x) - 1.0;
  if (estimate < 0.0) estimate = 0.0;
  if (estimate > static_cast<double>(kMaxBathCutoff))
    throw capacity_error("build_bath: required cutoff exceeds 1e7 (T/g too large for eps)");
  std::int64_t cutoff = static_cast<std::int64_t>(estimate);
  auto tail = [&](std::int64_t m) { return std::exp(-x * static_cast<double>(m + 1)); };
  while (tail(cutoff) > eps) {
    ++cutoff;
    if (cutoff > kMaxBathCutoff)
      throw capacity_error("build_bath: required cutoff exceeds 1e7");
  }

  bath.cutoff = cutoff;
  bath.z = -1.0 / std::expm1(-x);
  bath.tail_bound = tail(cutoff);
  bath.probs.resize(static_cast<std::size_t>(cutoff) + 1);
  const double ratio = std::exp(-x);
  double p = -std::expm1(-x);  // P_0 = 1/Z
  for (std::int64_t n = 0; n <= cutoff; ++n) {
    bath.probs[static_cast<std::size_t>(n)] = p;
    p *= ratio;
  }
  return bath;
}

}  // namespace spinstar
