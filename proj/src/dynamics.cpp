#include "spinstar/dynamics.hpp"

#include <cmath>

#include "spinstar/kahan.hpp"

namespace spinstar {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

std::array<std::complex<double>, 4> JcBlock::unitary(double t) const {
  const double half_delta = 0.5 * detuning;
  const double k = coupling();
  const double omega = std::hypot(half_delta, k);
  if (omega == 0.0) return {1.0, 0.0, 0.0, 1.0};
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  const std::complex<double> diag_shift = -kI * (half_delta / omega) * s;
  const std::complex<double> off = -kI * (k / omega) * s;
  return {c + diag_shift, off, off, c - diag_shift};
}

double upper_population(double t, const ModelParams& params, const ThermalBathSpec& bath) {
  if (params.detuning() != 0.0)
    throw std::domain_error(
        "upper_population: closed form requires zero detuning; use evolve_general");
  KahanAccumulator<double> acc;
  for (std::size_t n = 0; n < bath.probs.size(); ++n) {
    const double c = std::cos(params.g0 * t * std::sqrt(static_cast<double>(n) + 1.0));
    acc += bath.probs[n] * c * c;
  }
  return acc.value();
}

QubitState reduced_state(double t, const ModelParams& params, const ThermalBathSpec& bath,
                         const InitialSpinState& init) {
  if (!(t >= 0.0)) throw std::domain_error("reduced_state: t must be >= 0");
  if (init.is_up() && params.detuning() == 0.0)
    return QubitState{upper_population(t, params, bath), 0.0};
  TimeGrid grid(t > 0.0 ? t : 1.0, 1);
  const StateSeries series = evolve_general(grid, params, bath, init);
  return t > 0.0 ? series.states.back() : series.states.front();
}

StateSeries evolve_general(const TimeGrid& grid, const ModelParams& params,
                           const ThermalBathSpec& bath, const InitialSpinState& init) {
  const double delta = params.detuning();
  const double half_delta = 0.5 * delta;
  const std::complex<double> alpha = init.alpha();
  const std::complex<double> beta = init.beta();
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);
  const std::complex<double> ab = alpha * std::conj(beta);
  const bool coherent = ab != std::complex<double>(0.0, 0.0);
  const std::size_t n_terms = bath.probs.size();

  StateSeries out;
  out.times = grid.times();
  out.states.resize(out.times.size());

  // Per-block Rabi frequencies and the delta/Omega, k/Omega splitting ratios.
  std::vector<double> omega(n_terms), dfrac(n_terms), kfrac(n_terms);
  for (std::size_t n = 0; n < n_terms; ++n) {
    const double k = params.g0 * std::sqrt(static_cast<double>(n) + 1.0);
    omega[n] = std::hypot(half_delta, k);
    dfrac[n] = half_delta / omega[n];
    kfrac[n] = k / omega[n];
  }

  for (std::size_t it = 0; it < out.times.size(); ++it) {
    const double t = out.times[it];
    // Amplitudes without the H1 phase e^{-i 2g(n+1/2)t}, which cancels in the
    // populations and reduces to the constant e^{-i 2g t} in the coherence.
    //   up branch   |up,n>   -> u_n |up,n>   + (-i kfrac_n sin) |down,n+1>
    //   down branch |down,n> -> v_n |down,n> + d_n |up,n-1>
    KahanAccumulator<double> uu;
    KahanAccumulator<std::complex<double>> ud;
    std::complex<double> prev_v = std::exp(kI * half_delta * t);  // v_0: free |down,0>
    double prev_k2 = 0.0;                                         // |d_0|^2 = 0
    for (std::size_t n = 0; n < n_terms; ++n) {
      const double c = std::cos(omega[n] * t);
      const double s = std::sin(omega[n] * t);
      const std::complex<double> u(c, -dfrac[n] * s);
      if (a2 != 0.0) uu += a2 * bath.probs[n] * std::norm(u);
      if (b2 != 0.0) uu += b2 * bath.probs[n] * prev_k2;
      if (coherent) ud += bath.probs[n] * u * std::conj(prev_v);
      prev_v = std::complex<double>(c, dfrac[n] * s);
      const double ks = kfrac[n] * s;
      prev_k2 = ks * ks;
    }
    QubitState state;
    state.rho_uu = uu.value();
    state.rho_ud = coherent ? ab * std::exp(-2.0 * kI * params.g * t) * ud.value()
                            : std::complex<double>(0.0, 0.0);
    out.states[it] = state;
  }
  return out;
}

StateSeries population_series(const TimeGrid& grid, const ModelParams& params,
                              const ThermalBathSpec& bath) {
  if (params.detuning() != 0.0)
    throw std::domain_error(
        "population_series: closed form requires zero detuning; use evolve_general");
  StateSeries out;
  out.times = grid.times();
  out.states.reserve(out.times.size());
  for (double t : out.times)
    out.states.push_back(QubitState{upper_population(t, params, bath), 0.0});
  return out;
}

}  // namespace spinstar
