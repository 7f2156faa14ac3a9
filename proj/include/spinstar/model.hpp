#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace spinstar {

// Physical couplings of the spin-star model, hbar = k_B = 1. All members are
// raw energies; unit conventions (temperature in units of g, time in units of
// 1/g0) live at the CLI boundary only.
struct ModelParams {
  double mu0;          // local magnetic field on the central spin
  double g;            // intra-bath coupling
  double g0;           // system-bath coupling
  double temperature;  // T >= 0

  // Recomputed, never stored: detuning between the central-spin splitting and
  // the effective bath mode frequency 2g.
  double detuning() const { return mu0 - 2.0 * g; }
};

inline ModelParams make_params(double mu0, double g, double g0, double temperature) {
  if (!(g > 0.0)) throw std::domain_error("make_params: g must be > 0");
  if (!(g0 > 0.0)) throw std::domain_error("make_params: g0 must be > 0");
  if (!(temperature >= 0.0)) throw std::domain_error("make_params: temperature must be >= 0");
  return ModelParams{mu0, g, g0, temperature};
}

// Zero detuning: mu0 = 2g exactly.
inline ModelParams resonant_params(double g, double g0, double temperature) {
  return make_params(2.0 * g, g, g0, temperature);
}

// Pure initial state of the central spin, alpha|up> + beta|down> with
// alpha = cos(theta/2), beta = e^{i phi} sin(theta/2).
struct InitialSpinState {
  enum class Kind { Up, Down, General };

  Kind kind = Kind::Up;
  double theta = 0.0;
  double phi = 0.0;

  static InitialSpinState up() { return {Kind::Up, 0.0, 0.0}; }
  static InitialSpinState down() { return {Kind::Down, M_PI, 0.0}; }
  static InitialSpinState general(double theta, double phi) {
    return {Kind::General, theta, phi};
  }

  std::complex<double> alpha() const {
    switch (kind) {
      case Kind::Up: return 1.0;
      case Kind::Down: return 0.0;
      default: return std::cos(theta / 2.0);
    }
  }
  std::complex<double> beta() const {
    switch (kind) {
      case Kind::Up: return 0.0;
      case Kind::Down: return 1.0;
      default: return std::polar(std::sin(theta / 2.0), phi);
    }
  }
  bool is_up() const { return kind == Kind::Up; }
};

// Uniform time grid t_k = k * t_max / steps, k = 0..steps. Times are raw
// (inverse energy); t_0 = 0 is always included.
struct TimeGrid {
  double t_max;
  int steps;

  TimeGrid(double t_max_, int steps_) : t_max(t_max_), steps(steps_) {
    if (!(t_max > 0.0)) throw std::domain_error("TimeGrid: t_max must be > 0");
    if (steps < 1) throw std::domain_error("TimeGrid: steps must be >= 1");
  }

  int size() const { return steps + 1; }
  double time_at(int k) const { return t_max * static_cast<double>(k) / steps; }

  std::vector<double> times() const {
    std::vector<double> out(size());
    for (int k = 0; k < size(); ++k) out[k] = time_at(k);
    return out;
  }
};

// Resource-cap violations (Fock cutoff, bath size); distinct from parameter
// domain errors so the CLI can map them to a different exit code.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinstar
