#include "spinstar/finite_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <future>
#include <thread>

#include "spinstar/dynamics.hpp"
#include "spinstar/entropy.hpp"
#include "spinstar/thermal_bath.hpp"

namespace spinstar {

namespace {

void check_n_bath(int n_bath) {
  if (n_bath < 1) throw std::domain_error("n_bath must be >= 1");
}

void check_parity(int n_bath, int twice_j) {
  if (twice_j < n_bath % 2 || twice_j > n_bath || (n_bath - twice_j) % 2 != 0)
    throw std::domain_error("twice_j incompatible with n_bath");
}

}  // namespace

BigInt sector_degeneracy(int n_bath, int twice_j) {
  check_n_bath(n_bath);
  check_parity(n_bath, twice_j);
  const int k = (n_bath - twice_j) / 2;
  BigInt c = 1;  // C(n_bath, k)
  for (int i = 1; i <= k; ++i) c = c * (n_bath - i + 1) / i;
  if (k == 0) return c;
  // C(n_bath, k-1) = C(n_bath, k) * k / (n_bath-k+1)
  const BigInt prev = c * k / (n_bath - k + 1);
  return c - prev;
}

std::vector<SectorLabel> sector_list(int n_bath) {
  check_n_bath(n_bath);
  std::vector<SectorLabel> out;
  out.reserve(n_bath / 2 + 1);
  BigInt binom = 1;  // C(n_bath, k), k = 0
  BigInt prev = 0;
  for (int k = 0; 2 * k <= n_bath; ++k) {
    if (k > 0) {
      prev = binom;
      binom = binom * (n_bath - k + 1) / k;
    }
    out.push_back(SectorLabel{n_bath, n_bath - 2 * k, binom - prev});
  }
  return out;
}

bool sector_completeness_holds(int n_bath) {
  BigInt total = 0;
  for (const SectorLabel& s : sector_list(n_bath))
    total += s.degeneracy * (s.twice_j + 1);
  return total == BigInt(1) << n_bath;
}

double log_big(const BigInt& value) {
  if (value <= 0) throw std::domain_error("log_big: value must be positive");
  const unsigned msb = boost::multiprecision::msb(value);
  if (msb < 900) return std::log(value.convert_to<double>());
  const BigInt shifted = value >> (msb - 900);
  return std::log(shifted.convert_to<double>()) +
         static_cast<double>(msb - 900) * M_LN2;
}

namespace {

// E_B(j,m) = (2g/N)(j(j+1) - m^2) - g, via the exact integer key
// 4(j(j+1) - m^2) = tj(tj+2) - tm^2.
long long bath_energy_key(int twice_j, int twice_m) {
  return static_cast<long long>(twice_j) * (twice_j + 2) -
         static_cast<long long>(twice_m) * twice_m;
}

double bath_energy(int n_bath, double g, int twice_j, int twice_m) {
  return g * static_cast<double>(bath_energy_key(twice_j, twice_m)) /
             (2.0 * n_bath) - g;
}

}  // namespace

FiniteBathThermalState finite_thermal_weights(int n_bath, double g, double temperature) {
  check_n_bath(n_bath);
  if (!(g > 0.0)) throw std::domain_error("finite_thermal_weights: g must be > 0");
  if (!(temperature >= 0.0))
    throw std::domain_error("finite_thermal_weights: temperature must be >= 0");

  const std::vector<SectorLabel> sectors = sector_list(n_bath);

  FiniteBathThermalState state;
  state.n_bath = n_bath;
  state.prep = BathPrep::FullThermal;

  if (temperature == 0.0) {
    // Exact ground set of E_B: minimal integer key, ties weighted by the
    // sector multiplicities.
    long long key_min = bath_energy_key(n_bath, n_bath);
    for (const SectorLabel& s : sectors)
      key_min = std::min(key_min, bath_energy_key(s.twice_j, s.twice_j));
    BigInt total = 0;
    for (const SectorLabel& s : sectors)
      for (int tm = -s.twice_j; tm <= s.twice_j; tm += 2)
        if (bath_energy_key(s.twice_j, tm) == key_min) total += s.degeneracy;
    const double log_total = log_big(total);
    for (auto it = sectors.rbegin(); it != sectors.rend(); ++it)
      for (int tm = -it->twice_j; tm <= it->twice_j; tm += 2)
        if (bath_energy_key(it->twice_j, tm) == key_min)
          state.entries.push_back({it->twice_j, tm,
                                   std::exp(log_big(it->degeneracy) - log_total)});
    state.log_z = log_total;
    return state;
  }

  std::vector<double> logw;
  double max_logw = -std::numeric_limits<double>::infinity();
  for (auto it = sectors.rbegin(); it != sectors.rend(); ++it) {
    const double log_d = log_big(it->degeneracy);
    for (int tm = -it->twice_j; tm <= it->twice_j; tm += 2) {
      const double lw =
          log_d - bath_energy(n_bath, g, it->twice_j, tm) / temperature;
      logw.push_back(lw);
      max_logw = std::max(max_logw, lw);
      state.entries.push_back({it->twice_j, tm, 0.0});
    }
  }
  double sum = 0.0;
  for (double lw : logw) sum += std::exp(lw - max_logw);
  for (std::size_t i = 0; i < logw.size(); ++i)
    state.entries[i].weight = std::exp(logw[i] - max_logw) / sum;
  state.log_z = max_logw + std::log(sum);
  return state;
}

FiniteBathThermalState collective_thermal_weights(int n_bath, double g, double temperature) {
  check_n_bath(n_bath);
  if (!(g > 0.0)) throw std::domain_error("collective_thermal_weights: g must be > 0");
  if (!(temperature >= 0.0))
    throw std::domain_error("collective_thermal_weights: temperature must be >= 0");

  FiniteBathThermalState state;
  state.n_bath = n_bath;
  state.prep = BathPrep::CollectiveThermal;
  state.entries.reserve(n_bath + 1);

  if (temperature == 0.0) {
    state.entries.push_back({n_bath, -n_bath, 1.0});
    state.log_z = 0.0;
    return state;
  }
  const double x = 2.0 * g / temperature;
  // Z over the retained ladder: (1 - r^{N+1})/(1 - r) with r = e^{-x}.
  const double log_z = std::log(-std::expm1(-x * (n_bath + 1))) - std::log(-std::expm1(-x));
  for (int n = 0; n <= n_bath; ++n)
    state.entries.push_back({n_bath, -n_bath + 2 * n, std::exp(-x * n - log_z)});
  state.log_z = log_z;
  return state;
}

namespace {

struct SectorTask {
  int twice_j;
  std::size_t begin, end;  // entry index range within one sector
};

struct TaskBuffers {
  std::vector<double> uu;
  std::vector<double> ud_re, ud_im;
};

struct BlockScalars {
  double hbar, dfrac, kfrac, omega;
};

// 2x2 block over {|up,j,m>, |down,j,m+1>}: diagonal from H_S + E_B, coupling
// (g0/sqrt(N)) sqrt(j(j+1) - m(m+1)).
BlockScalars block_scalars(int n_bath, const ModelParams& p, int twice_j, int twice_m) {
  const double e_up = 0.5 * p.mu0 + bath_energy(n_bath, p.g, twice_j, twice_m);
  const double e_dn = -0.5 * p.mu0 + bath_energy(n_bath, p.g, twice_j, twice_m + 2);
  const double hbar = 0.5 * (e_up + e_dn);
  const double delta = 0.5 * (e_up - e_dn);
  const long long ksq = static_cast<long long>(twice_j) * (twice_j + 2) -
                        static_cast<long long>(twice_m) * (twice_m + 2);
  const double k = p.g0 * std::sqrt(static_cast<double>(ksq)) / (2.0 * std::sqrt(n_bath));
  const double omega = std::hypot(delta, k);
  return {hbar, omega > 0.0 ? delta / omega : 0.0, omega > 0.0 ? k / omega : 0.0, omega};
}

// One task: bath states entries[begin..end) of a single sector. Walks m in
// ascending order carrying the previous block's down-branch amplitudes, so
// each 2x2 block is evaluated once.
TaskBuffers run_task(const SectorTask& task, const FiniteBathThermalState& bath,
                     const ModelParams& params, const std::vector<double>& times,
                     double a2, double b2, bool coherent) {
  const int n_bath = bath.n_bath;
  const int tj = task.twice_j;
  const std::size_t n_t = times.size();

  TaskBuffers buf;
  buf.uu.assign(n_t, 0.0);
  if (coherent) {
    buf.ud_re.assign(n_t, 0.0);
    buf.ud_im.assign(n_t, 0.0);
  }

  // Down-branch state of the current bath index: conj(C_m(t)) and |D_m(t)|^2.
  std::vector<std::complex<double>> cconj(coherent ? n_t : 0);
  std::vector<double> dsq(b2 != 0.0 ? n_t : 0);

  const int tm_first = bath.entries[task.begin].twice_m;
  if (tm_first == -tj) {
    // |down,j,-j> is annihilated by the coupling: free phase only.
    if (coherent) {
      const double e = -0.5 * params.mu0 + bath_energy(n_bath, params.g, tj, -tj);
      for (std::size_t it = 0; it < n_t; ++it)
        cconj[it] = std::polar(1.0, e * times[it]);
    }
    if (b2 != 0.0) std::fill(dsq.begin(), dsq.end(), 0.0);
  } else {
    const BlockScalars blk = block_scalars(n_bath, params, tj, tm_first - 2);
    for (std::size_t it = 0; it < n_t; ++it) {
      const double c = std::cos(blk.omega * times[it]);
      const double s = std::sin(blk.omega * times[it]);
      if (coherent)
        cconj[it] = std::conj(std::polar(1.0, -blk.hbar * times[it]) *
                              std::complex<double>(c, blk.dfrac * s));
      if (b2 != 0.0) {
        const double ks = blk.kfrac * s;
        dsq[it] = ks * ks;
      }
    }
  }

  for (std::size_t idx = task.begin; idx < task.end; ++idx) {
    const auto& entry = bath.entries[idx];
    const double w = entry.weight;
    const int tm = entry.twice_m;
    if (tm < tj) {
      const BlockScalars blk = block_scalars(n_bath, params, tj, tm);
      for (std::size_t it = 0; it < n_t; ++it) {
        const double c = std::cos(blk.omega * times[it]);
        const double s = std::sin(blk.omega * times[it]);
        const double ds = blk.dfrac * s;
        const double usq = c * c + ds * ds;
        double contrib = a2 * usq;
        if (b2 != 0.0) contrib += b2 * dsq[it];
        buf.uu[it] += w * contrib;
        if (coherent) {
          const std::complex<double> phase = std::polar(1.0, -blk.hbar * times[it]);
          const std::complex<double> a_amp = phase * std::complex<double>(c, -ds);
          const std::complex<double> term = a_amp * cconj[it];
          buf.ud_re[it] += w * term.real();
          buf.ud_im[it] += w * term.imag();
          cconj[it] = std::conj(phase * std::complex<double>(c, ds));
        }
        if (b2 != 0.0) {
          const double ks = blk.kfrac * s;
          dsq[it] = ks * ks;
        }
      }
    } else {
      // |up,j,j> is annihilated by the coupling: free phase only.
      const double e = 0.5 * params.mu0 + bath_energy(n_bath, params.g, tj, tj);
      for (std::size_t it = 0; it < n_t; ++it) {
        double contrib = a2;
        if (b2 != 0.0) contrib += b2 * dsq[it];
        buf.uu[it] += w * contrib;
        if (coherent) {
          const std::complex<double> a_amp = std::polar(1.0, -e * times[it]);
          const std::complex<double> term = a_amp * cconj[it];
          buf.ud_re[it] += w * term.real();
          buf.ud_im[it] += w * term.imag();
        }
      }
    }
  }
  return buf;
}

constexpr std::size_t kTaskChunk = 128;

}  // namespace

StateSeries evolve_finite(int n_bath, const TimeGrid& grid, const ModelParams& params,
                          const InitialSpinState& init, BathPrep prep,
                          const OracleOptions& opts) {
  check_n_bath(n_bath);
  if (n_bath > opts.n_cap)
    throw capacity_error("evolve_finite: n_bath exceeds the configured cap");

  const FiniteBathThermalState bath = prep == BathPrep::FullThermal
                                          ? finite_thermal_weights(n_bath, params.g, params.temperature)
                                          : collective_thermal_weights(n_bath, params.g, params.temperature);

  const std::complex<double> alpha = init.alpha();
  const std::complex<double> beta = init.beta();
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);
  const std::complex<double> ab = alpha * std::conj(beta);
  const bool coherent = ab != std::complex<double>(0.0, 0.0);

  // Fixed task partition (independent of the thread count): each sector's
  // m-range is chunked, tasks are reduced in ascending (j, m) order.
  std::vector<SectorTask> tasks;
  for (std::size_t i = 0; i < bath.entries.size();) {
    std::size_t sector_end = i;
    while (sector_end < bath.entries.size() &&
           bath.entries[sector_end].twice_j == bath.entries[i].twice_j)
      ++sector_end;
    for (std::size_t begin = i; begin < sector_end; begin += kTaskChunk)
      tasks.push_back(SectorTask{bath.entries[i].twice_j, begin,
                                 std::min(begin + kTaskChunk, sector_end)});
    i = sector_end;
  }

  const std::vector<double> times = grid.times();
  const std::size_t n_t = times.size();
  std::vector<double> uu(n_t, 0.0), ud_re, ud_im;
  if (coherent) {
    ud_re.assign(n_t, 0.0);
    ud_im.assign(n_t, 0.0);
  }

  const unsigned hw = std::thread::hardware_concurrency();
  const int n_threads =
      opts.threads > 0 ? opts.threads : static_cast<int>(hw > 0 ? hw : 1);

  auto accumulate = [&](const TaskBuffers& buf) {
    for (std::size_t it = 0; it < n_t; ++it) uu[it] += buf.uu[it];
    if (coherent)
      for (std::size_t it = 0; it < n_t; ++it) {
        ud_re[it] += buf.ud_re[it];
        ud_im[it] += buf.ud_im[it];
      }
  };

  if (n_threads <= 1 || tasks.size() <= 1) {
    for (const SectorTask& task : tasks)
      accumulate(run_task(task, bath, params, times, a2, b2, coherent));
  } else {
    const std::size_t wave = static_cast<std::size_t>(n_threads) * 2;
    for (std::size_t base = 0; base < tasks.size(); base += wave) {
      const std::size_t count = std::min(wave, tasks.size() - base);
      std::vector<std::future<TaskBuffers>> futures;
      futures.reserve(count);
      for (std::size_t i = 0; i < count; ++i)
        futures.push_back(std::async(std::launch::async, [&, i] {
          return run_task(tasks[base + i], bath, params, times, a2, b2, coherent);
        }));
      for (std::size_t i = 0; i < count; ++i) accumulate(futures[i].get());
    }
  }

  StateSeries out;
  out.times = times;
  out.states.resize(n_t);
  for (std::size_t it = 0; it < n_t; ++it) {
    QubitState st;
    st.rho_uu = uu[it];
    st.rho_ud = coherent ? ab * std::complex<double>(ud_re[it], ud_im[it])
                         : std::complex<double>(0.0, 0.0);
    out.states[it] = st;
  }
  return out;
}

std::vector<DeviationRow> compare_to_limit(const std::vector<int>& n_values,
                                           const TimeGrid& grid, const ModelParams& params,
                                           double eps, const OracleOptions& opts,
                                           BathPrep prep) {
  if (params.detuning() != 0.0)
    throw std::domain_error("compare_to_limit: requires zero detuning");

  const ThermalBathSpec bath = build_bath(params, eps);
  const std::vector<double> times = grid.times();
  std::vector<double> limit_uu(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    limit_uu[i] = upper_population(times[i], params, bath);

  std::vector<DeviationRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    const auto start = std::chrono::steady_clock::now();
    const StateSeries series =
        evolve_finite(n, grid, params, InitialSpinState::up(), prep, opts);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    DeviationRow row;
    row.n_bath = n;
    row.wall_seconds = wall;
    double sq_sum = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double dev = std::abs(series.states[i].rho_uu - limit_uu[i]);
      row.sup_dev_rho = std::max(row.sup_dev_rho, dev);
      sq_sum += dev * dev;
      const double s_fin = von_neumann_entropy(series.states[i]);
      const double s_lim = von_neumann_entropy(QubitState{limit_uu[i], 0.0});
      row.sup_dev_entropy = std::max(row.sup_dev_entropy, std::abs(s_fin - s_lim));
    }
    row.l2_dev_rho = std::sqrt(sq_sum / static_cast<double>(times.size()));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spinstar
