#pragma once

#include <string>
#include <vector>

#include "spinstar/finite_oracle.hpp"
#include "spinstar/qubit_state.hpp"

namespace spinstar {

// Fixed output schema, versioned via kSchemaVersion.
inline constexpr const char* kStateColumns =
    "t,rho_uu,rho_dd,re_rho_ud,im_rho_ud,sx,sy,sz,entropy,purity";

// 17-significant-digit, locale-independent float formatting ("%.17g").
std::string format_double(double value);

// One data row per grid point; times are expected in output units (1/g0).
std::string state_series_csv(const std::vector<double>& times,
                             const std::vector<QubitState>& states);

// Sweep output: identical schema with a leading temperature column.
struct TaggedSeries {
  double temperature_in_g = 0.0;
  std::vector<double> times;
  std::vector<QubitState> states;
};
std::string sweep_csv(const std::vector<TaggedSeries>& series);

std::string compare_csv(const std::vector<DeviationRow>& rows, bool with_timings);

// Row payloads for the JSON envelope {meta, columns, rows}; meta is attached
// by the caller.
std::vector<std::vector<double>> state_series_rows(const std::vector<double>& times,
                                                   const std::vector<QubitState>& states);

}  // namespace spinstar
