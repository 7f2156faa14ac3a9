#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spinstar/qubit_state.hpp"

namespace spinstar {

// Mixedness measures of one trajectory sample. Entropy is in nats.
struct EntropySample {
  double t = 0.0;
  double entropy = 0.0;     // in [0, ln 2]
  double purity = 1.0;      // Tr rho^2 in [1/2, 1]
  double bloch_norm = 1.0;  // |s| in [0, 1]
};

struct EntropySeries {
  std::vector<EntropySample> samples;
};

// lambda_{1,2} = (1 +- |s|)/2, descending. |s| is clamped to 1 so that
// rounding-level positivity violations cannot produce a negative eigenvalue.
std::pair<double, double> eigenvalues(const QubitState& state);

// S = -lambda1 ln lambda1 - lambda2 ln lambda2, with 0 ln 0 := 0.
double von_neumann_entropy(const QubitState& state);

// Tr rho^2 = (1 + |s|^2)/2.
double purity(const QubitState& state);

EntropySeries entropy_series(const StateSeries& series);

// Period/extrema diagnostics of an oscillatory series. Extrema come from
// three-point comparison filtered by prominence (fraction of the series
// range); the period is the median gap among the leading prominent maxima,
// since the late-time collapse/revival pattern is chirped and would drag a
// whole-series median away from the dominant early oscillation.
struct OscillationSummary {
  double period = 0.0;
  std::vector<double> maxima_times;
  std::vector<double> minima_times;
};

// Requires series length >= 8. Returns nullopt when fewer than two prominent
// interior maxima exist (no oscillation detected).
std::optional<OscillationSummary> oscillation_diagnostics(
    const std::vector<double>& times, const std::vector<double>& values,
    double min_prominence_frac = 0.02, int leading_max_count = 4);

}  // namespace spinstar
