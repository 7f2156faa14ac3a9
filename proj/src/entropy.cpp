#include "spinstar/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinstar {

namespace {

double xlnx(double x) {
  if (x < 1e-300) return 0.0;  // 0 ln 0 := 0
  return x * std::log(x);
}

}  // namespace

std::pair<double, double> eigenvalues(const QubitState& state) {
  const double s = std::min(state.bloch_norm(), 1.0);
  return {0.5 * (1.0 + s), 0.5 * (1.0 - s)};
}

double von_neumann_entropy(const QubitState& state) {
  const auto [l1, l2] = eigenvalues(state);
  return -xlnx(l1) - xlnx(l2);
}

double purity(const QubitState& state) {
  const double s = std::min(state.bloch_norm(), 1.0);
  return 0.5 * (1.0 + s * s);
}

EntropySeries entropy_series(const StateSeries& series) {
  EntropySeries out;
  out.samples.resize(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const QubitState& st = series.states[i];
    out.samples[i] = EntropySample{series.times[i], von_neumann_entropy(st), purity(st),
                                   std::min(st.bloch_norm(), 1.0)};
  }
  return out;
}

std::optional<OscillationSummary> oscillation_diagnostics(const std::vector<double>& times,
                                                          const std::vector<double>& values,
                                                          double min_prominence_frac,
                                                          int leading_max_count) {
  if (times.size() != values.size())
    throw std::domain_error("oscillation_diagnostics: times/values size mismatch");
  if (times.size() < 8)
    throw std::domain_error("oscillation_diagnostics: series length must be >= 8");

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double range = *hi_it - *lo_it;
  if (range <= 0.0) return std::nullopt;
  const double min_prominence = min_prominence_frac * range;

  std::vector<std::size_t> raw_max, raw_min;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) raw_max.push_back(i);
    if (values[i] < values[i - 1] && values[i] < values[i + 1]) raw_min.push_back(i);
  }

  // Prominence of a maximum: drop to the nearest flanking raw minima (series
  // endpoints act as minima at the edges).
  OscillationSummary summary;
  for (std::size_t i : raw_max) {
    auto right = std::upper_bound(raw_min.begin(), raw_min.end(), i);
    const double right_val = right != raw_min.end() ? values[*right] : values.back();
    const double left_val = right != raw_min.begin() ? values[*std::prev(right)] : values.front();
    const double prominence = values[i] - std::max(left_val, right_val);
    if (prominence >= min_prominence) summary.maxima_times.push_back(times[i]);
  }
  for (std::size_t i : raw_min) {
    auto right = std::upper_bound(raw_max.begin(), raw_max.end(), i);
    const double right_val = right != raw_max.end() ? values[*right] : values.back();
    const double left_val = right != raw_max.begin() ? values[*std::prev(right)] : values.front();
    const double prominence = std::min(left_val, right_val) - values[i];
    if (prominence >= min_prominence) summary.minima_times.push_back(times[i]);
  }

  if (summary.maxima_times.size() < 2) return std::nullopt;

  const std::size_t count = std::min<std::size_t>(
      summary.maxima_times.size(), static_cast<std::size_t>(std::max(leading_max_count, 2)));
  std::vector<double> gaps;
  for (std::size_t i = 1; i < count; ++i)
    gaps.push_back(summary.maxima_times[i] - summary.maxima_times[i - 1]);
  std::sort(gaps.begin(), gaps.end());
  const std::size_t mid = gaps.size() / 2;
  summary.period =
      gaps.size() % 2 == 1 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
  return summary;
}

}  // namespace spinstar
