#include "spinstar/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "spinstar/entropy.hpp"

namespace spinstar {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<std::vector<double>> state_series_rows(const std::vector<double>& times,
                                                   const std::vector<QubitState>& states) {
  std::vector<std::vector<double>> rows;
  rows.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const QubitState& st = states[i];
    const auto s = st.bloch();
    rows.push_back({times[i], st.rho_uu, st.rho_dd(), st.rho_ud.real(), st.rho_ud.imag(),
                    s[0], s[1], s[2], von_neumann_entropy(st), purity(st)});
  }
  return rows;
}

namespace {

void append_row(std::string& out, const std::vector<double>& row) {
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (c > 0) out += ',';
    out += format_double(row[c]);
  }
  out += '\n';
}

}  // namespace

std::string state_series_csv(const std::vector<double>& times,
                             const std::vector<QubitState>& states) {
  std::string out = kStateColumns;
  out += '\n';
  for (const auto& row : state_series_rows(times, states)) append_row(out, row);
  return out;
}

std::string sweep_csv(const std::vector<TaggedSeries>& series) {
  std::string out = "temperature,";
  out += kStateColumns;
  out += '\n';
  for (const TaggedSeries& ts : series) {
    for (const auto& row : state_series_rows(ts.times, ts.states)) {
      out += format_double(ts.temperature_in_g);
      out += ',';
      append_row(out, row);
    }
  }
  return out;
}

std::string compare_csv(const std::vector<DeviationRow>& rows, bool with_timings) {
  std::string out = "n_bath,sup_dev_rho,l2_dev_rho,sup_dev_entropy,wall_seconds\n";
  for (const DeviationRow& r : rows) {
    out += std::to_string(r.n_bath);
    out += ',';
    out += format_double(r.sup_dev_rho);
    out += ',';
    out += format_double(r.l2_dev_rho);
    out += ',';
    out += format_double(r.sup_dev_entropy);
    out += ',';
    // wall time rounded to ms; zeroed under --no-timings so archived runs
    // stay byte-comparable
    out += format_double(with_timings ? std::round(r.wall_seconds * 1000.0) / 1000.0 : 0.0);
    out += '\n';
  }
  return out;
}

}  // namespace spinstar
