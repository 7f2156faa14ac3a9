// Command-line frontend: single runs, temperature sweeps and finite-N
// convergence studies, serialized as CSV (+ JSON metadata sidecar) or as a
// self-describing JSON envelope. See README for the schema.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <set>

#include "spinstar/dynamics.hpp"
#include "spinstar/entropy.hpp"
#include "spinstar/finite_oracle.hpp"
#include "spinstar/serialize.hpp"
#include "spinstar/thermal_bath.hpp"
#include "spinstar/version.hpp"

namespace {

using nlohmann::json;
using namespace spinstar;

struct RunConfig {
  std::string command;
  double g = 1.0;
  double g0 = 1.0;
  std::optional<double> mu0;       // raw energy; default 2g (resonance)
  std::optional<double> detuning;  // raw energy; alternative to --mu0
  double temperature = 10.0;       // units of g
  double t_max = 30.0;             // units of 1/g0
  int steps = 2000;
  double eps = 1e-12;
  std::string initial = "up";
  double theta = 0.0;
  double phi = 0.0;
  std::string format = "csv";
  std::string output;
  std::string config_file;
  int n_bath = 200;
  std::vector<int> n_bath_list;
  std::vector<double> temperatures;
  std::string bath_prep = "collective";
  int threads = 0;
  bool no_timings = false;
};

double resolved_mu0(const RunConfig& c) {
  if (c.detuning) return 2.0 * c.g + *c.detuning;
  if (c.mu0) return *c.mu0;
  return 2.0 * c.g;
}

ModelParams build_params(const RunConfig& c) {
  return make_params(resolved_mu0(c), c.g, c.g0, c.temperature * c.g);
}

InitialSpinState build_initial(const RunConfig& c) {
  if (c.initial == "up") return InitialSpinState::up();
  if (c.initial == "down") return InitialSpinState::down();
  if (c.initial == "general") return InitialSpinState::general(c.theta, c.phi);
  throw std::domain_error("--initial must be up, down or general");
}

BathPrep build_prep(const RunConfig& c) {
  if (c.bath_prep == "collective") return BathPrep::CollectiveThermal;
  if (c.bath_prep == "full") return BathPrep::FullThermal;
  throw std::domain_error("--bath-prep must be collective or full");
}

json params_meta(const RunConfig& c, const ModelParams& p) {
  return json{{"mu0", p.mu0},
              {"g", p.g},
              {"g0", p.g0},
              {"detuning", p.detuning()},
              {"temperature", p.temperature},
              {"temperature_in_g", c.temperature}};
}

json base_meta(const RunConfig& c, const ModelParams& p) {
  json extensions = json::array();
  if (p.detuning() != 0.0) extensions.push_back("nonzero-detuning");
  if (c.initial != "up") extensions.push_back("general-initial-state");
  return json{{"tool", "spinstar"},
              {"version", kVersion},
              {"schema_version", kSchemaVersion},
              {"command", c.command},
              {"params", params_meta(c, p)},
              {"grid", {{"t_max_in_inv_g0", c.t_max}, {"steps", c.steps}}},
              {"eps", c.eps},
              {"initial", {{"kind", c.initial}, {"theta", c.theta}, {"phi", c.phi}}},
              {"extensions", extensions}};
}

std::string resolve_output_path(const std::string& path) {
  namespace fs = std::filesystem;
  const char* dir = std::getenv("SPINSTAR_OUTPUT_DIR");
  if (dir != nullptr && *dir != '\0' && fs::path(path).is_relative())
    return (fs::path(dir) / path).string();
  return path;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

// CSV payload goes to --output (or stdout) with a .meta.json sidecar; JSON
// format writes one envelope {meta, columns, rows}.
void emit(const RunConfig& c, const json& meta, const std::string& csv, const json& envelope) {
  if (c.format == "json") {
    const std::string text = envelope.dump(2) + "\n";
    if (c.output.empty())
      std::cout << text;
    else
      write_file(resolve_output_path(c.output), text);
    return;
  }
  if (c.output.empty()) {
    std::cout << csv;
  } else {
    const std::string path = resolve_output_path(c.output);
    write_file(path, csv);
    write_file(path + ".meta.json", meta.dump(2) + "\n");
  }
}

json columns_json() {
  json cols = json::array();
  std::string all = kStateColumns;
  std::size_t pos = 0;
  while (pos != std::string::npos) {
    const std::size_t next = all.find(',', pos);
    cols.push_back(all.substr(pos, next == std::string::npos ? next : next - pos));
    pos = next == std::string::npos ? next : next + 1;
  }
  return cols;
}

json rows_json(const std::vector<std::vector<double>>& rows) {
  json out = json::array();
  for (const auto& row : rows) out.push_back(row);
  return out;
}

// Output times are reported in units of 1/g0, matching the --t-max flag.
std::vector<double> output_times(const std::vector<double>& raw_times, double g0) {
  std::vector<double> out(raw_times.size());
  for (std::size_t i = 0; i < raw_times.size(); ++i) out[i] = raw_times[i] * g0;
  return out;
}

StateSeries run_single_series(const RunConfig& c, const ModelParams& params,
                              const ThermalBathSpec& bath, const InitialSpinState& init) {
  const TimeGrid grid(c.t_max / c.g0, c.steps);
  if (init.is_up() && params.detuning() == 0.0) return population_series(grid, params, bath);
  return evolve_general(grid, params, bath, init);
}

int cmd_populations(const RunConfig& c) {
  const ModelParams params = build_params(c);
  const InitialSpinState init = build_initial(c);
  const ThermalBathSpec bath = build_bath(params, c.eps);
  const StateSeries series = run_single_series(c, params, bath, init);
  const std::vector<double> t_out = output_times(series.times, c.g0);

  json meta = base_meta(c, params);
  meta["bath"] = {{"cutoff", bath.cutoff}, {"tail_bound", bath.tail_bound}, {"z", bath.z}};
  json envelope = {{"meta", meta},
                   {"columns", columns_json()},
                   {"rows", rows_json(state_series_rows(t_out, series.states))}};
  emit(c, meta, state_series_csv(t_out, series.states), envelope);
  return 0;
}

int cmd_oracle(const RunConfig& c) {
  const ModelParams params = build_params(c);
  const InitialSpinState init = build_initial(c);
  const BathPrep prep = build_prep(c);
  const TimeGrid grid(c.t_max / c.g0, c.steps);
  OracleOptions opts;
  opts.threads = c.threads;
  const StateSeries series = evolve_finite(c.n_bath, grid, params, init, prep, opts);
  const std::vector<double> t_out = output_times(series.times, c.g0);

  json meta = base_meta(c, params);
  meta["n_bath"] = c.n_bath;
  meta["bath_prep"] = c.bath_prep;
  if (params.temperature == 0.0) {
    // T = 0 puts equal weight on the exact ground set; report the tie count.
    const FiniteBathThermalState w =
        prep == BathPrep::FullThermal
            ? finite_thermal_weights(c.n_bath, params.g, 0.0)
            : collective_thermal_weights(c.n_bath, params.g, 0.0);
    meta["zero_temperature_ground_states"] = w.entries.size();
  }
  json envelope = {{"meta", meta},
                   {"columns", columns_json()},
                   {"rows", rows_json(state_series_rows(t_out, series.states))}};
  emit(c, meta, state_series_csv(t_out, series.states), envelope);
  return 0;
}

int cmd_compare(const RunConfig& c) {
  if (c.n_bath_list.empty()) throw std::domain_error("--n-bath list must not be empty");
  const ModelParams params = build_params(c);
  const TimeGrid grid(c.t_max / c.g0, c.steps);
  OracleOptions opts;
  opts.threads = c.threads;
  const auto rows = compare_to_limit(c.n_bath_list, grid, params, c.eps, opts, build_prep(c));

  json meta = base_meta(c, params);
  meta["n_bath"] = c.n_bath_list;
  meta["bath_prep"] = c.bath_prep;
  json jrows = json::array();
  for (const DeviationRow& r : rows)
    jrows.push_back({{"n_bath", r.n_bath},
                     {"sup_dev_rho", r.sup_dev_rho},
                     {"l2_dev_rho", r.l2_dev_rho},
                     {"sup_dev_entropy", r.sup_dev_entropy},
                     {"wall_seconds",
                      c.no_timings ? 0.0 : std::round(r.wall_seconds * 1000.0) / 1000.0}});
  json envelope = {{"meta", meta}, {"rows", jrows}};
  emit(c, meta, compare_csv(rows, !c.no_timings), envelope);
  return 0;
}

int cmd_sweep(const RunConfig& c) {
  if (c.temperatures.empty()) throw std::domain_error("--temperatures list must not be empty");
  std::vector<double> temps;
  for (double t : c.temperatures) {
    if (std::find(temps.begin(), temps.end(), t) != temps.end()) {
      std::cerr << "warning: duplicate temperature " << t << " ignored\n";
      continue;
    }
    temps.push_back(t);
  }

  const InitialSpinState init = build_initial(c);
  auto run_one = [&](double temp_in_g) {
    RunConfig local = c;
    local.temperature = temp_in_g;
    const ModelParams params = build_params(local);
    const ThermalBathSpec bath = build_bath(params, c.eps);
    const StateSeries series = run_single_series(local, params, bath, init);
    return TaggedSeries{temp_in_g, output_times(series.times, c.g0), series.states};
  };

  // Independent runs fan out to workers; results are merged in config order.
  std::vector<TaggedSeries> tagged(temps.size());
  if (c.threads == 1 || temps.size() == 1) {
    for (std::size_t i = 0; i < temps.size(); ++i) tagged[i] = run_one(temps[i]);
  } else {
    std::vector<std::future<TaggedSeries>> futures;
    futures.reserve(temps.size());
    for (double t : temps)
      futures.push_back(std::async(std::launch::async, run_one, t));
    for (std::size_t i = 0; i < temps.size(); ++i) tagged[i] = futures[i].get();
  }

  const ModelParams params = build_params(c);
  json meta = base_meta(c, params);
  meta["temperatures_in_g"] = temps;
  json jseries = json::array();
  for (const TaggedSeries& ts : tagged)
    jseries.push_back({{"temperature_in_g", ts.temperature_in_g},
                       {"columns", columns_json()},
                       {"rows", rows_json(state_series_rows(ts.times, ts.states))}});
  json envelope = {{"meta", meta}, {"series", jseries}};
  emit(c, meta, sweep_csv(tagged), envelope);
  return 0;
}

// JSON config file mirrors the long flag names (dashes or underscores);
// explicit flags take precedence over config values.
void apply_config_file(RunConfig& c, CLI::App* sub) {
  if (c.config_file.empty()) return;
  std::ifstream in(c.config_file);
  if (!in) throw std::domain_error("cannot open config file: " + c.config_file);
  json doc = json::parse(in);
  if (!doc.is_object()) throw std::domain_error("config file must hold a JSON object");

  auto passed = [&](const std::string& flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };

  for (const auto& [raw_key, value] : doc.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (key == "command") continue;
    if (sub->get_option_no_throw(flag) == nullptr)
      throw std::domain_error("unknown config key: " + raw_key);
    if (passed(flag)) continue;
    if (key == "g") c.g = value.get<double>();
    else if (key == "g0") c.g0 = value.get<double>();
    else if (key == "mu0") c.mu0 = value.get<double>();
    else if (key == "detuning") c.detuning = value.get<double>();
    else if (key == "temperature") c.temperature = value.get<double>();
    else if (key == "t-max") c.t_max = value.get<double>();
    else if (key == "steps") c.steps = value.get<int>();
    else if (key == "eps") c.eps = value.get<double>();
    else if (key == "initial") c.initial = value.get<std::string>();
    else if (key == "theta") c.theta = value.get<double>();
    else if (key == "phi") c.phi = value.get<double>();
    else if (key == "format") c.format = value.get<std::string>();
    else if (key == "output") c.output = value.get<std::string>();
    else if (key == "n-bath") {
      if (value.is_array()) c.n_bath_list = value.get<std::vector<int>>();
      else c.n_bath = value.get<int>();
    }
    else if (key == "temperatures") c.temperatures = value.get<std::vector<double>>();
    else if (key == "bath-prep") c.bath_prep = value.get<std::string>();
    else if (key == "threads") c.threads = value.get<int>();
    else if (key == "no-timings") c.no_timings = value.get<bool>();
  }
}

void add_common_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--g", c.g, "Intra-bath coupling (energy)")->capture_default_str();
  sub->add_option("--g0", c.g0, "System-bath coupling (energy)")->capture_default_str();
  auto* mu0 = sub->add_option("--mu0", [&c](const CLI::results_t& r) {
    c.mu0 = std::stod(r[0]);
    return true;
  }, "Local field (energy); default 2g, i.e. zero detuning");
  auto* det = sub->add_option("--detuning", [&c](const CLI::results_t& r) {
    c.detuning = std::stod(r[0]);
    return true;
  }, "Detuning mu0 - 2g (energy); alternative to --mu0");
  mu0->excludes(det);
  sub->add_option("--temperature", c.temperature, "Bath temperature in units of g")
      ->capture_default_str();
  sub->add_option("--t-max", c.t_max, "Grid end time in units of 1/g0")->capture_default_str();
  sub->add_option("--steps", c.steps, "Grid steps (samples = steps + 1)")->capture_default_str();
  sub->add_option("--eps", c.eps, "Thermal series truncation tolerance")->capture_default_str();
  sub->add_option("--initial", c.initial, "Initial spin state: up|down|general")
      ->capture_default_str();
  sub->add_option("--theta", c.theta, "Polar angle for --initial general")->capture_default_str();
  sub->add_option("--phi", c.phi, "Azimuthal angle for --initial general")->capture_default_str();
  sub->add_option("--format", c.format, "Output format: csv|json")->capture_default_str();
  sub->add_option("--output", c.output,
                  "Output path (default stdout); relative paths resolve against "
                  "SPINSTAR_OUTPUT_DIR");
  sub->add_option("--config", c.config_file, "JSON config file mirroring these flags");
  sub->add_option("--threads", c.threads, "Worker threads (0 = hardware)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinstar: central spin-1/2 in a spin-star thermal bath"};
  app.require_subcommand(1);

  RunConfig cfg;
  CLI::App* populations =
      app.add_subcommand("populations", "Population trajectory rho_uu(t), rho_dd(t)");
  CLI::App* entropy_cmd =
      app.add_subcommand("entropy", "Von Neumann entropy trajectory (same schema)");
  CLI::App* oracle = app.add_subcommand("oracle", "Exact finite-N trajectory");
  CLI::App* compare =
      app.add_subcommand("compare", "Finite-N vs thermodynamic-limit deviations");
  CLI::App* sweep = app.add_subcommand("sweep", "One series per temperature");

  for (CLI::App* sub : {populations, entropy_cmd, oracle, compare, sweep})
    add_common_options(sub, cfg);
  oracle->add_option("--n-bath", cfg.n_bath, "Number of bath spins")->capture_default_str();
  oracle->add_option("--bath-prep", cfg.bath_prep, "Bath preparation: collective|full")
      ->capture_default_str();
  compare->add_option("--n-bath", cfg.n_bath_list, "Comma-separated list of bath sizes")
      ->delimiter(',');
  compare->add_option("--bath-prep", cfg.bath_prep, "Bath preparation: collective|full")
      ->capture_default_str();
  compare->add_flag("--no-timings", cfg.no_timings, "Zero the wall_seconds column");
  sweep->add_option("--temperatures", cfg.temperatures,
                    "Comma-separated temperatures in units of g")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    apply_config_file(cfg, sub);
    if (cfg.format != "csv" && cfg.format != "json")
      throw std::domain_error("--format must be csv or json");
    if (cfg.command == "populations" || cfg.command == "entropy") return cmd_populations(cfg);
    if (cfg.command == "oracle") return cmd_oracle(cfg);
    if (cfg.command == "compare") return cmd_compare(cfg);
    if (cfg.command == "sweep") return cmd_sweep(cfg);
    throw std::domain_error("unknown command");
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
