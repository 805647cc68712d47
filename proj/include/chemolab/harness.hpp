#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "chemolab/dynamics.hpp"
#include "chemolab/thresholds.hpp"

namespace chemolab {

using json = nlohmann::ordered_json;

struct InitSpec {
  std::string type = "homogeneous";  // homogeneous | gaussian-bump | random-positive | from-file
  double value = 1.0;                // homogeneous
  double center = 0.5, width = 0.1, amplitude = 1.0, baseline = 0.0;  // bump
  double lo = 0.1, hi = 1.0;         // random-positive
  std::string file;                  // from-file
};

struct RunConfig {
  int dim = 1;
  std::vector<double> lengths{1.0};
  std::vector<int> cells{128};
  ModelParams params;
  InitSpec init_u, init_v;
  std::optional<unsigned long> seed;
  StepControl control;
  double t_final = 10.0;
  bool allow_single_species = false;
  Guards guards;
  DiagnosticsConfig diag;
  bool q_explicit = false;  // true when the config pinned q itself
  std::string csv_path;
  std::string summary_path;

  Grid make_grid() const { return build_grid(dim, lengths, cells); }
  void validate() const;
};

struct SweepAxis {
  std::vector<std::string> names;  // ModelParams fields set in lockstep
  std::vector<double> values;
};

struct SweepConfig {
  RunConfig base;
  std::vector<SweepAxis> axes;
  std::string table_path;
};

/// Flat sectioned key-value text. Unknown sections or keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

ScalarField generate_init(const Grid& grid, const InitSpec& spec,
                          std::optional<unsigned long> seed, int stream);

struct RunSummary {
  std::string stop_reason;
  std::string error;
  double final_time = 0.0;
  double chi_star = 0.0;
  double persistence_margin = 0.0;
  double q = 0.0, beta = 0.0, B = 0.0;
  double delta0 = 0.0;
  double m0_star = 0.0, m1_star = 0.0, m2_star = 0.0, m3_star = 0.0;
  std::vector<CheckReport> checks;
  double wall_seconds = 0.0;

  bool all_checks_pass() const;
};

json to_json(const RunSummary& s);
RunSummary summary_from_json(const json& j);

struct ScenarioResult {
  RunSummary summary;
  RunResult run;
};

/// Runs the scenario, evaluates every check, and (when paths are set)
/// writes the trajectory CSV and JSON summary atomically.
ScenarioResult run_scenario(const RunConfig& config);

/// One row per cartesian grid point, axis-major order; points execute
/// concurrently, rows merge by index.
std::string run_sweep(const SweepConfig& sweep);

/// CSV with header, 17 significant digits, LF line endings.
std::string trajectory_csv(const Trajectory& traj);
void write_file_atomic(const std::string& path, const std::string& content);

int cli_main(int argc, char** argv);

}  // namespace chemolab
