#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/bounds.hpp"
#include "nlslab/nls_dynamics.hpp"
#include "nlslab/spectral_field.hpp"
#include "nlslab/w_map.hpp"

namespace nlslab {

inline constexpr const char* config_schema = "nlslab.config/1";
std::string version_string();

enum class Experiment { simulate, steady, nudge, wmap, form, bounds, modes, verify };
std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

struct ForcingMode {
  int k = 0;
  double re = 0, im = 0;
};

// {"constant": a}, {"modes": [[k, re, im], ...]} or {"steady_compatible": a};
// a is a number or [re, im].
struct ForcingSpec {
  enum class Kind { constant, modes, steady_compatible };
  Kind kind = Kind::constant;
  cplx a{0, 0};
  std::vector<ForcingMode> modes;
};

// steady_compatible builds f = |a|^2 a + i gamma a, for which u = a is steady.
Field forcing_from_spec(const ForcingSpec& spec, const SpectralGrid& grid, double gamma);

struct Tolerances {
  double sync_floor = 1e-6;
  double sync_horizon = 100;
  double fixed_point = 1e-6;
  double steady_fixed_point = 1e-8;
  double forgetting = 1e-8;
  double form_residual = 1e-6;
  double collinearity = 1e-10;
  double balance = 1e-4;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::simulate;
  SpectralGrid grid;
  double gamma = 0.5;
  double mu = 10;
  int m = 8;
  ForcingSpec forcing;
  SchemeConfig scheme;
  std::vector<std::uint64_t> seeds{1};
  double spinup = 60;
  double window = 20;
  WmapConfig wmap;
  // form: v0 = P_m u* + amplitude * e_k, constant in time on [0, window]
  int form_mode = 2;
  double form_amplitude = 0.05;
  int form_steps = 400;
  double form_dt = 1e12;  // pseudo-time step cap
  std::optional<double> agmon_c;  // calibrated when absent
  std::map<std::string, double> c_override;  // per-constant c, see c_override_keys()
  double xi = 1.0 / 7.0;
  double v_X = 1;  // observation radius for the bounds experiment
  std::vector<int> modes_m_values;  // empirical sweep for `modes`
  Tolerances tol;
  std::string output = "out";
  bool allow_conservative = false;

  // Canonical JSON of the parsed configuration.
  std::string json_text;

  NlsParams params() const;
  void validate() const;
};

// Parses and validates; unknown keys and bad values raise ConfigError with a
// JSON path such as "params.forcing.modes[2]".
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Sets a dotted key, e.g. "params.mu", in the JSON text of a configuration.
std::string with_override(const std::string& json_text, const std::string& key, double value);

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunManifest {
  std::string config_json;
  std::string version;
  double wall_time = 0;
  std::vector<std::string> files;  // relative to the output directory
  std::vector<Assertion> assertions;
  std::string error;
  int exit_code = 0;  // 0 pass, 1 assertion failure, 2 config error, 3 numerical failure
};

// Runs one experiment into cfg.output and writes manifest.json there, also
// when the experiment fails.
RunManifest run(const ExperimentConfig& cfg);

struct SweepSpec {
  std::string key;
  double start = 0, stop = 0;
  int steps = 1;
  static SweepSpec parse(const std::string& text);  // key=start:stop:steps
  std::vector<double> values() const;
};

// Runs every sweep value in its own subdirectory, concurrently. Writes
// sweep.json into base.output. The exit code is the worst of the runs.
std::vector<RunManifest> run_sweep(const ExperimentConfig& base, const SweepSpec& sweep, unsigned threads = 0);

struct VerifyCheck {
  std::string module;
  std::string name;
  bool pass = false;
  double value = 0;
  double limit = 0;
};

// Small-scale property checks across all modules.
std::vector<VerifyCheck> run_verify_suite(std::uint64_t seed);

}  // namespace nlslab
