// nlslab: command line front end for the experiment harness.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "nlslab/errors.hpp"
#include "nlslab/harness.hpp"

using nlohmann::json;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nlslab::ConfigError("--config", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_manifest(const nlslab::RunManifest& m, const std::string& dir) {
  for (const auto& a : m.assertions)
    std::printf("%s %s: %s\n", a.pass ? "PASS" : "FAIL", a.name.c_str(), a.detail.c_str());
  if (!m.error.empty()) std::printf("error: %s\n", m.error.c_str());
  std::printf("%zu files in %s, %.2f s, exit %d\n", m.files.size(), dir.c_str(), m.wall_time, m.exit_code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped driven NLS data-assimilation laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, sweep;
  long long seed = -1;
  bool allow_conservative = false;
  unsigned threads = 0;

  for (const char* name : {"simulate", "steady", "nudge", "wmap", "form", "bounds", "modes", "verify"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "JSON configuration (schema nlslab.config/1)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "replaces the first seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--sweep", sweep, "key=start:stop:steps, e.g. params.mu=1:20:5");
    sub->add_option("--threads", threads, "concurrent sweep runs (0: all cores)");
    sub->add_flag("--allow-conservative", allow_conservative, "permit gamma = 0 or f = 0");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string experiment = app.get_subcommands().front()->get_name();

  try {
    json j = json::object();
    if (!config_path.empty()) {
      try {
        j = json::parse(read_text(config_path));
      } catch (const json::exception& e) {
        throw nlslab::ConfigError("$", e.what());
      }
      if (!j.is_object()) throw nlslab::ConfigError("$", "expected an object");
    }
    if (j.contains("experiment") && j["experiment"] != experiment)
      throw nlslab::ConfigError("experiment", "config names " + j["experiment"].dump() + " but the subcommand is " +
                                                  experiment);
    j["experiment"] = experiment;
    if (!out_dir.empty()) j["output"] = out_dir;
    if (seed >= 0) {
      if (!j.contains("seeds") || !j["seeds"].is_array() || j["seeds"].empty()) j["seeds"] = json::array({0});
      j["seeds"][0] = static_cast<std::uint64_t>(seed);
    }
    if (allow_conservative) j["allow_conservative"] = true;

    const nlslab::ExperimentConfig cfg = nlslab::config_from_json(j.dump());
    if (!sweep.empty()) {
      const auto runs = nlslab::run_sweep(cfg, nlslab::SweepSpec::parse(sweep), threads);
      int code = 0;
      for (std::size_t i = 0; i < runs.size(); ++i) {
        std::printf("run %zu: exit %d%s%s\n", i, runs[i].exit_code, runs[i].error.empty() ? "" : ", ",
                    runs[i].error.c_str());
        code = std::max(code, runs[i].exit_code);
      }
      return code;
    }
    const nlslab::RunManifest m = nlslab::run(cfg);
    print_manifest(m, cfg.output);
    return m.exit_code;
  } catch (const nlslab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const nlslab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == nlslab::ErrorKind::invalid_argument ? 2 : 3;
  }
}
