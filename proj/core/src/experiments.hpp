#pragma once

#include <string>
#include <vector>

#include "nlslab/harness.hpp"

namespace nlslab::detail {

struct RunContext {
  explicit RunContext(std::string d) : dir(std::move(d)) {}

  std::string dir;
  std::vector<std::string> files;
  std::vector<Assertion> assertions;

  // Registers an output file and returns its full path.
  std::string file(const std::string& name);
  void check(const std::string& name, bool pass, const std::string& detail);
};

void run_experiment(const ExperimentConfig& cfg, RunContext& ctx);

}  // namespace nlslab::detail
