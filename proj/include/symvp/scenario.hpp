#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "symvp/records.hpp"

namespace symvp {

// Configuration or input-validation problem; the message carries the scenario
// name and the config line when known.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  bool haveSeed = false;
  unsigned long long seed = 2024;  // applied to every scenario when haveSeed
  double marginTol = 1e-8;         // descent-certificate margin tolerance
};

// Parses a scenario config (YAML: top-level `scenarios:` list) and runs every
// scenario in order.  Throws ScenarioError on malformed configs or inputs the
// library rejects; analytic negative outcomes come back as records flagged
// degenerate instead.
std::vector<RunRecord> runScenarioText(const std::string& text, const RunOptions& opts = {});
std::vector<RunRecord> runScenarioFile(const std::string& path, const RunOptions& opts = {});

}  // namespace symvp
