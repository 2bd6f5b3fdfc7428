#pragma once

#include "swarmtrack/scenario.hpp"
#include "swarmtrack/verify.hpp"

#include <cstdint>
#include <string_view>

namespace swarmtrack {

enum class Suite { All, Cost, Potential, Optimum, Averaged };

/// Throws ConfigError for an unknown name.
Suite parse_suite(std::string_view name);

struct SuiteOptions {
  int samples = 100;
  int optimum_times = 5;
  double grid_step = 0.01;
  double averaged_dt = 1e-3;
};

/// Runs the chosen oracles against one scenario. Check names are prefixed with `label`.
VerifyReport verify_scenario(const Scenario& scenario, Suite suite, std::uint64_t seed, std::string_view label,
                             const SuiteOptions& options = {});

}  // namespace swarmtrack
