#include "swarmtrack/suite.hpp"

#include <random>
#include <string>

namespace swarmtrack {

Suite parse_suite(std::string_view name) {
  if (name == "all") return Suite::All;
  if (name == "cost") return Suite::Cost;
  if (name == "potential") return Suite::Potential;
  if (name == "optimum") return Suite::Optimum;
  if (name == "averaged") return Suite::Averaged;
  throw ConfigError("unknown verify suite '" + std::string(name) + "'");
}

VerifyReport verify_scenario(const Scenario& scenario, Suite suite, std::uint64_t seed, std::string_view label,
                             const SuiteOptions& options) {
  VerifyReport rep;
  const auto want = [&](Suite s) { return suite == Suite::All || suite == s; };

  if (want(Suite::Cost)) {
    // one seed stream per agent so adding agents does not reshuffle earlier samples
    for (int i = 0; i < scenario.team.size(); ++i) {
      auto r = fd_gradient_check(scenario.team.member(i), options.samples, seed + static_cast<std::uint64_t>(i));
      for (auto& c : r.checks) c.name += ".agent" + std::to_string(i + 1);
      rep.append(r);
    }
  }
  if (want(Suite::Potential)) rep.append(fd_potential_check(scenario.config.potential, options.samples, seed));
  if (want(Suite::Optimum)) {
    std::mt19937_64 rng(seed);
    const double horizon = scenario.config.t_end > 0.0 ? scenario.config.t_end : 50.0;
    std::uniform_real_distribution<double> ts(0.0, horizon);
    std::vector<double> times;
    for (int k = 0; k < options.optimum_times; ++k) times.push_back(ts(rng));
    rep.append(optimum_cross_check(scenario.team, times, std::nullopt, options.grid_step));
  }
  if (want(Suite::Averaged)) {
    const bool single = scenario.config.dynamics == Dynamics::Single;
    rep.append(averaged_dynamics_check(scenario.team, scenario.config.dynamics, scenario.initial.positions,
                                       single ? 10.0 : 50.0, options.averaged_dt,
                                       scenario.config.single_gains.tau));
  }
  if (!label.empty()) {
    for (auto& c : rep.checks) c.name = std::string(label) + "." + c.name;
  }
  return rep;
}

}  // namespace swarmtrack
