#pragma once

#include "swarmtrack/cost.hpp"
#include "swarmtrack/sim.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace swarmtrack {

/// Parse or validation failure that names the offending key and line.
class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Scenario file: INI-style sections holding `key = value` lines.
///
///   [dynamics]     kind = single | double
///   [agents]       count, dim, placement = circle | explicit | random,
///                  circle_radius, positions = "x,y; x,y; ...", box, seed,
///                  min_separation
///   [cost]         family = affine, sigma, signal.<k>, agent.<i>.signal.<k>
///   [gains]        alpha, beta, tau
///   [potential]    radius, desired_distance, gain, force_cap (none | value),
///                  hysteresis, distance.<i>.<j>, weight.<i>.<j>
///   [integration]  dt, t_end, integrator = rk4 | euler,
///                  sgn = boundary_layer | exact, kappa, record_every
///
/// Indices are 1-based. A signal is a sum of terms separated by `+`, each
/// `<kind> key=value ...` with kind sinusoid | cosine | damped | polynomial |
/// constant | zero and keys amp, omega, phase, coeffs (comma list) and
/// scale = one | index. `scale=index` multiplies the amplitude (or the
/// polynomial coefficients) by the agent index.
class ScenarioDocument {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;  // 0 for entries added by overrides
  };

  static ScenarioDocument parse(std::string_view text);
  static ScenarioDocument load(const std::string& path);

  /// Applies `section.key=value`. Unknown paths are rejected by name; values
  /// are checked later by resolve().
  void set(const std::string& path, const std::string& value);
  void set_override(const std::string& assignment);

  const std::string* find(const std::string& section, const std::string& key) const;
  const std::vector<Entry>& entries() const { return entries_; }

  /// Canonical text; parse(to_text()) reproduces the document.
  std::string to_text() const;

 private:
  std::vector<Entry> entries_;
};

/// A validated, ready-to-run scenario.
struct Scenario {
  SimConfig config;
  TeamCost team;
  SwarmState initial;
};

Scenario resolve(const ScenarioDocument& doc);

/// True when `path` names a recognised key (e.g. "gains.beta", "cost.signal.2").
bool is_known_key(const std::string& section, const std::string& key);

AgentMatrix circle_placement(int agents, int dim, double radius);
AgentMatrix random_placement(int agents, int dim, double half_width, std::uint64_t seed, double min_separation);

/// Parses one signal component (see ScenarioDocument) for the given 1-based agent.
ScalarSignal parse_signal(std::string_view spec, int agent_index);

struct Preset {
  std::string name;
  std::string description;
  std::string text;
};

const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);

}  // namespace swarmtrack
