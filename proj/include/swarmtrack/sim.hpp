#pragma once

#include "swarmtrack/control.hpp"
#include "swarmtrack/cost.hpp"
#include "swarmtrack/graph.hpp"
#include "swarmtrack/potential.hpp"
#include "swarmtrack/state.hpp"

#include <optional>
#include <string>
#include <vector>

namespace swarmtrack {

enum class Integrator { Euler, Rk4 };

struct SimConfig {
  Dynamics dynamics = Dynamics::Single;
  double dt = 1e-3;
  double t_end = 50.0;
  Integrator integrator = Integrator::Rk4;
  int record_every = 1;
  SgnMode sgn = SgnMode::boundary_layer(0.01);
  GainsSingle single_gains;
  GainsDouble double_gains;
  PotentialParams potential;
  double hysteresis = 0.5;
  std::optional<Mat> weight_table;
  // false: agents are isolated, only the internal-model term acts
  bool coupling = true;

  void validate(int agents) const;
  std::size_t step_count() const;
};

struct Metrics {
  double t = 0.0;
  double center_error = 0.0;
  std::optional<double> velocity_center_error;
  double min_pair_distance = 0.0;
  double lambda2 = 0.0;
  double sum_grad_norm = 0.0;
  std::optional<double> consensus_vel_norm;
  double lyap_W = 0.0;
  double lyap_W1 = 0.0;
  bool remark1_ok = true;
  bool gain_ok = true;
  double gain_required = 0.0;
  long clamp_events = 0;
};

struct SimEvent {
  enum class Kind { EdgeAdded, ConnectivityViolation, Disconnected, Collision, Nonfinite };
  Kind kind;
  double t;
  int i = -1;
  int j = -1;
  double value = 0.0;
  std::string message;
};

const char* to_string(SimEvent::Kind kind);

struct RunReport {
  std::size_t steps_taken = 0;
  std::size_t records = 0;
  bool initial_connected = true;
  bool aborted = false;
  std::string abort_reason;
  long edges_added = 0;
  long connectivity_violations = 0;
  long disconnections = 0;
  long collisions = 0;
  long nonfinite = 0;
  long gain_violation_records = 0;
  long remark1_violation_records = 0;
  long clamp_total = 0;

  /// Monitor violations that falsify a theorem hypothesis or conclusion.
  long violations() const { return connectivity_violations + disconnections + collisions + nonfinite; }
};

struct RunResult {
  std::vector<SwarmState> trace;
  std::vector<Metrics> metrics;
  std::vector<SimEvent> events;
  RunReport report;
  std::vector<SwarmState> tail;  // last few states before an abort
};

double min_pair_distance(const AgentMatrix& positions);

/// Single: (1/2) sum_i sum_j V_ij. Double: (1/N) sum_i sum_j V_ij + (1/2)|e_V|^2.
/// Infinite when a bonded pair sits at or beyond the radius.
double lyapunov_W(const SwarmState& state, const ProximityGraph& graph, const PotentialParams& potentials,
                  Dynamics dynamics);

/// Single: (1/2)|sum grad f_j|^2. Double adds (1/2)|sum v_j - sum S_j|^2 with
/// S_j = (g'_j + sigma x_j + g_j) / sigma.
double lyapunov_W1(const SwarmState& state, const TeamCost& team, Dynamics dynamics);

Vec sum_gradient(const SwarmState& state, const TeamCost& team);

/// Closed-loop vector field: returns (dx/dt, dv/dt) with the graph held fixed.
std::pair<AgentMatrix, AgentMatrix> closed_loop_field(const SwarmState& state, const SimConfig& config,
                                                      const ProximityGraph& graph, const TeamCost& team,
                                                      ClampCounter* clamps = nullptr);

/// Advances one fixed step, then updates the graph. Throws SimulationAbort on
/// a nonfinite state or a pair closer than the collision threshold.
std::vector<EdgeEvent> step(SwarmState& state, const SimConfig& config, ProximityGraph& graph,
                            const TeamCost& team, ClampCounter* clamps = nullptr);

Metrics compute_metrics(const SwarmState& state, const SimConfig& config, const ProximityGraph& graph,
                        const TeamCost& team);

/// Integrates from `initial` (at t = initial.t) to t_end, recording every
/// record_every steps plus the final step.
RunResult run(const SimConfig& config, const TeamCost& team, const SwarmState& initial);

inline constexpr double kCollisionDistance = 1e-9;

}  // namespace swarmtrack
