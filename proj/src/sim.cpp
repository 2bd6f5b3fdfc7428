#include "swarmtrack/sim.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

namespace swarmtrack {

const char* to_string(SimEvent::Kind kind) {
  switch (kind) {
    case SimEvent::Kind::EdgeAdded:
      return "edge_added";
    case SimEvent::Kind::ConnectivityViolation:
      return "connectivity_violation";
    case SimEvent::Kind::Disconnected:
      return "disconnected";
    case SimEvent::Kind::Collision:
      return "collision";
    case SimEvent::Kind::Nonfinite:
      return "nonfinite";
  }
  return "unknown";
}

void SimConfig::validate(int agents) const {
  require(std::isfinite(dt) && dt > 0.0, "integration: dt must be positive");
  require(std::isfinite(t_end) && t_end >= 0.0, "integration: t_end must be nonnegative");
  require(record_every >= 1, "integration: record_every must be at least 1");
  sgn.validate();
  if (dynamics == Dynamics::Single) {
    single_gains.validate();
  } else {
    double_gains.validate();
  }
  potential.validate(agents);
  require(std::isfinite(hysteresis) && hysteresis > 0.0 && hysteresis < potential.radius,
          "potential: hysteresis must lie in (0, radius)");
}

std::size_t SimConfig::step_count() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

double min_pair_distance(const AgentMatrix& positions) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < positions.rows(); ++j) {
      best = std::min(best, (positions.row(i) - positions.row(j)).norm());
    }
  }
  return best;
}

double lyapunov_W(const SwarmState& state, const ProximityGraph& graph, const PotentialParams& potentials,
                  Dynamics dynamics) {
  // sum over ordered pairs = 2 * sum over bonded i < j
  double pair_sum = 0.0;
  for (const auto& [i, j] : graph.edges()) {
    const double r = (state.positions.row(i) - state.positions.row(j)).norm();
    if (r >= potentials.radius || r <= 0.0) return std::numeric_limits<double>::infinity();
    pair_sum += 2.0 * potential::value(potentials, i, j, r, true);
  }
  if (dynamics == Dynamics::Single) return 0.5 * pair_sum;
  const auto e = consensus_error(state);
  return pair_sum / state.agents() + 0.5 * e.velocity.squaredNorm();
}

Vec sum_gradient(const SwarmState& state, const TeamCost& team) {
  Vec z = Vec::Zero(state.dim());
  for (int j = 0; j < state.agents(); ++j) z += team.member(j).gradient(state.position(j), state.t);
  return z;
}

double lyapunov_W1(const SwarmState& state, const TeamCost& team, Dynamics dynamics) {
  const Vec z = sum_gradient(state, team);
  double w = 0.5 * z.squaredNorm();
  if (dynamics == Dynamics::Double) {
    Vec mismatch = Vec::Zero(state.dim());
    for (int j = 0; j < state.agents(); ++j) {
      const auto& c = team.member(j);
      const auto d = c.grad_time_derivatives(state.position(j), state.t);
      mismatch += state.velocity(j) - (d.rate + c.gradient(state.position(j), state.t)) / c.sigma();
    }
    w += 0.5 * mismatch.squaredNorm();
  }
  return w;
}

std::pair<AgentMatrix, AgentMatrix> closed_loop_field(const SwarmState& state, const SimConfig& config,
                                                      const ProximityGraph& graph, const TeamCost& team,
                                                      ClampCounter* clamps) {
  const int n = state.agents();
  AgentMatrix u(n, state.dim());
  LocalView view;
  for (int i = 0; i < n; ++i) {
    if (config.coupling) {
      fill_local_view(i, state, graph, view);
    } else {
      view.neighbors.clear();
      view.index = i;
      view.position = state.position(i);
      view.velocity = state.velocity(i);
    }
    if (config.dynamics == Dynamics::Single) {
      u.row(i) = control_single(view, config.potential, team.member(i), config.single_gains, config.sgn, state.t,
                                clamps)
                     .transpose();
    } else {
      u.row(i) = control_double(view, config.potential, team.member(i), config.double_gains, config.sgn, state.t,
                                clamps)
                     .transpose();
    }
  }
  if (config.dynamics == Dynamics::Single) return {u, AgentMatrix::Zero(n, state.dim())};
  return {state.velocities, u};
}

namespace {

SwarmState advanced(const SwarmState& s, double h, const AgentMatrix& dx, const AgentMatrix& dv) {
  return SwarmState(s.t + h, s.positions + h * dx, s.velocities + h * dv);
}

}  // namespace

std::vector<EdgeEvent> step(SwarmState& state, const SimConfig& config, ProximityGraph& graph,
                            const TeamCost& team, ClampCounter* clamps) {
  const double h = config.dt;
  const double t0 = state.t;
  if (config.integrator == Integrator::Euler) {
    const auto [dx, dv] = closed_loop_field(state, config, graph, team, clamps);
    state = advanced(state, h, dx, dv);
  } else {
    const auto [k1x, k1v] = closed_loop_field(state, config, graph, team, clamps);
    const auto [k2x, k2v] = closed_loop_field(advanced(state, h / 2, k1x, k1v), config, graph, team, clamps);
    const auto [k3x, k3v] = closed_loop_field(advanced(state, h / 2, k2x, k2v), config, graph, team, clamps);
    const auto [k4x, k4v] = closed_loop_field(advanced(state, h, k3x, k3v), config, graph, team, clamps);
    state.positions += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    state.velocities += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    state.t = t0 + h;
  }
  if (!state.finite()) throw SimulationAbort("nonfinite state at t=" + std::to_string(state.t));
  if (state.agents() >= 2) {
    const double dmin = min_pair_distance(state.positions);
    if (dmin < kCollisionDistance) {
      std::ostringstream os;
      os << "collision at t=" << state.t << " (min pair distance " << dmin << ")";
      throw SimulationAbort(os.str());
    }
  }
  if (!config.coupling) return {};
  return graph.update_edges(state.positions);
}

Metrics compute_metrics(const SwarmState& state, const SimConfig& config, const ProximityGraph& graph,
                        const TeamCost& team) {
  Metrics m;
  m.t = state.t;
  const auto opt = team.team_optimum(state.t);
  const Vec mean_x = state.positions.colwise().mean().transpose();
  m.center_error = (mean_x - opt.position).norm();
  m.min_pair_distance =
      state.agents() >= 2 ? min_pair_distance(state.positions) : std::numeric_limits<double>::infinity();
  m.lambda2 = state.agents() >= 2 ? algebraic_connectivity(laplacian(live_weights(graph, state.positions))) : 0.0;
  m.sum_grad_norm = sum_gradient(state, team).norm();
  m.lyap_W = lyapunov_W(state, graph, config.potential, config.dynamics);
  m.lyap_W1 = lyapunov_W1(state, team, config.dynamics);

  double worst = 0.0;
  for (int i = 0; i < state.agents(); ++i) worst = std::max(worst, (state.position(i) - opt.position).norm());
  m.remark1_ok = worst < state.agents() * config.potential.radius;

  GainReport gain;
  if (config.dynamics == Dynamics::Single) {
    gain = gain_check_single(state, team, state.t, config.single_gains);
  } else {
    const Vec mean_v = state.velocities.colwise().mean().transpose();
    m.velocity_center_error = (mean_v - opt.velocity).norm();
    m.consensus_vel_norm = consensus_error(state).velocity.norm();
    gain = gain_check_double(state, team, state.t, graph, config.double_gains);
  }
  m.gain_ok = gain.ok;
  m.gain_required = gain.required;
  return m;
}

namespace {

constexpr std::size_t kTailLength = 5;

class Recorder {
 public:
  Recorder(const SimConfig& config, const TeamCost& team, RunResult& out)
      : config_(config), team_(team), out_(out) {}

  void record(const SwarmState& state, const ProximityGraph& graph, ClampCounter& clamps) {
    Metrics m = compute_metrics(state, config_, graph, team_);
    m.clamp_events = clamps.count() - clamps_seen_;
    clamps_seen_ = clamps.count();
    if (!m.gain_ok) ++out_.report.gain_violation_records;
    if (!m.remark1_ok) ++out_.report.remark1_violation_records;
    // counted on entry; a graph that reconnects and drops again counts twice
    const bool lost = config_.coupling && out_.report.initial_connected && state.agents() >= 2 && m.lambda2 <= 1e-9;
    if (lost && !disconnected_) {
      ++out_.report.disconnections;
      out_.events.push_back({SimEvent::Kind::Disconnected, state.t, -1, -1, m.lambda2, "lambda2 vanished"});
    }
    disconnected_ = lost;
    out_.trace.push_back(state);
    out_.metrics.push_back(m);
  }

 private:
  const SimConfig& config_;
  const TeamCost& team_;
  RunResult& out_;
  long clamps_seen_ = 0;
  bool disconnected_ = false;
};

}  // namespace

RunResult run(const SimConfig& config, const TeamCost& team, const SwarmState& initial) {
  require(initial.agents() == team.size(), "run: agent count does not match cost team");
  require(initial.dim() == team.dim(), "run: state dimension does not match cost dimension");
  require(initial.finite(), "run: initial state must be finite");
  config.validate(initial.agents());

  RunResult out;
  ProximityGraph graph = config.coupling
                             ? ProximityGraph::build_initial(initial.positions, config.potential.radius,
                                                             config.hysteresis, config.weight_table)
                             : ProximityGraph::from_weights(Mat::Zero(initial.agents(), initial.agents()),
                                                            config.potential.radius, config.hysteresis);
  out.report.initial_connected = !config.coupling || initial.agents() < 2 || spectral(graph).connected;

  ClampCounter clamps;
  Recorder recorder(config, team, out);
  SwarmState state = initial;
  recorder.record(state, graph, clamps);

  std::deque<SwarmState> tail;
  std::set<std::pair<int, int>> violating;
  const std::size_t n = config.step_count();
  for (std::size_t k = 1; k <= n; ++k) {
    tail.push_back(state);
    if (tail.size() > kTailLength) tail.pop_front();
    std::vector<EdgeEvent> edge_events;
    try {
      edge_events = step(state, config, graph, team, &clamps);
    } catch (const SimulationAbort& e) {
      const std::string what = e.what();
      const bool nonfinite = what.find("nonfinite") != std::string::npos;
      out.report.aborted = true;
      out.report.abort_reason = what;
      if (nonfinite) {
        ++out.report.nonfinite;
      } else {
        ++out.report.collisions;
      }
      out.events.push_back({nonfinite ? SimEvent::Kind::Nonfinite : SimEvent::Kind::Collision,
                            initial.t + static_cast<double>(k) * config.dt, -1, -1, 0.0, what});
      out.tail.assign(tail.begin(), tail.end());
      break;
    }
    // pin the clock to k * dt so long runs do not accumulate rounding drift
    state.t = initial.t + static_cast<double>(k) * config.dt;
    out.report.steps_taken = k;

    std::set<std::pair<int, int>> now_violating;
    for (const auto& ev : edge_events) {
      if (ev.kind == EdgeEvent::Kind::Added) {
        ++out.report.edges_added;
        out.events.push_back({SimEvent::Kind::EdgeAdded, state.t, ev.i, ev.j, ev.distance, ""});
      } else {
        now_violating.insert({ev.i, ev.j});
        if (!violating.count({ev.i, ev.j})) {
          ++out.report.connectivity_violations;
          out.events.push_back(
              {SimEvent::Kind::ConnectivityViolation, state.t, ev.i, ev.j, ev.distance, "bonded pair reached R"});
        }
      }
    }
    violating = std::move(now_violating);

    if (k % static_cast<std::size_t>(config.record_every) == 0 || k == n) recorder.record(state, graph, clamps);
  }
  out.report.records = out.trace.size();
  out.report.clamp_total = clamps.count();
  return out;
}

}  // namespace swarmtrack
