#pragma once

#include "swarmtrack/types.hpp"

#include <cmath>
#include <utility>

namespace swarmtrack {

enum class Dynamics { Single, Double };

/// Positions and velocities of all agents at one instant. Velocities stay
/// zero for single-integrator runs.
struct SwarmState {
  double t = 0.0;
  AgentMatrix positions;
  AgentMatrix velocities;

  SwarmState() = default;
  SwarmState(double time, AgentMatrix x, AgentMatrix v);
  SwarmState(double time, AgentMatrix x);

  int agents() const { return static_cast<int>(positions.rows()); }
  int dim() const { return static_cast<int>(positions.cols()); }
  auto position(int i) const { return positions.row(i).transpose(); }
  auto velocity(int i) const { return velocities.row(i).transpose(); }
  bool finite() const { return std::isfinite(t) && positions.allFinite() && velocities.allFinite(); }
};

inline SwarmState::SwarmState(double time, AgentMatrix x, AgentMatrix v)
    : t(time), positions(std::move(x)), velocities(std::move(v)) {
  require(positions.rows() == velocities.rows() && positions.cols() == velocities.cols(),
          "state: position and velocity shapes differ");
}

inline SwarmState::SwarmState(double time, AgentMatrix x)
    : t(time), positions(std::move(x)), velocities(AgentMatrix::Zero(positions.rows(), positions.cols())) {}

}  // namespace swarmtrack
