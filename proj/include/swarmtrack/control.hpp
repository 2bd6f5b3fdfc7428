#pragma once

#include "swarmtrack/cost.hpp"
#include "swarmtrack/graph.hpp"
#include "swarmtrack/potential.hpp"
#include "swarmtrack/state.hpp"

#include <vector>

namespace swarmtrack {

struct GainsSingle {
  double alpha = 0.0;
  double beta = 1.0;
  double tau = 1.0;

  void validate() const;
};

struct GainsDouble {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;
};

/// Componentwise signum, exact or smoothed as tanh(y / kappa).
struct SgnMode {
  enum class Kind { Exact, BoundaryLayer };
  Kind kind = Kind::BoundaryLayer;
  double kappa = 0.01;

  static SgnMode exact() { return {Kind::Exact, 0.0}; }
  static SgnMode boundary_layer(double kappa) { return {Kind::BoundaryLayer, kappa}; }
  void validate() const;
};

double sgn(double y, const SgnMode& mode);
Vec sgn(const Vec& v, const SgnMode& mode);

/// What agent i is allowed to see: its own state plus offsets to bonded neighbors.
struct LocalView {
  struct Neighbor {
    int id;
    Vec offset;           // x_i - x_j
    Vec velocity_offset;  // v_i - v_j
  };
  int index = 0;
  Vec position;
  Vec velocity;
  std::vector<Neighbor> neighbors;
};

LocalView local_view(int i, const SwarmState& state, const ProximityGraph& graph);
/// Same as local_view but reuses the storage already held by `view`.
void fill_local_view(int i, const SwarmState& state, const ProximityGraph& graph, LocalView& view);

/// -H^{-1}(tau grad f + d/dt grad f) = -(tau (sigma x + g) + g') / sigma
Vec phi_single(const AffineGradientCost& cost, const Vec& x, double t, double tau);

/// Internal-model term of the double-integrator law for the affine family:
/// -(g'' + sigma v + g') / sigma - sigma (sigma x + g).
Vec phi_double(const AffineGradientCost& cost, const Vec& x, const Vec& v, double t);

/// Sum over bonded neighbors of dV_ij/dx_i.
Vec potential_gradient_sum(const LocalView& view, const PotentialParams& potentials,
                           ClampCounter* clamps = nullptr);

/// u_i = -alpha F_i - beta sgn(F_i) + phi_i, where F_i is the neighbor potential gradient sum.
Vec control_single(const LocalView& view, const PotentialParams& potentials, const AffineGradientCost& cost,
                   const GainsSingle& gains, const SgnMode& mode, double t, ClampCounter* clamps = nullptr);

Vec control_single(int i, const SwarmState& state, const ProximityGraph& graph,
                   const PotentialParams& potentials, const AffineGradientCost& cost, const GainsSingle& gains,
                   const SgnMode& mode, double t, ClampCounter* clamps = nullptr);

/// u_i = -F_i - alpha sum(v_i - v_j) - beta sum sgn(v_i - v_j) + phi_i
Vec control_double(const LocalView& view, const PotentialParams& potentials, const AffineGradientCost& cost,
                   const GainsDouble& gains, const SgnMode& mode, double t, ClampCounter* clamps = nullptr);

Vec control_double(int i, const SwarmState& state, const ProximityGraph& graph,
                   const PotentialParams& potentials, const AffineGradientCost& cost, const GainsDouble& gains,
                   const SgnMode& mode, double t, ClampCounter* clamps = nullptr);

/// Deviations from the swarm mean; each column sums to zero.
struct ConsensusError {
  AgentMatrix position;
  AgentMatrix velocity;
};

ConsensusError consensus_error(const SwarmState& state);

struct GainReport {
  double beta = 0.0;
  double required = 0.0;  // smallest beta meeting the condition at this instant
  bool indeterminate = false;
  bool ok = true;
};

/// beta >= max_i |phi_i|_1
GainReport gain_check_single(const SwarmState& state, const TeamCost& team, double t, const GainsSingle& gains);

/// beta >= |(Pi (x) I) Phi|_2 / sqrt(lambda2); indeterminate for a disconnected graph.
GainReport gain_check_double(const SwarmState& state, const TeamCost& team, double t,
                             const ProximityGraph& graph, const GainsDouble& gains);

}  // namespace swarmtrack
