#include "swarmtrack/control.hpp"

#include <cmath>
#include <limits>

namespace swarmtrack {

void GainsSingle::validate() const {
  require(std::isfinite(alpha) && alpha >= 0.0, "gains: alpha must be nonnegative");
  require(std::isfinite(beta) && beta >= 0.0, "gains: beta must be nonnegative");
  require(std::isfinite(tau) && tau > 0.0, "gains: tau must be positive");
}

void GainsDouble::validate() const {
  require(std::isfinite(alpha) && alpha >= 0.0, "gains: alpha must be nonnegative");
  require(std::isfinite(beta) && beta >= 0.0, "gains: beta must be nonnegative");
}

void SgnMode::validate() const {
  if (kind == Kind::BoundaryLayer) require(std::isfinite(kappa) && kappa > 0.0, "sgn: kappa must be positive");
}

double sgn(double y, const SgnMode& mode) {
  if (mode.kind == SgnMode::Kind::BoundaryLayer) return std::tanh(y / mode.kappa);
  return y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
}

Vec sgn(const Vec& v, const SgnMode& mode) {
  return v.unaryExpr([&mode](double y) { return sgn(y, mode); });
}

void fill_local_view(int i, const SwarmState& state, const ProximityGraph& graph, LocalView& view) {
  const auto& ids = graph.neighbors(i);
  view.index = i;
  view.position = state.position(i);
  view.velocity = state.velocity(i);
  view.neighbors.resize(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto& n = view.neighbors[k];
    n.id = ids[k];
    n.offset = view.position - state.position(n.id);
    n.velocity_offset = view.velocity - state.velocity(n.id);
  }
}

LocalView local_view(int i, const SwarmState& state, const ProximityGraph& graph) {
  LocalView view;
  fill_local_view(i, state, graph, view);
  return view;
}

Vec phi_single(const AffineGradientCost& cost, const Vec& x, double t, double tau) {
  const double s = cost.sigma();
  const auto& g = cost.signal().components();
  Vec out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const auto& gk = g[static_cast<std::size_t>(k)];
    out(k) = -(tau * (s * x(k) + gk.value(t)) + gk.rate(t)) / s;
  }
  return out;
}

Vec phi_double(const AffineGradientCost& cost, const Vec& x, const Vec& v, double t) {
  // H = sigma I is constant, so the dH/dt term vanishes and d/dt grad f = sigma v + g'.
  const double s = cost.sigma();
  const auto& g = cost.signal().components();
  Vec out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const auto& gk = g[static_cast<std::size_t>(k)];
    out(k) = -(gk.accel(t) + s * v(k) + gk.rate(t)) / s - s * (s * x(k) + gk.value(t));
  }
  return out;
}

Vec potential_gradient_sum(const LocalView& view, const PotentialParams& potentials, ClampCounter* clamps) {
  Vec f = Vec::Zero(view.position.size());
  for (const auto& n : view.neighbors) {
    f += potential::gradient_scale(potentials, view.index, n.id, n.offset, clamps) * n.offset;
  }
  return f;
}

Vec control_single(const LocalView& view, const PotentialParams& potentials, const AffineGradientCost& cost,
                   const GainsSingle& gains, const SgnMode& mode, double t, ClampCounter* clamps) {
  const Vec f = potential_gradient_sum(view, potentials, clamps);
  return -gains.alpha * f - gains.beta * sgn(f, mode) + phi_single(cost, view.position, t, gains.tau);
}

Vec control_single(int i, const SwarmState& state, const ProximityGraph& graph,
                   const PotentialParams& potentials, const AffineGradientCost& cost, const GainsSingle& gains,
                   const SgnMode& mode, double t, ClampCounter* clamps) {
  return control_single(local_view(i, state, graph), potentials, cost, gains, mode, t, clamps);
}

Vec control_double(const LocalView& view, const PotentialParams& potentials, const AffineGradientCost& cost,
                   const GainsDouble& gains, const SgnMode& mode, double t, ClampCounter* clamps) {
  Vec u = -potential_gradient_sum(view, potentials, clamps);
  for (const auto& n : view.neighbors) {
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      const double dv = n.velocity_offset(k);
      u(k) -= gains.alpha * dv + gains.beta * sgn(dv, mode);
    }
  }
  return u + phi_double(cost, view.position, view.velocity, t);
}

Vec control_double(int i, const SwarmState& state, const ProximityGraph& graph,
                   const PotentialParams& potentials, const AffineGradientCost& cost, const GainsDouble& gains,
                   const SgnMode& mode, double t, ClampCounter* clamps) {
  return control_double(local_view(i, state, graph), potentials, cost, gains, mode, t, clamps);
}

ConsensusError consensus_error(const SwarmState& state) {
  ConsensusError e;
  e.position = state.positions.rowwise() - state.positions.colwise().mean();
  e.velocity = state.velocities.rowwise() - state.velocities.colwise().mean();
  return e;
}

GainReport gain_check_single(const SwarmState& state, const TeamCost& team, double t, const GainsSingle& gains) {
  GainReport r;
  r.beta = gains.beta;
  for (int i = 0; i < state.agents(); ++i) {
    r.required = std::max(r.required, phi_single(team.member(i), state.position(i), t, gains.tau).lpNorm<1>());
  }
  r.ok = gains.beta >= r.required;
  return r;
}

GainReport gain_check_double(const SwarmState& state, const TeamCost& team, double t,
                             const ProximityGraph& graph, const GainsDouble& gains) {
  GainReport r;
  r.beta = gains.beta;
  AgentMatrix phi(state.agents(), state.dim());
  for (int i = 0; i < state.agents(); ++i) {
    phi.row(i) = phi_double(team.member(i), state.position(i), state.velocity(i), t).transpose();
  }
  const AgentMatrix centered = phi.rowwise() - phi.colwise().mean();
  const auto s = spectral(graph);
  if (!s.connected) {
    r.indeterminate = true;
    r.ok = false;
    r.required = std::numeric_limits<double>::infinity();
    return r;
  }
  r.required = centered.norm() / std::sqrt(s.lambda2);
  r.ok = gains.beta >= r.required;
  return r;
}

}  // namespace swarmtrack
