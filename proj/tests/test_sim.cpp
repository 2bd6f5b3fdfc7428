#include <doctest.h>

#include "swarmtrack/sim.hpp"

#include <cmath>
#include <random>

using namespace swarmtrack;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

AgentMatrix rows(std::initializer_list<Vec> xs) {
  AgentMatrix m(static_cast<Eigen::Index>(xs.size()), xs.begin()->size());
  Eigen::Index r = 0;
  for (const auto& x : xs) m.row(r++) = x.transpose();
  return m;
}

TeamCost zero_team(int n) {
  return TeamCost(std::vector<AffineGradientCost>(static_cast<std::size_t>(n),
                                                  AffineGradientCost(2.0, TimeSignal::zero(2))));
}

// each agent's own minimizer placed at the given position, so phi vanishes there
TeamCost anchored_team(const AgentMatrix& x, double sigma) {
  std::vector<AffineGradientCost> m;
  for (int i = 0; i < x.rows(); ++i) {
    m.emplace_back(sigma, TimeSignal::constant(Vec(-sigma * x.row(i).transpose())));
  }
  return TeamCost(m);
}

SignalTerm term(SignalKind kind, double amp, double omega) {
  SignalTerm s;
  s.kind = kind;
  s.amplitude = amp;
  s.omega = omega;
  return s;
}

TeamCost fig1_team() {
  std::vector<AffineGradientCost> m;
  for (int i = 1; i <= 6; ++i) {
    m.emplace_back(2.0, TimeSignal({ScalarSignal{{term(SignalKind::Sinusoid, -2.0 * i, 0.2)}},
                                    ScalarSignal{{term(SignalKind::Cosine, -2.0 * i, 0.2)}}}));
  }
  return TeamCost(m);
}

AgentMatrix hexagon(double radius) {
  AgentMatrix x(6, 2);
  for (int i = 0; i < 6; ++i) {
    x(i, 0) = radius * std::cos(2 * M_PI * i / 6);
    x(i, 1) = radius * std::sin(2 * M_PI * i / 6);
  }
  return x;
}

SimConfig short_single(double t_end) {
  SimConfig c;
  c.dynamics = Dynamics::Single;
  c.t_end = t_end;
  c.single_gains = {2, 5, 1};
  c.potential.gain = 0.1;
  return c;
}

}  // namespace

TEST_CASE("zero field leaves the state unchanged") {
  // two agents at mutual distance d, each on its own minimizer, no signal motion
  const AgentMatrix x = rows({v2(-0.25, 0), v2(0.25, 0)});
  auto team = anchored_team(x, 2.0);
  SimConfig c;
  c.single_gains = {0, 0, 1};
  SwarmState s(0.0, x);
  auto g = ProximityGraph::build_initial(x, 5.0, 0.5);
  for (auto integ : {Integrator::Euler, Integrator::Rk4}) {
    c.integrator = integ;
    SwarmState t = s;
    for (int k = 0; k < 10; ++k) step(t, c, g, team);
    CHECK((t.positions - x).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("isolated double integrator at rest stays at the origin") {
  SimConfig c;
  c.dynamics = Dynamics::Double;
  auto team = zero_team(1);
  SwarmState s(0.0, AgentMatrix::Zero(1, 2));
  auto g = ProximityGraph::build_initial(s.positions, 5.0, 0.5);
  for (int k = 0; k < 100; ++k) step(s, c, g, team);
  CHECK(s.positions.norm() == 0.0);
  CHECK(s.velocities.norm() == 0.0);
}

TEST_CASE("zero-duration run records only the initial state") {
  auto c = short_single(0.0);
  auto r = run(c, fig1_team(), SwarmState(0.0, hexagon(1.5)));
  CHECK(r.trace.size() == 1);
  CHECK(r.metrics.size() == 1);
  CHECK(r.report.steps_taken == 0);
  CHECK(r.trace[0].positions == hexagon(1.5));
}

TEST_CASE("recording cadence includes the final step") {
  auto c = short_single(0.0105);
  c.record_every = 4;
  auto r = run(c, fig1_team(), SwarmState(0.0, hexagon(1.5)));
  REQUIRE(r.report.steps_taken == 11);
  // steps 0, 4, 8 and the final step 11
  REQUIRE(r.metrics.size() == 4);
  CHECK(r.metrics[1].t == doctest::Approx(0.004));
  CHECK(r.metrics.back().t == doctest::Approx(0.011));
  for (std::size_t k = 1; k < r.metrics.size(); ++k) CHECK(r.metrics[k].t > r.metrics[k - 1].t);
}

TEST_CASE("two identical runs produce identical traces") {
  auto c = short_single(0.5);
  auto a = run(c, fig1_team(), SwarmState(0.0, hexagon(1.5)));
  auto b = run(c, fig1_team(), SwarmState(0.0, hexagon(1.5)));
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) CHECK(a.trace[k].positions == b.trace[k].positions);
}

TEST_CASE("W vanishes with all bonded pairs at the desired distance") {
  const AgentMatrix x = rows({v2(0, 0), v2(0.5, 0)});
  auto g = ProximityGraph::build_initial(x, 5.0, 0.5);
  PotentialParams p;
  CHECK(lyapunov_W(SwarmState(0.0, x), g, p, Dynamics::Single) == 0.0);
  CHECK(lyapunov_W(SwarmState(0.0, x), g, p, Dynamics::Double) == 0.0);
}

TEST_CASE("W for one bonded pair counts both ordered pairs") {
  const double r = (0.5 + 5.0) / 2;
  const AgentMatrix x = rows({v2(0, 0), v2(r, 0)});
  auto g = ProximityGraph::build_initial(x, 5.0, 0.5);
  PotentialParams p;
  const double v = p.gain * (r - 0.5) * (r - 0.5) * (1 / r + 1 / (5.0 - r));
  CHECK(lyapunov_W(SwarmState(0.0, x), g, p, Dynamics::Single) == doctest::Approx(v));
  // double: (1/N) * 2V
  CHECK(lyapunov_W(SwarmState(0.0, x), g, p, Dynamics::Double) == doctest::Approx(v));
}

TEST_CASE("W for the double case includes the velocity disagreement") {
  const AgentMatrix x = rows({v2(0, 0), v2(0.5, 0)});
  const AgentMatrix v = rows({v2(1, 0), v2(-1, 0)});
  auto g = ProximityGraph::build_initial(x, 5.0, 0.5);
  CHECK(lyapunov_W(SwarmState(0.0, x, v), g, PotentialParams{}, Dynamics::Double) == doctest::Approx(1.0));
}

TEST_CASE("W1 examples") {
  TeamCost one({AffineGradientCost(2.0, TimeSignal::zero(2))});
  CHECK(lyapunov_W1(SwarmState(0.0, rows({v2(1, 0)})), one, Dynamics::Single) == doctest::Approx(2.0));

  auto team = fig1_team();
  const double t = 7.3;
  const Vec xs = v2(3.5 * std::sin(0.2 * t), 3.5 * std::cos(0.2 * t));
  AgentMatrix x(6, 2);
  x.rowwise() = xs.transpose();
  CHECK(lyapunov_W1(SwarmState(t, x), team, Dynamics::Single) <= 1e-24);

  // double: W1 vanishes once sum v equals sum S_j, S_j = (g_j' + sigma x_j + g_j) / sigma
  AgentMatrix v(6, 2);
  for (int j = 0; j < 6; ++j) {
    const auto& c = team.member(j);
    v.row(j) = ((c.signal().rate(t) + c.gradient(x.row(j).transpose(), t)) / c.sigma()).transpose();
  }
  CHECK(lyapunov_W1(SwarmState(t, x, v), team, Dynamics::Double) <= 1e-24);

  // riding the optimum (v_j = v*) leaves sum v - sum S = -2 sum g' / sigma, so W1 stays positive
  const Vec vs = v2(0.7 * std::cos(0.2 * t), -0.7 * std::sin(0.2 * t));
  v.rowwise() = vs.transpose();
  const Vec gdot_sum = v2(-8.4 * std::cos(0.2 * t), 8.4 * std::sin(0.2 * t));
  CHECK(lyapunov_W1(SwarmState(t, x, v), team, Dynamics::Double) ==
        doctest::Approx(0.5 * (2.0 * gdot_sum / 2.0).squaredNorm()));
}

TEST_CASE("bonded set only grows during a run") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3, 3);
  AgentMatrix x(5, 2);
  for (int i = 0; i < 5; ++i) x.row(i) = v2(2.2 * i, u(rng) * 0.3).transpose();
  auto team = fig1_team();
  std::vector<AffineGradientCost> m(team.members().begin(), team.members().begin() + 5);
  TeamCost t5(m);
  auto c = short_single(1.0);
  auto g = ProximityGraph::build_initial(x, 5.0, 0.5);
  SwarmState s(0.0, x);
  Mat prev = g.weights();
  for (int k = 0; k < 1000; ++k) {
    step(s, c, g, t5);
    CHECK(((prev.array() > 0) <= (g.weights().array() > 0)).all());
    prev = g.weights();
  }
}

TEST_CASE("agents converging on one point abort with a collision") {
  SimConfig c;
  c.coupling = false;
  c.dt = 1e-2;
  c.t_end = 40;
  c.single_gains = {0, 0, 1};
  auto r = run(c, zero_team(2), SwarmState(0.0, rows({v2(-1, 0), v2(1, 0)})));
  CHECK(r.report.aborted);
  CHECK(r.report.collisions == 1);
  CHECK(r.report.violations() == 1);
  CHECK_FALSE(r.tail.empty());
  CHECK(r.tail.size() <= 5);
  CHECK(r.metrics.back().min_pair_distance > 0.0);
}

TEST_CASE("unstable step size aborts on a nonfinite state") {
  SimConfig c;
  c.coupling = false;
  c.integrator = Integrator::Euler;
  c.dt = 3.0;
  c.t_end = 30000;
  c.single_gains = {0, 0, 1};
  auto r = run(c, zero_team(2), SwarmState(0.0, rows({v2(-1, 0), v2(1, 0.5)})));
  CHECK(r.report.aborted);
  CHECK(r.report.nonfinite == 1);
}

TEST_CASE("a bonded pair pulled beyond the radius is reported once") {
  // strong anchors far apart overpower the potential with a force cap
  const AgentMatrix x0 = rows({v2(-1, 0), v2(1, 0)});
  auto team = anchored_team(rows({v2(-10, 0), v2(10, 0)}), 2.0);
  SimConfig c;
  c.single_gains = {0, 0, 1};
  c.potential.force_cap = 0.1;
  c.dt = 1e-2;
  c.t_end = 10;
  auto r = run(c, team, SwarmState(0.0, x0));
  CHECK(r.report.connectivity_violations == 1);
  CHECK(r.report.disconnections == 1);
  CHECK(r.report.clamp_total > 0);
  CHECK(r.metrics.back().lambda2 == 0.0);
  CHECK(std::isinf(r.metrics.back().lyap_W));
}

TEST_CASE("a far pair that drifts together bonds") {
  const AgentMatrix x0 = rows({v2(-4, 0), v2(4, 0)});
  auto team = anchored_team(rows({v2(-1, 0), v2(1, 0)}), 2.0);
  SimConfig c;
  c.single_gains = {0, 0, 1};
  c.dt = 1e-2;
  c.t_end = 5;
  auto r = run(c, team, SwarmState(0.0, x0));
  CHECK_FALSE(r.report.initial_connected);
  CHECK(r.report.edges_added == 1);
  CHECK(r.report.disconnections == 0);
  CHECK(r.metrics.back().lambda2 > 0.0);
}

TEST_CASE("configuration validation") {
  SimConfig c;
  c.dt = 0;
  CHECK_THROWS_AS(c.validate(2), ConfigError);
  c = SimConfig{};
  c.t_end = -1;
  CHECK_THROWS_AS(c.validate(2), ConfigError);
  c = SimConfig{};
  c.record_every = 0;
  CHECK_THROWS_AS(c.validate(2), ConfigError);
  c = SimConfig{};
  c.hysteresis = 6;
  CHECK_THROWS_AS(c.validate(2), ConfigError);
  CHECK_THROWS_AS(run(SimConfig{}, zero_team(3), SwarmState(0.0, AgentMatrix::Zero(2, 2))), ConfigError);
}
