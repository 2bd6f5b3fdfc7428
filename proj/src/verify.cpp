#include "swarmtrack/verify.hpp"

#include "swarmtrack/sim.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace swarmtrack {

bool VerifyReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

void VerifyReport::append(const VerifyReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

namespace {

CheckResult at_most(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

double rel_err(const Vec& analytic, const Vec& numeric) {
  return (analytic - numeric).norm() / (1.0 + analytic.norm());
}

}  // namespace

VerifyReport fd_gradient_check(const AffineGradientCost& cost, int samples, std::uint64_t seed, const FdSpec& fd) {
  require(samples >= 1, "fd check: samples must be positive");
  require(fd.h > 0.0 && fd.h2 > 0.0, "fd check: step must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xs(-5.0, 5.0);
  std::uniform_real_distribution<double> ts(fd.h2, 50.0);
  const int m = cost.dim();
  const TimeSignal& g = cost.signal();

  double worst_grad = 0.0;
  double worst_rate = 0.0;
  double worst_accel = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x(m);
    for (int k = 0; k < m; ++k) x(k) = xs(rng);
    const double t = ts(rng);

    Vec fd_grad(m);
    for (int k = 0; k < m; ++k) {
      Vec xp = x;
      Vec xm = x;
      xp(k) += fd.h;
      xm(k) -= fd.h;
      fd_grad(k) = (cost.value(xp, t) - cost.value(xm, t)) / (2.0 * fd.h);
    }
    worst_grad = std::max(worst_grad, rel_err(cost.gradient(x, t), fd_grad));

    const auto d = cost.grad_time_derivatives(x, t);
    const Vec fd_rate = (g.value(t + fd.h) - g.value(t - fd.h)) / (2.0 * fd.h);
    const Vec fd_accel = (g.value(t + fd.h2) - 2.0 * g.value(t) + g.value(t - fd.h2)) / (fd.h2 * fd.h2);
    worst_rate = std::max(worst_rate, rel_err(d.rate, fd_rate));
    worst_accel = std::max(worst_accel, rel_err(d.accel, fd_accel));
  }

  VerifyReport r;
  r.checks.push_back(at_most("cost.gradient_fd", worst_grad, fd.rel_tol));
  r.checks.push_back(at_most("cost.rate_fd", worst_rate, fd.rel_tol));
  r.checks.push_back(at_most("cost.accel_fd", worst_accel, fd.rel_tol));
  return r;
}

VerifyReport fd_potential_check(const PotentialParams& params, int samples, std::uint64_t seed, const FdSpec& fd) {
  require(samples >= 1, "fd check: samples must be positive");
  PotentialParams p = params;
  p.force_cap.reset();
  p.pair_distance.reset();
  p.validate(2);
  const double R = p.radius;
  const double d = p.desired_distance;
  auto V = [&](double r) { return potential::value(R, d, p.gain, r, true); };

  VerifyReport rep;
  rep.checks.push_back(at_most("potential.slope_at_d", std::abs(potential::slope(R, d, p.gain, d)), 1e-10));
  rep.checks.push_back(
      at_most("potential.fd_slope_at_d", std::abs((V(d + fd.h) - V(d - fd.h)) / (2.0 * fd.h)), 1e-8));

  const bool near_zero = V(0.01 * d) > V(0.1 * d) && V(0.1 * d) > V(0.5 * d);
  const double gap = R - d;
  const bool near_radius = V(R - 0.01 * gap) > V(R - 0.1 * gap) && V(R - 0.1 * gap) > V(R - 0.5 * gap);
  rep.checks.push_back({"potential.blowup_at_zero", near_zero, near_zero ? 1.0 : 0.0, 1.0, "V(0.01d) > V(0.1d)"});
  rep.checks.push_back(
      {"potential.blowup_at_radius", near_radius, near_radius ? 1.0 : 0.0, 1.0, "V(R-0.01(R-d)) > V(R-0.1(R-d))"});

  // Positive everywhere on a grid that avoids d itself.
  double min_off_d = std::numeric_limits<double>::infinity();
  constexpr int kGrid = 20000;
  for (int k = 1; k < kGrid; ++k) {
    const double r = R * static_cast<double>(k) / kGrid;
    if (std::abs(r - d) < 1e-12) continue;
    min_off_d = std::min(min_off_d, V(r));
  }
  rep.checks.push_back({"potential.positive_off_minimum", min_off_d > 0.0 && V(d) == 0.0, min_off_d, 0.0,
                        "min V over grid excluding d; V(d) must be 0"});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> rad(0.1 * d, 0.95 * R);
  std::normal_distribution<double> dir(0.0, 1.0);
  constexpr int m = 3;
  double worst = 0.0;
  double worst_antisym = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec xi(m);
    Vec u(m);
    for (int k = 0; k < m; ++k) {
      xi(k) = pos(rng);
      u(k) = dir(rng);
    }
    const Vec xj = xi + rad(rng) * u.normalized();
    Vec fd_grad(m);
    for (int k = 0; k < m; ++k) {
      Vec xp = xi;
      Vec xm = xi;
      xp(k) += fd.h;
      xm(k) -= fd.h;
      fd_grad(k) = (V((xp - xj).norm()) - V((xm - xj).norm())) / (2.0 * fd.h);
    }
    const Vec gij = potential::grad_wrt_i(p, 0, 1, xi, xj, true);
    const Vec gji = potential::grad_wrt_i(p, 1, 0, xj, xi, true);
    worst = std::max(worst, rel_err(gij, fd_grad));
    worst_antisym = std::max(worst_antisym, (gij + gji).cwiseAbs().maxCoeff());
  }
  rep.checks.push_back(at_most("potential.gradient_fd", worst, fd.rel_tol));
  rep.checks.push_back(at_most("potential.antisymmetry", worst_antisym, 0.0));
  return rep;
}

VerifyReport optimum_cross_check(const TeamCost& team, const std::vector<double>& times,
                                 std::optional<SearchBox> box, double grid_step) {
  VerifyReport rep;
  for (double t : times) {
    const SearchBox b = box ? *box : default_search_box(team, t);
    const Vec grid = brute_force_optimum(team, t, b, grid_step);
    const Vec closed = team.team_optimum(t).position;
    std::ostringstream name;
    name << "optimum.t=" << t;
    // a grid point within one step of the minimizer; the small slack absorbs grid rounding
    rep.checks.push_back(at_most(name.str(), (grid - closed).cwiseAbs().maxCoeff(), grid_step * (1.0 + 1e-9)));
  }
  return rep;
}

VerifyReport averaged_dynamics_check(const TeamCost& team, Dynamics dynamics, const AgentMatrix& initial,
                                     double duration, double dt, double tau) {
  SimConfig cfg;
  cfg.dynamics = dynamics;
  cfg.dt = dt;
  cfg.t_end = duration;
  cfg.integrator = Integrator::Rk4;
  cfg.coupling = false;
  cfg.single_gains = {0.0, 0.0, tau};
  cfg.double_gains = {0.0, 0.0};
  cfg.record_every = std::max(1, static_cast<int>(std::llround(0.1 / dt)));
  const SwarmState init(0.0, initial);
  const RunResult res = run(cfg, team, init);
  require(!res.report.aborted, "averaged dynamics: run aborted: " + res.report.abort_reason);

  auto averaged_norm = [&](const SwarmState& s) {
    const Vec z = sum_gradient(s, team);
    if (dynamics == Dynamics::Single) return z.norm();
    Vec w = Vec::Zero(s.dim());
    for (int j = 0; j < s.agents(); ++j) {
      const auto& c = team.member(j);
      w += c.sigma() * s.velocity(j) + c.grad_time_derivatives(s.position(j), s.t).rate;
    }
    return std::sqrt(z.squaredNorm() + w.squaredNorm());
  };

  VerifyReport rep;
  const double initial_norm = averaged_norm(res.trace.front());
  if (dynamics == Dynamics::Single) {
    double worst = 0.0;
    if (initial_norm <= 1e-12) {
      for (const auto& s : res.trace) worst = std::max(worst, averaged_norm(s));
      rep.checks.push_back(at_most("averaged.single_identically_zero", worst, 1e-12));
      return rep;
    }
    for (const auto& s : res.trace) {
      if (s.t < 1.0 - 1e-9 || s.t > 10.0 + 1e-9) continue;
      const double predicted = std::exp(-tau * s.t);
      worst = std::max(worst, std::abs(averaged_norm(s) / initial_norm / predicted - 1.0));
    }
    rep.checks.push_back(at_most("averaged.single_exp_decay", worst, 0.05, "max |ratio/exp(-tau t) - 1| on [1,10]"));
  } else {
    const double final_norm = averaged_norm(res.trace.back());
    if (initial_norm <= 1e-12) {
      rep.checks.push_back(at_most("averaged.double_identically_zero", final_norm, 1e-12));
    } else {
      rep.checks.push_back(at_most("averaged.double_decay_ratio", final_norm / initial_norm, 1e-3));
    }
  }
  return rep;
}

}  // namespace swarmtrack
