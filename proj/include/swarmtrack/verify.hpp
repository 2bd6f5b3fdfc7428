#pragma once

#include "swarmtrack/cost.hpp"
#include "swarmtrack/potential.hpp"
#include "swarmtrack/state.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace swarmtrack {

struct FdSpec {
  double h = 1e-5;    // central step for first derivatives
  double h2 = 1e-3;   // central step for second differences
  double rel_tol = 1e-6;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity (an error, a ratio, ...)
  double threshold = 0.0;  // pass limit for `value`
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  void append(const VerifyReport& other);
};

/// Analytic gradient, g' and g'' against central differences of cost values and
/// signal samples at `samples` random (x, t). Errors are |a - fd| / (1 + |a|).
VerifyReport fd_gradient_check(const AffineGradientCost& cost, int samples, std::uint64_t seed,
                               const FdSpec& fd = {});

/// Minimum at d, blow-up at 0 and R, positivity, antisymmetry and gradient
/// against central differences of V(|x_i - x_j|).
VerifyReport fd_potential_check(const PotentialParams& params, int samples, std::uint64_t seed,
                                const FdSpec& fd = {});

/// Closed-form team optimum against the exhaustive grid minimizer.
VerifyReport optimum_cross_check(const TeamCost& team, const std::vector<double>& times,
                                 std::optional<SearchBox> box, double grid_step);

/// Runs the closed loop with every coupling term removed and checks that the
/// gradient sum decays as the averaged dynamics predict: exp(-tau t) within 5%
/// on [1, 10] for single integrators, and |(z, z')|(T) <= 1e-3 |(z, z')|(0) for
/// double integrators, where z is the gradient sum.
VerifyReport averaged_dynamics_check(const TeamCost& team, Dynamics dynamics, const AgentMatrix& initial,
                                     double duration, double dt, double tau = 1.0);

}  // namespace swarmtrack
