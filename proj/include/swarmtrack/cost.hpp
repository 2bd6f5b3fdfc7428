#pragma once

#include "swarmtrack/types.hpp"

#include <vector>

namespace swarmtrack {

enum class SignalKind {
  Sinusoid,    // A sin(wt + p)
  Cosine,      // A cos(wt + p)
  Damped,      // A sin(wt + p) / (t + 1)
  Polynomial,  // sum_k c_k t^k
  Constant,    // A
};

struct SignalTerm {
  SignalKind kind = SignalKind::Constant;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  std::vector<double> coeffs;  // polynomial only, lowest degree first

  double value(double t) const;
  double rate(double t) const;
  double accel(double t) const;
};

/// Sum of terms for one coordinate. An empty sum is identically zero.
struct ScalarSignal {
  std::vector<SignalTerm> terms;

  double value(double t) const;
  double rate(double t) const;
  double accel(double t) const;
};

/// Vector valued signal g(t) with analytic first and second derivatives.
class TimeSignal {
 public:
  TimeSignal() = default;
  explicit TimeSignal(std::vector<ScalarSignal> components);
  static TimeSignal zero(int dim);
  static TimeSignal constant(const Vec& c);

  int dim() const { return static_cast<int>(components_.size()); }
  const std::vector<ScalarSignal>& components() const { return components_; }

  Vec value(double t) const;
  Vec rate(double t) const;
  Vec accel(double t) const;

 private:
  std::vector<ScalarSignal> components_;
};

/// Cost frozen at one instant: (sigma/2)|x|^2 + offset.x
struct FrozenCost {
  double sigma;
  Vec offset;

  double value(const Vec& x) const { return 0.5 * sigma * x.squaredNorm() + offset.dot(x); }
};

/// f(x, t) = (sigma/2)|x|^2 + g(t).x, so grad f = sigma x + g(t) and H = sigma I.
class AffineGradientCost {
 public:
  AffineGradientCost(double sigma, TimeSignal g);

  double sigma() const { return sigma_; }
  int dim() const { return signal_.dim(); }
  const TimeSignal& signal() const { return signal_; }

  double value(const Vec& x, double t) const;
  Vec gradient(const Vec& x, double t) const;
  Mat hessian() const;

  struct TimeDerivatives {
    Vec rate;   // d/dt grad f
    Vec accel;  // d2/dt2 grad f
  };
  /// Partial time derivatives of the gradient; independent of x for this family.
  TimeDerivatives grad_time_derivatives(const Vec& x, double t) const;

  FrozenCost at(double t) const;

 private:
  double sigma_;
  TimeSignal signal_;
};

struct TeamOptimum {
  Vec position;
  Vec velocity;
};

/// Sum of per-agent costs sharing one sigma.
class TeamCost {
 public:
  explicit TeamCost(std::vector<AffineGradientCost> members);

  int size() const { return static_cast<int>(members_.size()); }
  int dim() const { return members_.front().dim(); }
  double sigma() const { return members_.front().sigma(); }
  const AffineGradientCost& member(int i) const { return members_[static_cast<std::size_t>(i)]; }
  const std::vector<AffineGradientCost>& members() const { return members_; }

  double value(const Vec& x, double t) const;

  /// x* = -sum g_j / (N sigma), v* = -sum g'_j / (N sigma).
  TeamOptimum team_optimum(double t) const;

 private:
  std::vector<AffineGradientCost> members_;
};

struct SearchBox {
  Vec lower;
  Vec upper;

  static SearchBox symmetric(int dim, double half_width);
};

/// Box of half width 2 + 2 max|g_i(t)| / sigma, which contains the team minimizer.
SearchBox default_search_box(const TeamCost& team, double t);

/// Exhaustive grid minimizer of the team cost value. Throws ConfigError when
/// the best grid point lies on the box boundary.
Vec brute_force_optimum(const TeamCost& team, double t, const SearchBox& box, double grid_step);

}  // namespace swarmtrack
