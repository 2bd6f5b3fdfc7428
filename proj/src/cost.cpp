#include "swarmtrack/cost.hpp"

#include <cmath>
#include <limits>

namespace swarmtrack {

double SignalTerm::value(double t) const {
  switch (kind) {
    case SignalKind::Sinusoid:
      return amplitude * std::sin(omega * t + phase);
    case SignalKind::Cosine:
      return amplitude * std::cos(omega * t + phase);
    case SignalKind::Damped:
      return amplitude * std::sin(omega * t + phase) / (t + 1.0);
    case SignalKind::Polynomial: {
      double acc = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
    case SignalKind::Constant:
      return amplitude;
  }
  return 0.0;
}

double SignalTerm::rate(double t) const {
  switch (kind) {
    case SignalKind::Sinusoid:
      return amplitude * omega * std::cos(omega * t + phase);
    case SignalKind::Cosine:
      return -amplitude * omega * std::sin(omega * t + phase);
    case SignalKind::Damped: {
      const double u = 1.0 / (t + 1.0);
      const double s = std::sin(omega * t + phase);
      const double c = std::cos(omega * t + phase);
      return amplitude * (omega * c * u - s * u * u);
    }
    case SignalKind::Polynomial: {
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * coeffs[k];
      return acc;
    }
    case SignalKind::Constant:
      return 0.0;
  }
  return 0.0;
}

double SignalTerm::accel(double t) const {
  switch (kind) {
    case SignalKind::Sinusoid:
      return -amplitude * omega * omega * std::sin(omega * t + phase);
    case SignalKind::Cosine:
      return -amplitude * omega * omega * std::cos(omega * t + phase);
    case SignalKind::Damped: {
      const double u = 1.0 / (t + 1.0);
      const double s = std::sin(omega * t + phase);
      const double c = std::cos(omega * t + phase);
      return amplitude * (-omega * omega * s * u - 2.0 * omega * c * u * u + 2.0 * s * u * u * u);
    }
    case SignalKind::Polynomial: {
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 2;) {
        acc = acc * t + static_cast<double>(k * (k - 1)) * coeffs[k];
      }
      return acc;
    }
    case SignalKind::Constant:
      return 0.0;
  }
  return 0.0;
}

double ScalarSignal::value(double t) const {
  double s = 0.0;
  for (const auto& term : terms) s += term.value(t);
  return s;
}

double ScalarSignal::rate(double t) const {
  double s = 0.0;
  for (const auto& term : terms) s += term.rate(t);
  return s;
}

double ScalarSignal::accel(double t) const {
  double s = 0.0;
  for (const auto& term : terms) s += term.accel(t);
  return s;
}

TimeSignal::TimeSignal(std::vector<ScalarSignal> components) : components_(std::move(components)) {
  require(!components_.empty(), "signal: dimension must be at least 1");
  for (const auto& c : components_) {
    for (const auto& term : c.terms) {
      require(std::isfinite(term.amplitude) && std::isfinite(term.omega) && std::isfinite(term.phase),
              "signal: nonfinite parameter");
      for (double k : term.coeffs) require(std::isfinite(k), "signal: nonfinite polynomial coefficient");
    }
  }
}

TimeSignal TimeSignal::zero(int dim) {
  return TimeSignal(std::vector<ScalarSignal>(static_cast<std::size_t>(dim)));
}

TimeSignal TimeSignal::constant(const Vec& c) {
  std::vector<ScalarSignal> comps(static_cast<std::size_t>(c.size()));
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    SignalTerm term;
    term.kind = SignalKind::Constant;
    term.amplitude = c(k);
    comps[static_cast<std::size_t>(k)].terms.push_back(term);
  }
  return TimeSignal(std::move(comps));
}

Vec TimeSignal::value(double t) const {
  Vec out(dim());
  for (int k = 0; k < dim(); ++k) out(k) = components_[static_cast<std::size_t>(k)].value(t);
  return out;
}

Vec TimeSignal::rate(double t) const {
  Vec out(dim());
  for (int k = 0; k < dim(); ++k) out(k) = components_[static_cast<std::size_t>(k)].rate(t);
  return out;
}

Vec TimeSignal::accel(double t) const {
  Vec out(dim());
  for (int k = 0; k < dim(); ++k) out(k) = components_[static_cast<std::size_t>(k)].accel(t);
  return out;
}

AffineGradientCost::AffineGradientCost(double sigma, TimeSignal g) : sigma_(sigma), signal_(std::move(g)) {
  require(std::isfinite(sigma) && sigma > 0.0, "cost: sigma must be positive");
  require(signal_.dim() >= 1, "cost: dimension must be at least 1");
}

double AffineGradientCost::value(const Vec& x, double t) const { return at(t).value(x); }

Vec AffineGradientCost::gradient(const Vec& x, double t) const { return sigma_ * x + signal_.value(t); }

Mat AffineGradientCost::hessian() const { return sigma_ * Mat::Identity(dim(), dim()); }

AffineGradientCost::TimeDerivatives AffineGradientCost::grad_time_derivatives(const Vec& /*x*/,
                                                                              double t) const {
  return {signal_.rate(t), signal_.accel(t)};
}

FrozenCost AffineGradientCost::at(double t) const { return {sigma_, signal_.value(t)}; }

TeamCost::TeamCost(std::vector<AffineGradientCost> members) : members_(std::move(members)) {
  require(!members_.empty(), "team: at least one member required");
  for (const auto& m : members_) {
    require(m.sigma() == members_.front().sigma(), "team: all members must share sigma");
    require(m.dim() == members_.front().dim(), "team: all members must share dimension");
  }
}

double TeamCost::value(const Vec& x, double t) const {
  double s = 0.0;
  for (const auto& m : members_) s += m.value(x, t);
  return s;
}

TeamOptimum TeamCost::team_optimum(double t) const {
  Vec gsum = Vec::Zero(dim());
  Vec rsum = Vec::Zero(dim());
  for (const auto& m : members_) {
    gsum += m.signal().value(t);
    rsum += m.signal().rate(t);
  }
  const double scale = -1.0 / (static_cast<double>(size()) * sigma());
  return {scale * gsum, scale * rsum};
}

SearchBox SearchBox::symmetric(int dim, double half_width) {
  return {Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width)};
}

SearchBox default_search_box(const TeamCost& team, double t) {
  double gmax = 0.0;
  for (const auto& m : team.members()) gmax = std::max(gmax, m.signal().value(t).cwiseAbs().maxCoeff());
  return SearchBox::symmetric(team.dim(), 2.0 + 2.0 * gmax / team.sigma());
}

Vec brute_force_optimum(const TeamCost& team, double t, const SearchBox& box, double grid_step) {
  require(grid_step > 0.0 && std::isfinite(grid_step), "brute force: grid step must be positive");
  const int m = team.dim();
  require(box.lower.size() == m && box.upper.size() == m, "brute force: box dimension mismatch");

  std::vector<FrozenCost> frozen;
  frozen.reserve(static_cast<std::size_t>(team.size()));
  for (const auto& member : team.members()) frozen.push_back(member.at(t));

  std::vector<long> count(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    require(box.upper(k) > box.lower(k), "brute force: empty box");
    count[static_cast<std::size_t>(k)] =
        static_cast<long>(std::floor((box.upper(k) - box.lower(k)) / grid_step + 1e-9)) + 1;
  }

  std::vector<long> idx(static_cast<std::size_t>(m), 0);
  std::vector<long> best_idx = idx;
  double best = std::numeric_limits<double>::infinity();
  Vec x(m);
  for (;;) {
    for (int k = 0; k < m; ++k) x(k) = box.lower(k) + static_cast<double>(idx[static_cast<std::size_t>(k)]) * grid_step;
    double f = 0.0;
    for (const auto& fc : frozen) f += fc.value(x);
    if (f < best) {
      best = f;
      best_idx = idx;
    }
    int k = 0;
    while (k < m && ++idx[static_cast<std::size_t>(k)] == count[static_cast<std::size_t>(k)]) {
      idx[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == m) break;
  }

  Vec out(m);
  for (int k = 0; k < m; ++k) {
    const long i = best_idx[static_cast<std::size_t>(k)];
    if (i == 0 || i == count[static_cast<std::size_t>(k)] - 1) {
      throw ConfigError("brute force: minimizer on box boundary (box too small)");
    }
    out(k) = box.lower(k) + static_cast<double>(i) * grid_step;
  }
  return out;
}

}  // namespace swarmtrack
