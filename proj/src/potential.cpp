#include "swarmtrack/potential.hpp"

#include <cmath>
#include <string>

namespace swarmtrack {

void PotentialParams::validate(int agents) const {
  require(std::isfinite(radius) && radius > 0.0, "potential: radius must be positive");
  require(std::isfinite(gain) && gain > 0.0, "potential: gain must be positive");
  require(std::isfinite(desired_distance) && desired_distance > 0.0 && desired_distance < radius,
          "potential: desired distance must lie in (0, radius)");
  if (force_cap) require(std::isfinite(*force_cap) && *force_cap > 0.0, "potential: force cap must be positive");
  if (pair_distance) {
    require(pair_distance->rows() == agents && pair_distance->cols() == agents,
            "potential: pair distance table must be n x n");
    for (int i = 0; i < agents; ++i) {
      for (int j = 0; j < agents; ++j) {
        if (i == j) continue;
        const double d = (*pair_distance)(i, j);
        require(std::isfinite(d) && d > 0.0 && d < radius,
                "potential: pair distance " + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                    " must lie in (0, radius)");
        require(d == (*pair_distance)(j, i), "potential: pair distance table must be symmetric");
      }
    }
  }
}

namespace potential {

double value(double radius, double d, double gain, double r, bool bonded) {
  require(r > 0.0, "potential: distance must be positive");
  if (!bonded) return 0.0;
  const double e = r - d;
  return gain * e * e * (1.0 / r + 1.0 / (radius - r));
}

double slope(double radius, double d, double gain, double r) {
  const double e = r - d;
  const double a = 1.0 / r;
  const double b = 1.0 / (radius - r);
  return gain * (2.0 * e * (a + b) + e * e * (b * b - a * a));
}

double value(const PotentialParams& p, int i, int j, double r, bool bonded) {
  return value(p.radius, p.distance(i, j), p.gain, r, bonded);
}

Vec grad_wrt_i(const PotentialParams& p, int i, int j, const Vec& xi, const Vec& xj, bool bonded,
               ClampCounter* clamps) {
  return grad_from_offset(p, i, j, xi - xj, bonded, clamps);
}

Vec grad_from_offset(const PotentialParams& p, int i, int j, const Vec& offset, bool bonded,
                     ClampCounter* clamps) {
  if (!bonded) return Vec::Zero(offset.size());
  return gradient_scale(p, i, j, offset, clamps) * offset;
}

double gradient_scale(const PotentialParams& p, int i, int j, const Vec& offset, ClampCounter* clamps) {
  const double r = offset.norm();
  if (!(r > 0.0)) {
    throw SimulationAbort("potential: agents " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                          " are coincident");
  }
  double scale = slope(p.radius, p.distance(i, j), p.gain, r) / r;
  if (p.force_cap && std::abs(scale) * r > *p.force_cap) {
    scale = std::copysign(*p.force_cap / r, scale);
    if (clamps) clamps->add();
  }
  return scale;
}

}  // namespace potential
}  // namespace swarmtrack
