#pragma once

#include "swarmtrack/types.hpp"

#include <atomic>
#include <optional>

namespace swarmtrack {

/// Pairwise potential V(r) = k (r - d)^2 (1/r + 1/(R - r)) for bonded pairs,
/// zero for pairs that were never bonded.
///
/// V has its unique minimum V(d) = 0 and diverges as r -> 0 and r -> R, so a
/// bounded total potential rules out both collisions and link breaks.
struct PotentialParams {
  double radius = 5.0;
  double desired_distance = 0.5;
  double gain = 1.0;
  std::optional<double> force_cap;
  std::optional<Mat> pair_distance;  // per-pair d_ij override, symmetric

  double distance(int i, int j) const {
    return pair_distance ? (*pair_distance)(i, j) : desired_distance;
  }

  /// Throws ConfigError unless 0 < d_ij < R, gain > 0 and the cap (if any) is positive.
  void validate(int agents) const;
};

/// Counts force-cap clamps. Shared across evaluations of one run.
class ClampCounter {
 public:
  void add() { count_.fetch_add(1, std::memory_order_relaxed); }
  long count() const { return count_.load(std::memory_order_relaxed); }
  void reset() { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<long> count_{0};
};

namespace potential {

/// V(r); throws ConfigError for r <= 0.
double value(double radius, double d, double gain, double r, bool bonded);

/// dV/dr for a bonded pair.
double slope(double radius, double d, double gain, double r);

double value(const PotentialParams& p, int i, int j, double r, bool bonded);

/// dV_ij/dx_i = V'(r) (x_i - x_j) / r, optionally clamped in magnitude to the
/// force cap. grad_wrt_i(j, i) == -grad_wrt_i(i, j) bit for bit. Throws
/// SimulationAbort for coincident positions.
Vec grad_wrt_i(const PotentialParams& p, int i, int j, const Vec& xi, const Vec& xj, bool bonded,
               ClampCounter* clamps = nullptr);

/// Same as grad_wrt_i with the relative position x_i - x_j supplied directly.
Vec grad_from_offset(const PotentialParams& p, int i, int j, const Vec& offset, bool bonded,
                     ClampCounter* clamps = nullptr);
/// Scalar c with grad_from_offset(...) == c * offset for a bonded pair.
double gradient_scale(const PotentialParams& p, int i, int j, const Vec& offset, ClampCounter* clamps = nullptr);

}  // namespace potential
}  // namespace swarmtrack
