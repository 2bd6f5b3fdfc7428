#pragma once

#include "swarmtrack/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace swarmtrack {

struct EdgeEvent {
  enum class Kind { Added, Violation };
  Kind kind;
  int i;
  int j;
  double distance;
};

/// Undirected proximity graph whose bonded set only grows.
///
/// A pair is bonded at construction when it is strictly closer than the
/// radius. Later a non-bonded pair bonds once it comes within
/// `radius - hysteresis`. Bonded pairs are never dropped; a bonded pair that
/// separates to the radius or beyond produces a violation event instead.
class ProximityGraph {
 public:
  /// Bonds every pair closer than `radius`. Pair weights come from
  /// `weight_table` when given (entry (i, j), must be positive), else 1.
  static ProximityGraph build_initial(const AgentMatrix& positions, double radius,
                                      double hysteresis,
                                      std::optional<Mat> weight_table = std::nullopt);

  /// Graph with an explicit symmetric weight matrix (a_ij > 0 means bonded).
  static ProximityGraph from_weights(const Mat& weights, double radius, double hysteresis);

  /// Adds newly close pairs and flags bonded pairs at or beyond the radius.
  std::vector<EdgeEvent> update_edges(const AgentMatrix& positions);

  int size() const { return static_cast<int>(weights_.rows()); }
  double radius() const { return radius_; }
  double hysteresis() const { return hysteresis_; }
  bool bonded(int i, int j) const { return weights_(i, j) > 0.0; }
  double weight(int i, int j) const { return weights_(i, j); }
  const Mat& weights() const { return weights_; }
  const std::vector<int>& neighbors(int i) const { return neighbors_[static_cast<std::size_t>(i)]; }

  /// Bonded pairs (i < j) in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;
  std::size_t edge_count() const;

 private:
  ProximityGraph(Mat weights, double radius, double hysteresis, std::optional<Mat> table);
  void bond(int i, int j);
  double rule_weight(int i, int j) const;

  Mat weights_;
  double radius_;
  double hysteresis_;
  std::optional<Mat> table_;
  std::vector<std::vector<int>> neighbors_;
};

struct SpectralSummary {
  Mat laplacian;
  Mat incidence;  // n x |E|, column (i, j) holds +sqrt(a_ij) at i and -sqrt(a_ij) at j
  double lambda2 = 0.0;
  bool connected = false;
};

/// Weighted Laplacian l_ii = sum_j a_ij, l_ij = -a_ij.
Mat laplacian(const Mat& weights);

/// Laplacian, incidence matrix and algebraic connectivity of the graph.
SpectralSummary spectral(const ProximityGraph& graph, double tolerance = 1e-9);

/// Weights of the bonded pairs that are still strictly inside the radius.
Mat live_weights(const ProximityGraph& graph, const AgentMatrix& positions);

/// Second-smallest eigenvalue of a symmetric Laplacian.
double algebraic_connectivity(const Mat& laplacian);

}  // namespace swarmtrack
