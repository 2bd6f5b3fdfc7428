#include "swarmtrack/graph.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace swarmtrack {

namespace {

void check_positions(const AgentMatrix& positions) {
  require(positions.rows() >= 1, "graph: at least one agent required");
  require(positions.allFinite(), "graph: nonfinite position");
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < positions.rows(); ++j) {
      if ((positions.row(i) - positions.row(j)).norm() == 0.0) {
        throw ConfigError("graph: agents " + std::to_string(i + 1) + " and " +
                          std::to_string(j + 1) + " are coincident");
      }
    }
  }
}

}  // namespace

ProximityGraph::ProximityGraph(Mat weights, double radius, double hysteresis,
                               std::optional<Mat> table)
    : weights_(std::move(weights)),
      radius_(radius),
      hysteresis_(hysteresis),
      table_(std::move(table)),
      neighbors_(static_cast<std::size_t>(weights_.rows())) {
  require(std::isfinite(radius) && radius > 0.0, "graph: radius must be positive");
  require(std::isfinite(hysteresis) && hysteresis > 0.0 && hysteresis < radius,
          "graph: hysteresis must lie in (0, radius)");
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (i != j && weights_(i, j) > 0.0) neighbors_[static_cast<std::size_t>(i)].push_back(j);
    }
  }
}

ProximityGraph ProximityGraph::build_initial(const AgentMatrix& positions, double radius,
                                             double hysteresis, std::optional<Mat> weight_table) {
  check_positions(positions);
  const auto n = positions.rows();
  if (weight_table) {
    require(weight_table->rows() == n && weight_table->cols() == n,
            "graph: weight table must be n x n");
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        require(std::isfinite((*weight_table)(i, j)) && (*weight_table)(i, j) > 0.0,
                "graph: weight table entries must be positive");
        require((*weight_table)(i, j) == (*weight_table)(j, i), "graph: weight table must be symmetric");
      }
    }
  }
  ProximityGraph g(Mat::Zero(n, n), radius, hysteresis, std::move(weight_table));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((positions.row(i) - positions.row(j)).norm() < radius) g.bond(i, j);
    }
  }
  return g;
}

ProximityGraph ProximityGraph::from_weights(const Mat& weights, double radius, double hysteresis) {
  require(weights.rows() == weights.cols(), "graph: weight matrix must be square");
  require(weights.allFinite(), "graph: nonfinite weight");
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    require(weights(i, i) == 0.0, "graph: weight diagonal must be zero");
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      require(weights(i, j) >= 0.0, "graph: weights must be nonnegative");
      require(weights(i, j) == weights(j, i), "graph: weights must be symmetric");
    }
  }
  return ProximityGraph(weights, radius, hysteresis, std::nullopt);
}

double ProximityGraph::rule_weight(int i, int j) const {
  return table_ ? (*table_)(i, j) : 1.0;
}

void ProximityGraph::bond(int i, int j) {
  const double w = rule_weight(i, j);
  weights_(i, j) = w;
  weights_(j, i) = w;
  neighbors_[static_cast<std::size_t>(i)].push_back(j);
  neighbors_[static_cast<std::size_t>(j)].push_back(i);
}

std::vector<EdgeEvent> ProximityGraph::update_edges(const AgentMatrix& positions) {
  std::vector<EdgeEvent> events;
  const double bond_at = radius_ - hysteresis_;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      const double r = (positions.row(i) - positions.row(j)).norm();
      if (bonded(i, j)) {
        if (r >= radius_) events.push_back({EdgeEvent::Kind::Violation, i, j, r});
      } else if (r <= bond_at) {
        bond(i, j);
        events.push_back({EdgeEvent::Kind::Added, i, j, r});
      }
    }
  }
  return events;
}

std::vector<std::pair<int, int>> ProximityGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      if (bonded(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::size_t ProximityGraph::edge_count() const { return edges().size(); }

Mat laplacian(const Mat& weights) {
  Mat l = -weights;
  l.diagonal() = weights.rowwise().sum() - weights.diagonal();
  return l;
}

double algebraic_connectivity(const Mat& lap) {
  if (lap.rows() < 2) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> solver(lap, Eigen::EigenvaluesOnly);
  // eigenvalues come back in increasing order
  return std::max(0.0, solver.eigenvalues()(1));
}

SpectralSummary spectral(const ProximityGraph& graph, double tolerance) {
  SpectralSummary s;
  s.laplacian = laplacian(graph.weights());
  const auto e = graph.edges();
  s.incidence = Mat::Zero(graph.size(), static_cast<Eigen::Index>(e.size()));
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double w = std::sqrt(graph.weight(e[k].first, e[k].second));
    s.incidence(e[k].first, static_cast<Eigen::Index>(k)) = w;
    s.incidence(e[k].second, static_cast<Eigen::Index>(k)) = -w;
  }
  s.lambda2 = algebraic_connectivity(s.laplacian);
  s.connected = graph.size() >= 2 && s.lambda2 > tolerance;
  return s;
}

Mat live_weights(const ProximityGraph& graph, const AgentMatrix& positions) {
  Mat w = graph.weights();
  for (const auto& [i, j] : graph.edges()) {
    if ((positions.row(i) - positions.row(j)).norm() >= graph.radius()) w(i, j) = w(j, i) = 0.0;
  }
  return w;
}

}  // namespace swarmtrack
