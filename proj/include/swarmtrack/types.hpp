#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace swarmtrack {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Rows are agents, columns are coordinates.
using AgentMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Invalid configuration, parameter or input value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A simulation reached a state the analysis excludes (collision, nonfinite value).
class SimulationAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ConfigError(what);
}

}  // namespace swarmtrack
