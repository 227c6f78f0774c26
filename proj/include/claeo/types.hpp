#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace claeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Invalid configuration (bad gains, non-Hurwitz L, step size above cap, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Dimension mismatch or violated call contract.
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

/// Simulation state left the finite range.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& what, double t)
      : std::runtime_error(what), time(t) {}
  double time;
};

inline void require_finite(const Vec& v, const char* name) {
  if (!v.allFinite())
    throw std::invalid_argument(std::string(name) + " has non-finite components");
}

inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " is non-finite");
}

}  // namespace claeo
