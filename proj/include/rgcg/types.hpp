#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace rgcg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when a linear operator that must be inverted turns out singular
/// (Sylvester/Lyapunov systems, p x p inverses in transports).
class SingularOperatorError : public std::runtime_error {
 public:
  explicit SingularOperatorError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Thrown when an inverse retraction is requested outside its domain
/// (antipodal points on the sphere, non-SPD Lyapunov solution on Stiefel).
class InverseRetractionError : public std::runtime_error {
 public:
  explicit InverseRetractionError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace rgcg
