#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace cosparse {

using Index = Eigen::Index;
using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Thrown when a numerical hypothesis fails (rank deficiency, non-convergence
// of an iterative scheme asked to certify, inconsistent adjoint pair).
// Distinct from std::invalid_argument, which covers caller mistakes such as
// dimension mismatches.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace cosparse
