#ifndef SEMICOMP_EVALUATION_HPP
#define SEMICOMP_EVALUATION_HPP

#include <Eigen/Dense>

namespace semicomp {

/// Objective value with its gradient and Hessian (left empty when not requested).
struct Evaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

}  // namespace semicomp

#endif  // SEMICOMP_EVALUATION_HPP
