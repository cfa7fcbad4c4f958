#pragma once

#include <Eigen/Dense>

namespace grf {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace grf
