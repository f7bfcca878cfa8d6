#pragma once

#include <Eigen/Dense>

namespace lrnn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace lrnn
