#pragma once

#include <Eigen/Dense>

namespace wcalc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace wcalc
