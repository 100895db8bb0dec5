#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tpvp {

using Scalar = double;
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

}  // namespace tpvp
