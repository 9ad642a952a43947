#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qbeat {

using Complex = std::complex<double>;

using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3d;

// Two-triplet product space, basis order (xx,xy,xz,yx,yy,yz,zx,zy,zz),
// first factor = left exciton.
using Mat9c = Eigen::Matrix<Complex, 9, 9>;
using Vec9c = Eigen::Matrix<Complex, 9, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;

}  // namespace qbeat
