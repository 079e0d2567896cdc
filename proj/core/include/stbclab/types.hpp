#ifndef STBCLAB_TYPES_HPP
#define STBCLAB_TYPES_HPP

#include <complex>
#include <Eigen/Dense>

namespace stbclab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex cplx_i{0.0, 1.0};

} // namespace stbclab

#endif
