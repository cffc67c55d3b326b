#pragma once

#include <Eigen/Dense>

namespace gpc {

/// exp(A) by scaling and squaring: A is scaled by 2^-s until its 1-norm is at
/// most 1/2, exponentiated with a Taylor series run to machine precision, and
/// squared s times.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

}  // namespace gpc
