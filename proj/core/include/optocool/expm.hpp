#pragma once

#include <Eigen/Dense>

namespace optocool {

/// Matrix exponential by scaling and squaring with diagonal Pade approximants
/// of degree 3, 5, 7, 9 or 13 (Higham's 2005 selection thresholds).
/// Throws SingularPropagation if the result is not finite.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

}  // namespace optocool
