#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace optocool {

/// Exact propagator for the constant-coefficient system dx/dt = M x + N.
/// The drive is appended as an extra constant state, so one exponential of
/// the augmented (n+1)x(n+1) generator advances x by a step dt.
class AffineFlow {
 public:
  AffineFlow(Eigen::MatrixXcd drift, Eigen::VectorXcd drive);

  Eigen::Index dimension() const { return drift_.rows(); }

  /// x(t0 + dt) from x(t0). The step exponential of the previous call is
  /// reused when dt agrees with it to within `slack` (default 1e-13 dt), which
  /// makes uniform grids cost one exponential in total.
  Eigen::VectorXcd advance(const Eigen::VectorXcd& x, double dt);
  Eigen::VectorXcd advance(const Eigen::VectorXcd& x, double dt, double slack);

  /// x(t) from x(now). Spacings that differ only by the rounding of t itself
  /// count as equal, so linspace grids reuse one exponential.
  Eigen::VectorXcd advance_to(const Eigen::VectorXcd& x, double now, double t);

  /// x(t) from x(0) with a single exponential (no stepping).
  Eigen::VectorXcd evaluate(const Eigen::VectorXcd& x0, double t) const;

  /// Samples x on a strictly increasing grid with times[0] >= 0; x0 is x(0).
  std::vector<Eigen::VectorXcd> sample(const Eigen::VectorXcd& x0, std::span<const double> times);

 private:
  Eigen::MatrixXcd step_matrix(double dt) const;
  Eigen::VectorXcd apply(const Eigen::MatrixXcd& e, const Eigen::VectorXcd& x) const;

  Eigen::MatrixXcd drift_;
  Eigen::VectorXcd drive_;
  double cached_dt_ = -1.0;
  Eigen::MatrixXcd cached_step_;
};

/// Throws InvalidParams unless times is nonempty, finite, starts at >= 0 and
/// is strictly increasing.
void require_time_grid(std::span<const double> times);

}  // namespace optocool
