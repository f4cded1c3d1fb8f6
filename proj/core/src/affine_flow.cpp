#include "optocool/affine_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optocool/error.hpp"
#include "optocool/expm.hpp"

namespace optocool {

AffineFlow::AffineFlow(Eigen::MatrixXcd drift, Eigen::VectorXcd drive)
    : drift_(std::move(drift)), drive_(std::move(drive)) {
  if (drift_.rows() != drift_.cols() || drive_.size() != drift_.rows()) {
    throw Error(ErrorKind::kInvalidParams, "drift/drive dimension mismatch");
  }
}

Eigen::MatrixXcd AffineFlow::step_matrix(double dt) const {
  const Eigen::Index n = drift_.rows();
  Eigen::MatrixXcd aug = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = drift_ * dt;
  aug.topRightCorner(n, 1) = drive_ * dt;
  return expm(aug);
}

Eigen::VectorXcd AffineFlow::apply(const Eigen::MatrixXcd& e, const Eigen::VectorXcd& x) const {
  const Eigen::Index n = drift_.rows();
  return e.topLeftCorner(n, n) * x + e.topRightCorner(n, 1);
}

Eigen::VectorXcd AffineFlow::advance(const Eigen::VectorXcd& x, double dt) {
  return advance(x, dt, 1e-13 * dt);
}

Eigen::VectorXcd AffineFlow::advance_to(const Eigen::VectorXcd& x, double now, double t) {
  const double dt = t - now;
  const double grid_rounding = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(t);
  return advance(x, dt, std::max(1e-13 * dt, grid_rounding));
}

Eigen::VectorXcd AffineFlow::advance(const Eigen::VectorXcd& x, double dt, double slack) {
  if (dt == 0.0) return x;
  if (cached_dt_ < 0.0 || std::abs(dt - cached_dt_) > slack) {
    cached_step_ = step_matrix(dt);
    cached_dt_ = dt;
  }
  return apply(cached_step_, x);
}

Eigen::VectorXcd AffineFlow::evaluate(const Eigen::VectorXcd& x0, double t) const {
  if (t == 0.0) return x0;
  return apply(step_matrix(t), x0);
}

std::vector<Eigen::VectorXcd> AffineFlow::sample(const Eigen::VectorXcd& x0,
                                                 std::span<const double> times) {
  require_time_grid(times);
  std::vector<Eigen::VectorXcd> out;
  out.reserve(times.size());
  Eigen::VectorXcd x = x0;
  double now = 0.0;
  for (double t : times) {
    x = advance_to(x, now, t);
    now = t;
    out.push_back(x);
  }
  return out;
}

void require_time_grid(std::span<const double> times) {
  if (times.empty()) throw Error(ErrorKind::kInvalidParams, "time grid is empty");
  if (!std::isfinite(times.front()) || times.front() < 0.0) {
    throw Error(ErrorKind::kInvalidParams, "time grid must start at t >= 0");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !(times[i] > times[i - 1])) {
      throw Error(ErrorKind::kInvalidParams, "time grid must be strictly increasing");
    }
  }
}

}  // namespace optocool
