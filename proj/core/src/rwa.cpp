#include "optocool/rwa.hpp"

#include <cmath>
#include <numbers>

#include "optocool/affine_flow.hpp"
#include "optocool/error.hpp"

namespace optocool {
namespace {

void require_resonant(const SystemParams& p) {
  if (std::abs(p.delta_prime + p.omega_m) > 1e-12 * p.omega_m) {
    throw Error(ErrorKind::kInvalidParams, "closed-form RWA results need delta' = -omega_m");
  }
}

AffineFlow rwa_flow(const SystemParams& p) {
  const cplx i(0.0, 1.0);
  const double g = std::abs(p.G);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 0) = -p.kappa;
  m(0, 2) = -i * g;
  m(1, 1) = -p.gamma;
  m(1, 2) = i * g;
  m(2, 0) = -2.0 * i * g;
  m(2, 1) = 2.0 * i * g;
  m(2, 2) = -(i * (p.delta_prime + p.omega_m) + (p.kappa + p.gamma) / 2.0);
  Eigen::VectorXcd n = Eigen::VectorXcd::Zero(3);
  n(1) = p.gamma * p.n_th;
  return AffineFlow(std::move(m), std::move(n));
}

}  // namespace

RwaState rwa_initial_state(double n_th) {
  if (!std::isfinite(n_th) || n_th < 0.0) throw Error(ErrorKind::kInvalidParams, "n_th must be >= 0");
  return {0.0, n_th, {0.0, 0.0}};
}

RwaState rwa_project(const MomentVector& v, cplx G) {
  RwaState s{v.n_a(), v.n_b(), {0.0, 0.0}};
  const double g = std::abs(G);
  if (g > 0.0) s.f = (G * v[Moment::kAdagB] - std::conj(G) * v[Moment::kABdag]) / g;
  return s;
}

RwaTrajectory propagate_rwa(const SystemParams& params, const RwaState& state0,
                            std::span<const double> times) {
  params.validate_dynamics();
  AffineFlow flow = rwa_flow(params);
  Eigen::VectorXcd x0(3);
  x0 << state0.n_a, state0.n_b, state0.f;
  const auto xs = flow.sample(x0, times);
  RwaTrajectory tr;
  tr.times.assign(times.begin(), times.end());
  tr.states.reserve(xs.size());
  tr.n_b.reserve(xs.size());
  for (const auto& x : xs) {
    tr.states.push_back({x(0).real(), x(1).real(), x(2)});
    tr.n_b.push_back(x(1).real());
  }
  return tr;
}

RwaState steady_state_rwa(const SystemParams& params) {
  params.validate_dynamics();
  if (!(params.kappa + params.gamma > 0.0)) {
    throw Error(ErrorKind::kUnstableSystem, "no dissipation, no stationary state");
  }
  const cplx i(0.0, 1.0);
  const double g = std::abs(params.G);
  Eigen::Matrix3cd m;
  m << -params.kappa, 0.0, -i * g,  //
      0.0, -params.gamma, i * g,    //
      -2.0 * i * g, 2.0 * i * g, -(i * (params.delta_prime + params.omega_m) + (params.kappa + params.gamma) / 2.0);
  Eigen::Vector3cd n(0.0, params.gamma * params.n_th, 0.0);
  Eigen::FullPivLU<Eigen::Matrix3cd> lu(m);
  if (!lu.isInvertible()) throw Error(ErrorKind::kUnstableSystem, "singular RWA drift matrix");
  const Eigen::Vector3cd x = -lu.solve(n);
  return {x(0).real(), x(1).real(), x(2)};
}

double nb_rwa_analytic(const SystemParams& p, double t) {
  p.validate();
  require_resonant(p);
  const double g = std::abs(p.G);
  const double total = p.kappa + p.gamma;
  const double c = std::cos(g * t);
  const double s = std::sin(g * t);
  return p.n_th * (p.gamma + std::exp(-total * t / 2.0) * (p.kappa * c * c - p.gamma * s * s)) / total;
}

Envelopes envelopes(const SystemParams& p, double t) {
  p.validate();
  require_resonant(p);
  const double total = p.kappa + p.gamma;
  const double decay = std::exp(-total * t / 2.0);
  return {p.n_th * decay, p.n_th * (1.0 - decay) * p.gamma / total};
}

InstantaneousLimit n_ins_rwa(const SystemParams& p) {
  p.validate_dynamics();
  const double g = std::abs(p.G);
  if (g == 0.0) throw Error(ErrorKind::kInvalidParams, "instantaneous RWA limit needs G != 0");
  return {std::numbers::pi * p.gamma * p.n_th / (4.0 * g), std::numbers::pi / (2.0 * g)};
}

double corrected_splitting(const SystemParams& p) {
  p.validate_dynamics();
  const double g = std::abs(p.G);
  const double radicand = g * g - p.kappa * p.kappa / 16.0;
  if (g < p.kappa / 4.0) {
    throw Error(ErrorKind::kWeakCoupling, "|G| < kappa/4: no normal-mode splitting");
  }
  return 2.0 * std::sqrt(std::max(radicand, 0.0));
}

}  // namespace optocool
