#include "optocool/params.hpp"

#include <cmath>
#include <sstream>

#include "optocool/error.hpp"

namespace optocool {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::kInvalidParams, message);
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(const SystemParams& p) {
  require(std::isfinite(p.omega_m) && std::isfinite(p.kappa) && std::isfinite(p.gamma) &&
              std::isfinite(p.delta_prime) && finite(p.G) && std::isfinite(p.n_th),
          "non-finite parameter");
}

}  // namespace

void SystemParams::validate() const {
  require_finite(*this);
  require(omega_m > 0.0, "omega_m must be > 0");
  require(kappa > 0.0, "kappa must be > 0");
  require(gamma > 0.0, "gamma must be > 0");
  require(n_th >= 0.0, "n_th must be >= 0");
}

void SystemParams::validate_dynamics() const {
  require_finite(*this);
  require(omega_m > 0.0, "omega_m must be > 0");
  require(kappa >= 0.0, "kappa must be >= 0");
  require(gamma >= 0.0, "gamma must be >= 0");
  require(n_th >= 0.0, "n_th must be >= 0");
}

bool SystemParams::strong_coupling() const {
  return gamma <= kappa / 10.0 && std::abs(G) >= kappa;
}

SystemParams SystemParams::with_g(cplx g) const {
  SystemParams p = *this;
  p.G = g;
  return p;
}

SystemParams SystemParams::with_kappa(double k) const {
  SystemParams p = *this;
  p.kappa = k;
  return p;
}

SystemParams SystemParams::with_n_th(double n) const {
  SystemParams p = *this;
  p.n_th = n;
  return p;
}

void DriveParams::validate() const {
  require(std::isfinite(delta) && std::isfinite(g) && finite(omega) && std::isfinite(kappa_0) &&
              std::isfinite(kappa_ex),
          "non-finite drive parameter");
  require(kappa_0 >= 0.0 && kappa_ex >= 0.0, "kappa_0 and kappa_ex must be >= 0");
  require(kappa() > 0.0, "kappa_0 + kappa_ex must be > 0");
}

namespace {

struct FixedPointImage {
  cplx alpha;
  cplx beta;
  double delta_prime;
};

FixedPointImage fixed_point_map(const DriveParams& d, double omega_m, double gamma,
                                double delta_prime) {
  const cplx i(0.0, 1.0);
  FixedPointImage out;
  out.alpha = -i * d.omega / (d.kappa() / 2.0 - i * delta_prime);
  out.beta = -i * d.g * std::norm(out.alpha) / (i * omega_m + gamma / 2.0);
  out.delta_prime = d.delta - d.g * 2.0 * out.beta.real();
  return out;
}

}  // namespace

double steady_state_residual(const DriveParams& d, double omega_m, double gamma,
                             const SteadyState& s) {
  const cplx i(0.0, 1.0);
  const double r_alpha = std::abs(s.alpha * (d.kappa() / 2.0 - i * s.delta_prime) + i * d.omega);
  const double r_beta = std::abs(s.beta * (i * omega_m + gamma / 2.0) + i * d.g * std::norm(s.alpha));
  const double r_delta = std::abs(s.delta_prime - (d.delta - d.g * (s.beta + std::conj(s.beta)).real()));
  return std::max({r_alpha, r_beta, r_delta});
}

SteadyState solve_steady_state(const DriveParams& drive, double omega_m, double gamma,
                               const SteadyStateOptions& options) {
  drive.validate();
  require(std::isfinite(omega_m) && omega_m > 0.0, "omega_m must be > 0");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
  require(options.max_iterations > 0 && options.tolerance > 0.0, "bad iteration settings");
  require(options.damping > 0.0 && options.damping <= 1.0, "damping must lie in (0, 1]");

  double dp = drive.delta;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const FixedPointImage img = fixed_point_map(drive, omega_m, gamma, dp);
    if (!std::isfinite(img.delta_prime)) break;
    const double step = img.delta_prime - dp;
    dp += options.damping * step;
    if (std::abs(step) <= options.tolerance * std::max(1.0, std::abs(dp))) {
      // Evaluate amplitudes at the converged detuning so alpha and beta are
      // mutually consistent.
      const FixedPointImage fin = fixed_point_map(drive, omega_m, gamma, dp);
      SteadyState s{fin.alpha, fin.beta, dp, fin.alpha * drive.g, 0.0, it};
      s.residual = steady_state_residual(drive, omega_m, gamma, s);
      return s;
    }
  }
  std::ostringstream msg;
  msg << "fixed point not reached within " << options.max_iterations
      << " iterations (bistable or marginal drive?)";
  throw Error(ErrorKind::kNonConvergence, msg.str());
}

SystemParams linearize(const DriveParams& drive, double omega_m, double gamma, double n_th,
                       const SteadyStateOptions& options) {
  const SteadyState s = solve_steady_state(drive, omega_m, gamma, options);
  SystemParams p;
  p.omega_m = omega_m;
  p.kappa = drive.kappa();
  p.gamma = gamma;
  p.delta_prime = s.delta_prime;
  p.G = s.G;
  p.n_th = n_th;
  p.validate();
  return p;
}

Preset preset(std::string_view name) {
  if (name == "paper_fig1") {
    SystemParams p;
    p.kappa = 0.01;
    p.gamma = 1e-5;
    p.delta_prime = -1.0;
    p.n_th = 1e3;
    p.G = 0.1;
    return {"paper_fig1", p,
            "red-sideband resonant cooling, kappa=0.01, gamma=1e-5, n_th=1000 (omega_m units)",
            std::nullopt};
  }
  if (name == "microtoroid") {
    constexpr double fm = 78e6;
    SystemParams p;
    p.kappa = 7.1e6 / fm;
    p.gamma = 10e3 / fm;
    p.G = 11.4e6 / fm;
    p.delta_prime = -1.0;
    p.n_th = 1e3;
    return {"microtoroid", p,
            "silica microtoroid: omega_m/2pi=78 MHz, kappa/2pi=7.1 MHz, gamma/2pi=10 kHz, "
            "G/2pi=11.4 MHz",
            fm};
  }
  if (name == "membrane") {
    constexpr double fm = 10.5e6;
    SystemParams p;
    p.kappa = 320e3 / fm;
    p.gamma = 35.0 / fm;
    p.G = 2.0 * p.kappa;
    p.delta_prime = -1.0;
    p.n_th = 1e3;
    return {"membrane", p,
            "superconducting aluminium membrane: omega_m/2pi=10.5 MHz, kappa/2pi=320 kHz, "
            "gamma/2pi=35 Hz, G=2 kappa",
            fm};
  }
  throw Error(ErrorKind::kUnknownPreset, "no preset named '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"paper_fig1", "microtoroid", "membrane"}; }

double bose_occupation(double x) {
  require(std::isfinite(x) && x > 0.0, "hbar omega / k_B T must be > 0");
  return 1.0 / std::expm1(x);
}

}  // namespace optocool
