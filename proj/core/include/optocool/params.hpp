#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace optocool {

using cplx = std::complex<double>;

/// Linearized optomechanical model. All rates and detunings are expressed in
/// units of the mechanical frequency, so omega_m is normally 1.
struct SystemParams {
  double omega_m = 1.0;
  double kappa = 0.01;
  double gamma = 1e-5;
  double delta_prime = -1.0;  // modified detuning
  cplx G{0.0, 0.0};           // light-enhanced coupling alpha * g
  double n_th = 0.0;

  /// Throws InvalidParams unless omega_m, kappa, gamma > 0 and n_th >= 0.
  void validate() const;

  /// Weaker check used by the propagators: kappa = gamma = 0 (closed system)
  /// is admitted so conservation laws can be exercised.
  void validate_dynamics() const;

  /// gamma << kappa < |G|, checked as gamma <= kappa/10 and |G| >= kappa.
  bool strong_coupling() const;

  SystemParams with_g(cplx g) const;
  SystemParams with_kappa(double k) const;
  SystemParams with_n_th(double n) const;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct DriveParams {
  double delta = -1.0;  // bare detuning omega - omega_c
  double g = 0.0;       // single-photon coupling
  cplx omega{0.0, 0.0};  // drive strength
  double kappa_0 = 0.0;
  double kappa_ex = 0.0;

  double kappa() const { return kappa_0 + kappa_ex; }
  void validate() const;

  friend bool operator==(const DriveParams&, const DriveParams&) = default;
};

struct SteadyState {
  cplx alpha;
  cplx beta;
  double delta_prime = 0.0;
  cplx G;
  double residual = 0.0;
  int iterations = 0;
};

struct SteadyStateOptions {
  int max_iterations = 1000;
  double tolerance = 1e-12;
  double damping = 0.5;
};

/// Classical fixed point of the driven cavity:
///   alpha = -i Omega / (kappa/2 - i delta'),
///   beta  = -i g |alpha|^2 / (i omega_m + gamma/2),
///   delta' = delta - g (beta + beta*).
/// Damped iteration on delta', started from the undriven value delta' = delta,
/// so the branch continuously connected to Omega = 0 is selected.
SteadyState solve_steady_state(const DriveParams& drive, double omega_m, double gamma,
                               const SteadyStateOptions& options = {});

/// Largest of the three fixed-point residuals for a candidate steady state.
double steady_state_residual(const DriveParams& drive, double omega_m, double gamma,
                             const SteadyState& state);

/// Linearized parameters from a solved drive (kappa taken from the drive).
SystemParams linearize(const DriveParams& drive, double omega_m, double gamma, double n_th,
                       const SteadyStateOptions& options = {});

struct Preset {
  std::string name;
  SystemParams params;
  std::string description;
  /// omega_m / 2pi in Hz when the preset describes a concrete device.
  std::optional<double> mechanical_frequency_hz;
};

Preset preset(std::string_view name);
std::vector<std::string> preset_names();

/// Bose-Einstein occupation 1 / (exp(x) - 1) with x = hbar omega_m / (k_B T).
double bose_occupation(double hbar_omega_over_kt);

}  // namespace optocool
