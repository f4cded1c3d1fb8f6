#pragma once

#include <span>
#include <vector>

#include "optocool/moments.hpp"
#include "optocool/params.hpp"

namespace optocool {

/// Reduced rotating-wave state: photon number, phonon number and the
/// optomechanical coherence F = (G<a†b> - G*<a b†>)/|G|.
struct RwaState {
  double n_a = 0.0;
  double n_b = 0.0;
  cplx f{0.0, 0.0};
};

struct RwaTrajectory {
  std::vector<double> times;
  std::vector<RwaState> states;
  std::vector<double> n_b;
};

RwaState rwa_initial_state(double n_th);

/// Coherence F extracted from a full moment vector.
RwaState rwa_project(const MomentVector& v, cplx G);

/// Exact propagation of
///   dN_a/dt = -i|G| F - kappa N_a
///   dN_b/dt =  i|G| F - gamma N_b + gamma n_th
///   dF/dt   = -2i|G| (N_a - N_b) - [i(delta' + omega_m) + (kappa+gamma)/2] F.
/// For delta' = -omega_m this is the beam-splitter-only moment system
/// restricted to (N_a, N_b, F); away from resonance the detuning term is kept
/// as written, which is an approximation.
RwaTrajectory propagate_rwa(const SystemParams& params, const RwaState& state0,
                            std::span<const double> times);

/// Stationary point of the three-moment system. Throws UnstableSystem if the
/// system has no unique stationary point (kappa + gamma = 0).
RwaState steady_state_rwa(const SystemParams& params);

/// n_th [gamma + e^{-(kappa+gamma)t/2} (kappa cos²(|G|t) - gamma sin²(|G|t))] / (kappa+gamma).
/// Requires delta' = -omega_m.
double nb_rwa_analytic(const SystemParams& params, double t);

struct Envelopes {
  double upper = 0.0;
  double lower = 0.0;
};

/// upper = n_th e^{-(kappa+gamma)t/2}, lower = n_th (1 - e^{-(kappa+gamma)t/2}) gamma/(kappa+gamma).
Envelopes envelopes(const SystemParams& params, double t);

struct InstantaneousLimit {
  double limit = 0.0;
  double t_min = 0.0;
};

/// pi gamma n_th / (4|G|), reached at t = pi/(2|G|). Independent of kappa.
/// Throws InvalidParams for G = 0.
InstantaneousLimit n_ins_rwa(const SystemParams& params);

/// Dissipation-corrected normal-mode splitting 2 sqrt(|G|² - kappa²/16); the
/// oscillation period pi/sqrt(|G|² - kappa²/16) is slightly longer than pi/|G|.
/// Throws WeakCoupling for |G| < kappa/4.
double corrected_splitting(const SystemParams& params);

}  // namespace optocool
