#pragma once

#include <vector>

#include "optocool/params.hpp"
#include "optocool/rwa.hpp"

namespace optocool {

/// Every closed form below diverges as |G| -> omega_m/2; they refuse to
/// evaluate at |G| >= kDivergenceGuard * omega_m.
inline constexpr double kDivergenceGuard = 0.499;

/// Normal-mode frequencies of the resonant (delta' = -omega_m) linearized
/// Hamiltonian, omega_± = sqrt(omega_m² ± 2|G| omega_m).
struct EigenFrequencies {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double sum = 0.0;   // carrier, counter-rotating
  double diff = 0.0;  // envelope, rotating-wave
};

/// Throws BackactionDivergence at |G| >= 0.499 omega_m.
EigenFrequencies eigenfrequencies(double g_abs, double omega_m = 1.0);

/// Zero-temperature phonon number
///   |G|² [1 - e^{-(kappa+gamma)t/2} cos((w+ + w-)t) cos((w+ - w-)t)] / [2(omega_m² - 4|G|²)].
double nb_zero_temp_analytic(const SystemParams& params, double t);

/// |G|² / [2(omega_m² - 4|G|²)], the zero-temperature steady-state limit.
double backaction_steady_state_limit(const SystemParams& params);

/// Frequency-matching island: (w+ + w-) t = p pi and (w+ - w-) t = q pi, with
/// p and q both odd integers or both even integers and p > q.
struct IslandSpec {
  int p = 0;
  int q = 0;
  double g_opt = 0.0;  // pq/(p² + q²) in omega_m units
  double t_opt = 0.0;  // sqrt(p² + q²) pi/(2 omega_m)
  bool reducible = false;  // gcd(p, q) > 1
};

IslandSpec island(int p, int q, double omega_m = 1.0);

/// All parity-matched p > q >= 1 with p <= p_max, ordered by t_opt (ties by
/// p, then q). Throws InvalidParams for p_max < 3.
std::vector<IslandSpec> island_catalog(int p_max, double omega_m = 1.0);

/// pi kappa |G| / [8(omega_m² - 4|G|²)] at t = pi/(w+ - w-); gamma terms dropped.
InstantaneousLimit n_ins_zero_temp(const SystemParams& params);

struct LimitBounds {
  double upper = 0.0;  // frequency-unmatched
  double lower = 0.0;  // frequency-matched, = n_ins_rwa + n_ins_zero_temp
};

/// upper = pi gamma n_th/(4|G|) + pi²|G|⁴ / [(omega_m² - |G|²)(omega_m² - 4|G|²)]
/// lower = pi gamma n_th/(4|G|) + pi kappa |G| / [8(omega_m² - 4|G|²)]
LimitBounds n_ins_bounds(const SystemParams& params);

}  // namespace optocool
