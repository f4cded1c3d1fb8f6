#pragma once

#include <span>
#include <vector>

#include "optocool/params.hpp"

namespace optocool {

/// Truncated two-mode Fock space for brute-force master-equation checks.
struct FockConfig {
  int dim_a = 12;
  int dim_b = 12;
  /// Largest admissible population in the top two levels of either mode.
  double leak_tolerance = 1e-6;
  int state_cap = 400;

  void validate() const;
};

struct OracleOptions {
  bool throw_on_leak = true;
  /// Multiplies the default RK4 step bound 0.01 / (omega_m + kappa + |G| dim).
  double step_scale = 1.0;
};

struct MasterEvolution {
  std::vector<double> times;
  std::vector<double> n_b;
  std::vector<double> n_a;
  std::vector<double> leak;
  double max_step = 0.0;
  double trace_drift = 0.0;       // max |Tr rho - 1|
  double hermiticity = 0.0;       // max |rho_ij - conj(rho_ji)|
  double min_population = 0.0;    // smallest diagonal entry seen
  double renormalization = 0.0;   // thermal weight discarded by the truncation
};

/// Integrates the linearized master equation on the truncated space from
/// |0><0| (x) thermal(n_th), with fixed-step RK4 landing exactly on each
/// sample time. Throws CapExceeded if dim_a * dim_b exceeds the cap and
/// TruncationLeak if the top-level population exceeds the tolerance.
MasterEvolution evolve_master(const SystemParams& params, const FockConfig& cfg,
                              std::span<const double> times, const OracleOptions& options = {});

struct OracleReport {
  double max_abs_dev = 0.0;  // phonon number, oracle vs moment engine
  double max_abs_dev_n_a = 0.0;
  double tol = 0.0;
  bool pass = false;
  double leak_max = 0.0;
  double trace_drift = 0.0;
  double hermiticity = 0.0;
  double min_population = 0.0;
  double halving_dev = 0.0;  // |n_b(h) - n_b(h/2)| of the oracle itself
  double renormalization = 0.0;
  FockConfig config;
  SystemParams params;
};

struct CompareOptions {
  bool throw_on_leak = true;
  bool check_halving = true;
};

OracleReport compare(const SystemParams& params, const FockConfig& cfg,
                     std::span<const double> times, double tol_abs,
                     const CompareOptions& options = {});

double max_abs_deviation(std::span<const double> x, std::span<const double> y);

}  // namespace optocool
