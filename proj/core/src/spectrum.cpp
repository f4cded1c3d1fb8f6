#include "optocool/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "optocool/error.hpp"

namespace optocool {
namespace {

void guard(double g_abs, double omega_m) {
  if (!std::isfinite(g_abs) || g_abs < 0.0) {
    throw Error(ErrorKind::kInvalidParams, "|G| must be finite and >= 0");
  }
  if (!std::isfinite(omega_m) || omega_m <= 0.0) {
    throw Error(ErrorKind::kInvalidParams, "omega_m must be > 0");
  }
  if (g_abs >= kDivergenceGuard * omega_m) {
    std::ostringstream os;
    os << "|G| = " << g_abs << " is at or beyond the backaction divergence at omega_m/2";
    throw Error(ErrorKind::kBackactionDivergence, os.str());
  }
}

double backaction_denominator(double g, double wm) { return wm * wm - 4.0 * g * g; }

}  // namespace

EigenFrequencies eigenfrequencies(double g_abs, double omega_m) {
  guard(g_abs, omega_m);
  EigenFrequencies f;
  f.omega_plus = std::sqrt(omega_m * omega_m + 2.0 * g_abs * omega_m);
  f.omega_minus = std::sqrt(omega_m * omega_m - 2.0 * g_abs * omega_m);
  f.sum = f.omega_plus + f.omega_minus;
  f.diff = f.omega_plus - f.omega_minus;
  return f;
}

double nb_zero_temp_analytic(const SystemParams& p, double t) {
  p.validate_dynamics();
  if (std::abs(p.delta_prime + p.omega_m) > 1e-12 * p.omega_m) {
    throw Error(ErrorKind::kInvalidParams, "zero-temperature closed form needs delta' = -omega_m");
  }
  const double g = std::abs(p.G);
  const EigenFrequencies f = eigenfrequencies(g, p.omega_m);
  const double decay = std::exp(-(p.kappa + p.gamma) * t / 2.0);
  return g * g * (1.0 - decay * std::cos(f.sum * t) * std::cos(f.diff * t)) /
         (2.0 * backaction_denominator(g, p.omega_m));
}

double backaction_steady_state_limit(const SystemParams& p) {
  const double g = std::abs(p.G);
  guard(g, p.omega_m);
  return g * g / (2.0 * backaction_denominator(g, p.omega_m));
}

IslandSpec island(int p, int q, double omega_m) {
  if (q < 1 || p <= q || (p - q) % 2 != 0) {
    std::ostringstream os;
    os << "(" << p << ", " << q << ") is not a parity-matched pair with p > q >= 1";
    throw Error(ErrorKind::kInvalidParams, os.str());
  }
  const long long num = static_cast<long long>(p) * q;
  const long long den = static_cast<long long>(p) * p + static_cast<long long>(q) * q;
  IslandSpec s;
  s.p = p;
  s.q = q;
  s.g_opt = static_cast<double>(num) / static_cast<double>(den) * omega_m;
  s.t_opt = std::sqrt(static_cast<double>(den)) * std::numbers::pi / (2.0 * omega_m);
  s.reducible = std::gcd(p, q) > 1;
  return s;
}

std::vector<IslandSpec> island_catalog(int p_max, double omega_m) {
  if (p_max < 3) throw Error(ErrorKind::kInvalidParams, "p_max must be >= 3");
  std::vector<IslandSpec> out;
  for (int p = 2; p <= p_max; ++p) {
    for (int q = p - 2; q >= 1; q -= 2) out.push_back(island(p, q, omega_m));
  }
  std::sort(out.begin(), out.end(), [](const IslandSpec& x, const IslandSpec& y) {
    if (x.t_opt != y.t_opt) return x.t_opt < y.t_opt;
    if (x.p != y.p) return x.p < y.p;
    return x.q < y.q;
  });
  return out;
}

InstantaneousLimit n_ins_zero_temp(const SystemParams& p) {
  p.validate_dynamics();
  const double g = std::abs(p.G);
  const EigenFrequencies f = eigenfrequencies(g, p.omega_m);
  const double limit =
      std::numbers::pi * p.kappa * g / (8.0 * backaction_denominator(g, p.omega_m));
  const double t_min = f.diff > 0.0 ? std::numbers::pi / f.diff : INFINITY;
  return {limit, t_min};
}

LimitBounds n_ins_bounds(const SystemParams& p) {
  p.validate_dynamics();
  const double g = std::abs(p.G);
  guard(g, p.omega_m);
  const double thermal = n_ins_rwa(p).limit;
  const double wm2 = p.omega_m * p.omega_m;
  const double g2 = g * g;
  LimitBounds b;
  b.upper = thermal + std::numbers::pi * std::numbers::pi * g2 * g2 / ((wm2 - g2) * (wm2 - 4.0 * g2));
  b.lower = thermal + n_ins_zero_temp(p).limit;
  return b;
}

}  // namespace optocool
