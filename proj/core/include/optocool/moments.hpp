#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "optocool/operator_algebra.hpp"
#include "optocool/params.hpp"

namespace optocool {

inline constexpr std::size_t kMomentCount = 10;

/// Ordering of the second moments of the fluctuation operators a1, b1.
enum class Moment : std::size_t {
  kNa = 0,     // <a†a>
  kNb,         // <b†b>
  kAdagB,      // <a†b>
  kABdag,      // <a b†>
  kAB,         // <a b>
  kAdagBdag,   // <a†b†>
  kAA,         // <a²>
  kAdagAdag,   // <a†²>
  kBB,         // <b²>
  kBdagBdag,   // <b†²>
};

/// Normal-ordered operator behind each moment, in Moment order.
const std::array<algebra::Monomial, kMomentCount>& moment_basis();
/// Short column names: na, nb, adagb, abdag, ab, adagbdag, aa, adagadag, bb, bdagbdag.
const std::array<std::string_view, kMomentCount>& moment_names();

struct MomentVector {
  std::array<cplx, kMomentCount> v{};

  cplx& operator[](Moment m) { return v[static_cast<std::size_t>(m)]; }
  cplx operator[](Moment m) const { return v[static_cast<std::size_t>(m)]; }
  double n_a() const { return v[0].real(); }
  double n_b() const { return v[1].real(); }

  Eigen::VectorXcd to_eigen() const;
  static MomentVector from_eigen(const Eigen::VectorXcd& x);

  /// Describes the first broken invariant, if any: N_a and N_b real and
  /// nonnegative, and the four hermitian pairs conjugate, all to rel_tol
  /// relative to 1 + max|v|.
  std::optional<std::string> invariant_violation(double rel_tol = 1e-9) const;
};

/// Which part of the linearized coupling (G a† + G* a)(b + b†) is kept.
enum class Coupling {
  kFull,              // beam splitter + two-mode squeezing
  kBeamSplitterOnly,  // rotating-wave terms G a†b + G* a b† only
};

struct MomentMatrices {
  Eigen::Matrix<cplx, 10, 10> m;
  Eigen::Matrix<cplx, 10, 1> n;
};

/// Quadratic Hamiltonian and jump operators of the linearized master equation.
algebra::Lindbladian lindbladian(const SystemParams& params, Coupling coupling = Coupling::kFull);

/// d<O_k>/dt = sum_j M_kj <O_j> + N_k for the ten basis moments O_k, derived
/// symbolically from the generator. Throws InvalidParams if the equations do
/// not close on the basis (non-quadratic generator).
MomentMatrices moment_equations(const algebra::Lindbladian& generator);

MomentMatrices build_matrices(const SystemParams& params, Coupling coupling = Coupling::kFull);

/// Thermal mechanics, empty cavity: (0, n_th, 0, ..., 0).
MomentVector initial_vector(double n_th);

struct Trajectory {
  std::vector<double> times;
  std::vector<MomentVector> states;
  std::vector<double> n_b;
  std::vector<double> n_a;
};

Trajectory make_trajectory(std::span<const double> times, std::vector<MomentVector> states);

/// V(t) = e^{Mt} V(0) + (int_0^t e^{Ms} ds) N on every grid point.
Trajectory propagate(const MomentMatrices& matrices, const MomentVector& v0,
                     std::span<const double> times);

struct KappaSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  double kappa = 0.0;
};

/// Piecewise-constant cavity decay kappa(t). Segments must be contiguous,
/// start at t = 0 and carry kappa > 0.
class KappaSchedule {
 public:
  explicit KappaSchedule(std::vector<KappaSegment> segments);
  static KappaSchedule constant(double kappa, double t_end);

  const std::vector<KappaSegment>& segments() const { return segments_; }
  double end() const { return segments_.back().t_end; }
  std::size_t segment_index(double t) const;

 private:
  std::vector<KappaSegment> segments_;
};

/// Propagates with M rebuilt per schedule segment; V is continuous across
/// breakpoints. Throws ScheduleGap if the schedule ends before the grid.
Trajectory propagate_modulated(const SystemParams& params, const KappaSchedule& schedule,
                               const MomentVector& v0, std::span<const double> times);

/// V_ss = -M^{-1} N. Throws UnstableSystem unless every eigenvalue of M has a
/// strictly negative real part.
MomentVector steady_state_moments(const MomentMatrices& matrices);

}  // namespace optocool
